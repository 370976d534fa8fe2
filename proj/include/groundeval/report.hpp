#pragma once

// Aggregation and report emission: factor breakdowns, degradation rates,
// correlation with external benchmark scores, and plot-data files. Tables
// are tab-separated with a header row and render to 1 decimal; plot-data
// files keep raw fractions. Every cell carries its n so it can be
// recomputed from the run directory.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "groundeval/errors.hpp"
#include "groundeval/harness.hpp"

namespace groundeval {

struct AggregateRow {
    std::string group_key;  // factor value(s), or "all"
    double mean_precision = 0.0;  // x100
    double mean_recall = 0.0;     // x100
    double mean_f1 = 0.0;         // x100
    std::optional<double> mean_answer_accuracy;  // x100, definite only
    size_t n = 0;
    size_t n_errors = 0;
};

namespace detail {

inline std::vector<std::string> factor_values(const std::string& factor) {
    if (factor == "popularity") return {"high", "low"};
    if (factor == "multiplicity") return {"single", "multi"};
    if (factor == "answer_format") return {"definite", "free_form"};
    throw std::invalid_argument("unknown factor name: " + factor);
}

inline std::string factor_value(const FactorLabels& labels, const std::string& factor) {
    if (factor == "popularity") return to_string(labels.popularity);
    if (factor == "multiplicity") return to_string(labels.multiplicity);
    if (factor == "answer_format") return to_string(labels.answer_format);
    throw std::invalid_argument("unknown factor name: " + factor);
}

}  // namespace detail

// Unweighted means over instance scores per group. Groups are emitted in
// canonical order: the cartesian product of the factor value lists in the
// order given (popularity: high,low; multiplicity: single,multi;
// answer_format: definite,free_form). Errored instances are excluded from
// means and counted per group. An empty group_by yields one "all" row.
inline std::vector<AggregateRow> aggregate(const RunResult& run,
                                           const std::vector<std::string>& group_by) {
    std::vector<std::string> keys;
    if (group_by.empty()) {
        keys.push_back("all");
    } else {
        keys.push_back("");
        for (const auto& factor : group_by) {
            std::vector<std::string> expanded;
            for (const auto& prefix : keys)
                for (const auto& v : detail::factor_values(factor))
                    expanded.push_back(prefix.empty() ? v : prefix + "|" + v);
            keys = std::move(expanded);
        }
    }

    struct Acc {
        double p = 0, r = 0, f = 0, acc = 0;
        size_t n = 0, n_acc = 0, n_err = 0;
    };
    std::map<std::string, Acc> groups;

    for (const auto& [id, rec] : run.records) {
        std::string key;
        if (group_by.empty()) {
            key = "all";
        } else {
            for (const auto& factor : group_by) {
                if (!key.empty()) key += "|";
                key += detail::factor_value(rec.factors, factor);
            }
        }
        auto& acc = groups[key];
        if (!rec.error.empty()) {
            ++acc.n_err;
            continue;
        }
        if (rec.score) {
            acc.p += rec.score->precision;
            acc.r += rec.score->recall;
            acc.f += rec.score->f1;
            ++acc.n;
        }
        if (rec.answer_acc) {
            acc.acc += *rec.answer_acc;
            ++acc.n_acc;
        }
    }

    std::vector<AggregateRow> rows;
    for (const auto& key : keys) {
        auto it = groups.find(key);
        if (it == groups.end()) continue;  // empty groups are not emitted
        const auto& acc = it->second;
        AggregateRow row;
        row.group_key = key;
        row.n = acc.n;
        row.n_errors = acc.n_err;
        if (acc.n) {
            row.mean_precision = 100.0 * acc.p / static_cast<double>(acc.n);
            row.mean_recall = 100.0 * acc.r / static_cast<double>(acc.n);
            row.mean_f1 = 100.0 * acc.f / static_cast<double>(acc.n);
        }
        if (acc.n_acc)
            row.mean_answer_accuracy = 100.0 * acc.acc / static_cast<double>(acc.n_acc);
        rows.push_back(std::move(row));
    }
    return rows;
}

// (base - treated) / base x100.
inline double degradation_rate(double base, double treated) {
    if (base == 0.0) throw std::invalid_argument("degradation_rate: base is 0");
    return (base - treated) / base * 100.0;
}

// Product-moment correlation coefficient.
inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    if (xs.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

namespace detail {

inline std::string fmt1(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(1) << v;
    return ss.str();
}

inline std::string opt1(const std::optional<double>& v) {
    return v ? fmt1(*v) : std::string("-");
}

}  // namespace detail

// Writes the report files for a set of runs into out_dir:
//   overall.tsv            model x dataset_tag grounding table
//   factors_<run_id>.tsv   per-run factor breakdown
//   positions.tsv          gold-position summary (runs with a placement)
//   plotdata/<series>.csv  x,y series with a series-name header
//   correlation.txt        when external scores are provided
inline std::vector<std::filesystem::path> emit_report(
    const std::vector<RunResult>& runs,
    const std::map<std::string, double>& external_scores,
    const std::filesystem::path& out_dir) {
    if (runs.empty()) throw std::invalid_argument("emit_report: no runs");
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;

    auto open = [&](const std::filesystem::path& p) {
        std::ofstream out(p);
        if (!out) throw Error("cannot write file: " + p.string());
        written.push_back(p);
        return out;
    };

    {
        auto out = open(out_dir / "overall.tsv");
        out << "model_id\tdataset_tag\tprecision\trecall\tf1\tanswer_accuracy\tn\t"
               "n_errors\n";
        for (const auto& run : runs) {
            auto rows = aggregate(run, {});
            const AggregateRow row = rows.empty() ? AggregateRow{} : rows.front();
            out << run.model_id << "\t" << to_string(run.tag) << "\t"
                << detail::fmt1(row.mean_precision) << "\t"
                << detail::fmt1(row.mean_recall) << "\t" << detail::fmt1(row.mean_f1)
                << "\t" << detail::opt1(row.mean_answer_accuracy) << "\t" << row.n
                << "\t" << row.n_errors << "\n";
        }
    }

    for (const auto& run : runs) {
        auto out = open(out_dir / ("factors_" + run.run_id + ".tsv"));
        out << "factor\tvalue\tprecision\trecall\tf1\tanswer_accuracy\tn\tn_errors\n";
        for (const std::string factor :
             {"popularity", "multiplicity", "answer_format"}) {
            for (const auto& row : aggregate(run, {factor})) {
                out << factor << "\t" << row.group_key << "\t"
                    << detail::fmt1(row.mean_precision) << "\t"
                    << detail::fmt1(row.mean_recall) << "\t"
                    << detail::fmt1(row.mean_f1) << "\t"
                    << detail::opt1(row.mean_answer_accuracy) << "\t" << row.n << "\t"
                    << row.n_errors << "\n";
            }
        }
    }

    // Gold-position and length-sweep summaries, when runs carry them.
    std::vector<const RunResult*> position_runs, length_runs;
    for (const auto& run : runs) {
        if (run.config.contains("placement")) position_runs.push_back(&run);
        if (run.config.contains("budget")) length_runs.push_back(&run);
    }
    if (!position_runs.empty()) {
        auto out = open(out_dir / "positions.tsv");
        out << "run_id\tmodel_id\tplacement\tf1\tn\n";
        for (const auto* run : position_runs) {
            auto rows = aggregate(*run, {});
            const AggregateRow row = rows.empty() ? AggregateRow{} : rows.front();
            out << run->run_id << "\t" << run->model_id << "\t"
                << run->config["placement"].get<std::string>() << "\t"
                << detail::fmt1(row.mean_f1) << "\t" << row.n << "\n";
        }
    }
    if (!length_runs.empty()) {
        std::filesystem::create_directories(out_dir / "plotdata");
        std::map<std::string, std::vector<std::pair<double, double>>> series;
        for (const auto* run : length_runs) {
            auto rows = aggregate(*run, {});
            const AggregateRow row = rows.empty() ? AggregateRow{} : rows.front();
            series[run->model_id].emplace_back(run->config["budget"].get<double>(),
                                               row.mean_f1 / 100.0);
        }
        for (auto& [model, points] : series) {
            std::sort(points.begin(), points.end());
            auto out =
                open(out_dir / "plotdata" / ("length_sweep_" + model + ".csv"));
            out << "series,length_sweep_" << model << "\nx,y\n";
            for (const auto& [x, y] : points) out << x << "," << y << "\n";
        }
    }

    if (!external_scores.empty()) {
        auto out = open(out_dir / "correlation.txt");
        std::vector<double> xs, ys;
        for (const auto& run : runs) {
            auto it = external_scores.find(run.model_id);
            if (it == external_scores.end()) continue;
            auto rows = aggregate(run, {});
            if (rows.empty() || rows.front().n == 0) continue;
            xs.push_back(rows.front().mean_f1);
            ys.push_back(it->second);
        }
        if (xs.size() < 3) {
            out << "pearson: insufficient n (" << xs.size() << " paired models)\n";
        } else {
            out << "pearson: " << pearson(xs, ys) << " over n=" << xs.size()
                << " paired models\n";
        }
    }

    return written;
}

}  // namespace groundeval
