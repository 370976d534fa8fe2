#pragma once

// Context perturbation: distractor ranking and injection, gold-position
// placement, token budgets, popularity bucketing, hyperlink hop sampling,
// and conflict-pair consistency checks.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "groundeval/core.hpp"
#include "groundeval/errors.hpp"
#include "groundeval/oracle.hpp"
#include "groundeval/text.hpp"

namespace groundeval {

// The gold block stays contiguous; a placement picks where it starts among
// the distractors. middle uses floor((n_docs - n_gold) / 2).
struct PlacementStrategy {
    enum class Kind { end, beginning, middle, random };
    Kind kind = Kind::end;
    uint64_t seed = 0;  // random only
};

inline const char* to_string(PlacementStrategy::Kind k) {
    switch (k) {
        case PlacementStrategy::Kind::end: return "end";
        case PlacementStrategy::Kind::beginning: return "beginning";
        case PlacementStrategy::Kind::middle: return "middle";
        case PlacementStrategy::Kind::random: return "random";
    }
    return "?";
}

inline PlacementStrategy::Kind placement_from_string(const std::string& s) {
    if (s == "end") return PlacementStrategy::Kind::end;
    if (s == "beginning") return PlacementStrategy::Kind::beginning;
    if (s == "middle") return PlacementStrategy::Kind::middle;
    if (s == "random") return PlacementStrategy::Kind::random;
    throw ParseError("unknown placement: " + s);
}

// Token budget for assembled contexts. Counts document body tokens; the
// counter is pluggable because real budgets are tokenizer dependent, but
// desk-scale tests must not need a tokenizer asset.
struct BudgetSpec {
    size_t max_tokens = 2048;
    text::TokenCounter counter = text::whitespace_counter();
};

class RelevanceRanker {
public:
    virtual ~RelevanceRanker() = default;
    virtual double score(const std::string& question,
                         const ContextDocument& doc) = 0;
    virtual std::string id() const = 0;
};

// Lexical default: count of shared content-word stems between question and
// document body.
class TermOverlapRanker : public RelevanceRanker {
public:
    double score(const std::string& question, const ContextDocument& doc) override {
        return scorer_.score(question, doc.body);
    }
    std::string id() const override { return "term_overlap"; }

private:
    TermOverlapScorer scorer_;
};

// Adapts any pair scorer (e.g. an embedding-backed one) into a ranker.
class ScorerRanker : public RelevanceRanker {
public:
    explicit ScorerRanker(std::shared_ptr<PairScorer> scorer)
        : scorer_(std::move(scorer)) {}
    double score(const std::string& question, const ContextDocument& doc) override {
        return scorer_->score(question, doc.body);
    }
    std::string id() const override { return scorer_->id(); }

private:
    std::shared_ptr<PairScorer> scorer_;
};

// Ranks corpus documents by relevance to the question, excluding documents
// whose title is in the exclusion set (gold-bearing documents). Descending
// score; ties keep corpus order. An empty post-exclusion corpus yields an
// empty list, not an error.
inline std::vector<ContextDocument> rank_distractors(
    const std::string& question, const std::vector<ContextDocument>& corpus,
    RelevanceRanker& ranker, const std::set<std::string>& exclude_doc_titles,
    size_t top_n = 40) {
    if (corpus.empty()) throw std::invalid_argument("rank_distractors: corpus empty");
    if (top_n < 1) throw std::invalid_argument("rank_distractors: top_n < 1");

    std::vector<std::pair<double, size_t>> scored;
    for (size_t i = 0; i < corpus.size(); ++i) {
        if (exclude_doc_titles.count(corpus[i].title)) continue;
        scored.emplace_back(ranker.score(question, corpus[i]), i);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<ContextDocument> out;
    for (const auto& [score, idx] : scored) {
        if (out.size() >= top_n) break;
        auto doc = corpus[idx];
        doc.is_gold = false;
        out.push_back(std::move(doc));
    }
    return out;
}

// Builds a *-Dist instance: distractors taken in rank order until the next
// one would exceed the budget, gold block inserted per placement. Gold
// documents, gold facts, question, answers, and factors are untouched.
inline Instance inject_distractors(const Instance& inst,
                                   const std::vector<ContextDocument>& ranked,
                                   const BudgetSpec& budget,
                                   const PlacementStrategy& placement) {
    for (const auto& d : inst.contexts)
        if (!d.is_gold)
            throw std::invalid_argument(
                "inject_distractors: input instance has non-gold contexts");
    for (const auto& d : ranked)
        if (d.is_gold)
            throw std::invalid_argument(
                "inject_distractors: ranked documents must not be gold");

    size_t used = 0;
    for (const auto& d : inst.contexts) used += budget.counter(d.body);
    if (used > budget.max_tokens)
        throw Error("budget below gold size: gold contexts need " +
                    std::to_string(used) + " tokens, budget is " +
                    std::to_string(budget.max_tokens));

    std::vector<ContextDocument> distractors;
    for (const auto& d : ranked) {
        size_t cost = budget.counter(d.body);
        if (used + cost > budget.max_tokens) break;
        used += cost;
        distractors.push_back(d);
    }

    size_t n_dist = distractors.size();
    size_t gold_at = 0;
    switch (placement.kind) {
        case PlacementStrategy::Kind::beginning: gold_at = 0; break;
        case PlacementStrategy::Kind::end: gold_at = n_dist; break;
        case PlacementStrategy::Kind::middle: gold_at = n_dist / 2; break;
        case PlacementStrategy::Kind::random: {
            std::mt19937_64 rng(placement.seed);
            gold_at = std::uniform_int_distribution<size_t>(0, n_dist)(rng);
            break;
        }
    }

    Instance out = inst;
    out.contexts.clear();
    out.contexts.reserve(n_dist + inst.contexts.size());
    for (size_t i = 0; i < gold_at; ++i) out.contexts.push_back(distractors[i]);
    for (const auto& g : inst.contexts) out.contexts.push_back(g);
    for (size_t i = gold_at; i < n_dist; ++i) out.contexts.push_back(distractors[i]);

    // gold facts cite positions inside the gold block; shift by its offset
    for (auto& f : out.gold_facts)
        if (f.source_doc_index) *f.source_doc_index += gold_at;
    return out;
}

// --- popularity bucketing ----------------------------------------------------

struct PageviewRecord {
    std::string title;
    uint64_t views = 0;
    std::string month;  // e.g. "2023-01"
};

// Tab-separated lines: title, views, month-tag. Malformed lines are hard
// errors naming the line.
inline std::vector<PageviewRecord> load_pageview_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open pageview file: " + path);
    std::vector<PageviewRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 3 tab-separated fields");
        PageviewRecord rec;
        rec.title = line.substr(0, t1);
        std::string views = line.substr(t1 + 1, t2 - t1 - 1);
        rec.month = text::trim(line.substr(t2 + 1));
        if (rec.title.empty() || views.empty() ||
            views.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": malformed pageview record");
        rec.views = std::stoull(views);
        out.push_back(std::move(rec));
    }
    return out;
}

struct PopularityBuckets {
    std::set<std::string> high;
    std::set<std::string> low;
};

// Sums views per title, ranks by (views desc, title asc), and takes the
// top/bottom fractions. Disjoint by construction since both fractions are
// at most one half.
inline PopularityBuckets popularity_bucket(const std::vector<PageviewRecord>& records,
                                           double top_frac = 0.3,
                                           double bottom_frac = 0.3) {
    if (records.empty())
        throw std::invalid_argument("popularity_bucket: no records");
    if (top_frac <= 0.0 || top_frac > 0.5 || bottom_frac <= 0.0 || bottom_frac > 0.5)
        throw std::invalid_argument("popularity_bucket: fractions must be in (0, 0.5]");

    std::map<std::string, uint64_t> totals;
    for (const auto& r : records) totals[r.title] += r.views;

    std::vector<std::pair<std::string, uint64_t>> ranked(totals.begin(), totals.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    size_t n = ranked.size();
    size_t k_high = static_cast<size_t>(static_cast<double>(n) * top_frac);
    size_t k_low = static_cast<size_t>(static_cast<double>(n) * bottom_frac);

    PopularityBuckets buckets;
    for (size_t i = 0; i < k_high; ++i) buckets.high.insert(ranked[i].first);
    for (size_t i = n - k_low; i < n; ++i) buckets.low.insert(ranked[i].first);
    return buckets;
}

// --- hyperlink hop sampling ---------------------------------------------------

using LinkGraph = std::unordered_map<std::string, std::vector<std::string>>;

// Tab-separated lines: title, outlink, outlink, ...
inline LinkGraph load_link_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open link-graph file: " + path);
    LinkGraph graph;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        std::vector<std::string> fields;
        size_t pos = 0;
        while (pos <= line.size()) {
            auto tab = line.find('\t', pos);
            fields.push_back(line.substr(
                pos, tab == std::string::npos ? std::string::npos : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (fields.empty() || fields[0].empty())
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": link-graph record has no title");
        auto& links = graph[fields[0]];
        for (size_t i = 1; i < fields.size(); ++i)
            if (!fields[i].empty()) links.push_back(fields[i]);
    }
    return graph;
}

// Samples companion titles for a document set: titles reachable within
// max_hops of start that are also on the popularity list. Deterministic
// for a fixed seed. Empty intersection returns {start} alone.
inline std::set<std::string> hop_sample(const LinkGraph& link_graph,
                                        const std::set<std::string>& popularity_list,
                                        const std::string& start, int max_hops,
                                        uint64_t rng_seed, size_t n_samples = 2) {
    if (!link_graph.count(start))
        throw std::invalid_argument("hop_sample: start title not in link graph");
    if (max_hops < 1 || max_hops > 3)
        throw std::invalid_argument("hop_sample: max_hops must be 1..3");

    std::set<std::string> reachable;
    std::vector<std::string> frontier{start};
    std::set<std::string> visited{start};
    for (int hop = 0; hop < max_hops && !frontier.empty(); ++hop) {
        std::vector<std::string> next;
        for (const auto& title : frontier) {
            auto it = link_graph.find(title);
            if (it == link_graph.end()) continue;
            for (const auto& linked : it->second) {
                if (!visited.insert(linked).second) continue;
                reachable.insert(linked);
                next.push_back(linked);
            }
        }
        frontier = std::move(next);
    }

    std::vector<std::string> candidates;
    for (const auto& t : reachable)
        if (popularity_list.count(t)) candidates.push_back(t);
    // reachable is an ordered set, so candidates are sorted already

    std::set<std::string> out{start};
    std::mt19937_64 rng(rng_seed);
    size_t take = std::min(n_samples, candidates.size());
    for (size_t i = 0; i < take; ++i) {
        auto pick = std::uniform_int_distribution<size_t>(0, candidates.size() - 1)(rng);
        out.insert(candidates[pick]);
        candidates.erase(candidates.begin() + static_cast<ptrdiff_t>(pick));
    }
    return out;
}

// --- conflict-pair consistency -------------------------------------------------

struct ConflictReport {
    // (a) conflict gold facts not judged present in the conflict contexts;
    // must be empty for a valid pair.
    std::vector<AtomicFact> missing_in_conflict;
    // (b) conflict gold facts still judged present in the original
    // contexts; each one flags an unmodified "conflict" fact.
    std::vector<AtomicFact> still_in_original;
    // (c) answers identical across versions although gold facts changed.
    bool answers_suspicious = false;

    bool pair_valid() const { return missing_in_conflict.empty(); }
};

inline ConflictReport check_conflict_consistency(const Instance& original,
                                                 const Instance& conflict,
                                                 const OracleSpec& oracle) {
    if (original.id != conflict.id)
        throw std::invalid_argument("check_conflict_consistency: id mismatch (" +
                                    original.id + " vs " + conflict.id + ")");
    if (original.version != Version::original || conflict.version != Version::conflict)
        throw std::invalid_argument(
            "check_conflict_consistency: version fields are not original/conflict");

    auto bodies = [](const Instance& inst) {
        std::vector<std::string> out;
        for (const auto& d : inst.contexts) out.push_back(d.body);
        return out;
    };
    auto conflict_bodies = bodies(conflict);
    auto original_bodies = bodies(original);

    ConflictReport report;
    for (const auto& f : conflict.gold_facts) {
        if (!judge(f, conflict_bodies, oracle).present)
            report.missing_in_conflict.push_back(f);
        if (judge(f, original_bodies, oracle).present)
            report.still_in_original.push_back(f);
    }

    auto fact_keys = [](const Instance& inst) {
        std::set<std::string> keys;
        for (const auto& f : inst.gold_facts)
            keys.insert(text::collapse_whitespace(text::to_lower(f.text)));
        return keys;
    };
    auto answer_keys = [](const Instance& inst) {
        std::set<std::string> keys;
        for (const auto& a : inst.answers)
            keys.insert(text::collapse_whitespace(text::to_lower(a)));
        return keys;
    };
    bool facts_changed = fact_keys(original) != fact_keys(conflict);
    bool answers_changed = answer_keys(original) != answer_keys(conflict);
    report.answers_suspicious = facts_changed && !answers_changed;
    return report;
}

}  // namespace groundeval
