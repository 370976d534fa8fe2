#pragma once

// Presence oracles: decide whether the knowledge of an atomic fact exists
// in a passage or passage set. Scorer-backed kinds reduce a (fact, passage)
// pair to a real score and threshold it; the lexical oracle is a
// dependency-free deterministic fallback; the LLM judge asks a generation
// backend for a True/False verdict.
//
// Multi-passage judging is existential: a fact is present in a passage set
// iff it is present in at least one passage. A concatenation mode exists
// behind a flag for ablation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "groundeval/backend.hpp"
#include "groundeval/core.hpp"
#include "groundeval/errors.hpp"
#include "groundeval/text.hpp"

namespace groundeval {

class PairScorer {
public:
    virtual ~PairScorer() = default;
    virtual double score(const std::string& fact, const std::string& passage) = 0;
    virtual std::string id() const = 0;
};

// Jaccard similarity over content-word stem sets. Deterministic stand-in
// for an embedding similarity scorer; range [0, 1].
class JaccardScorer : public PairScorer {
public:
    explicit JaccardScorer(
        std::unordered_set<std::string> stopwords = text::default_stopwords())
        : stopwords_(std::move(stopwords)) {}

    double score(const std::string& fact, const std::string& passage) override {
        auto a = stem_set(fact);
        auto b = stem_set(passage);
        if (a.empty() && b.empty()) return 1.0;
        size_t inter = 0;
        for (const auto& w : a)
            if (b.count(w)) ++inter;
        size_t uni = a.size() + b.size() - inter;
        return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    }

    std::string id() const override { return "jaccard"; }

private:
    std::unordered_set<std::string> stem_set(const std::string& s) const {
        std::unordered_set<std::string> out;
        for (auto& w : text::content_words(s, stopwords_)) out.insert(text::stem(w));
        return out;
    }

    std::unordered_set<std::string> stopwords_;
};

// Count of fact content-word stems found in the passage. Deterministic
// stand-in for a cross-encoder relevance scorer; unbounded above.
class TermOverlapScorer : public PairScorer {
public:
    explicit TermOverlapScorer(
        std::unordered_set<std::string> stopwords = text::default_stopwords())
        : stopwords_(std::move(stopwords)) {}

    double score(const std::string& fact, const std::string& passage) override {
        std::unordered_set<std::string> passage_stems;
        for (auto& w : text::content_words(passage, stopwords_))
            passage_stems.insert(text::stem(w));
        size_t hits = 0;
        for (auto& w : text::content_words(fact, stopwords_))
            if (passage_stems.count(text::stem(w))) ++hits;
        return static_cast<double>(hits);
    }

    std::string id() const override { return "term_overlap"; }

private:
    std::unordered_set<std::string> stopwords_;
};

enum class OracleKind {
    pair_scorer_threshold,
    embedding_similarity_threshold,
    entailment_judge,
    llm_judge,
    lexical_overlap,
};

inline const char* to_string(OracleKind k) {
    switch (k) {
        case OracleKind::pair_scorer_threshold: return "pair_scorer_threshold";
        case OracleKind::embedding_similarity_threshold:
            return "embedding_similarity_threshold";
        case OracleKind::entailment_judge: return "entailment_judge";
        case OracleKind::llm_judge: return "llm_judge";
        case OracleKind::lexical_overlap: return "lexical_overlap";
    }
    return "?";
}

inline OracleKind oracle_kind_from_string(const std::string& s) {
    if (s == "pair_scorer_threshold") return OracleKind::pair_scorer_threshold;
    if (s == "embedding_similarity_threshold")
        return OracleKind::embedding_similarity_threshold;
    if (s == "entailment_judge") return OracleKind::entailment_judge;
    if (s == "llm_judge") return OracleKind::llm_judge;
    if (s == "lexical_overlap") return OracleKind::lexical_overlap;
    throw ParseError("unknown oracle kind: " + s);
}

inline bool is_scorer_kind(OracleKind k) {
    return k == OracleKind::pair_scorer_threshold ||
           k == OracleKind::embedding_similarity_threshold ||
           k == OracleKind::entailment_judge;
}

struct OracleSpec {
    OracleKind kind = OracleKind::lexical_overlap;
    double threshold = 0.0;  // threshold kinds only
    std::string id = "lexical";
    std::shared_ptr<PairScorer> scorer;               // scorer kinds
    std::shared_ptr<GenerationBackend> judge_backend; // llm_judge
    bool concatenate_passages = false;  // ablation: join instead of max/any
    std::unordered_set<std::string> stopwords = text::default_stopwords();

    static OracleSpec lexical() { return OracleSpec{}; }
};

struct Judgment {
    AtomicFact fact;
    bool present = false;
    std::optional<double> raw_score;       // absent for llm_judge
    std::string oracle_id;
    std::optional<size_t> passage_index;   // maximizing passage, first on ties
};

// Verbatim judge instruction; {paragraph} and {atomic fact} are filled in.
inline constexpr const char* kLlmJudgeInstruction =
    "Generate 'True' if all information in given statement is in given "
    "context. Else generate 'False'";

inline std::string render_judge_prompt(const std::string& fact,
                                       const std::string& passage) {
    return "* context: " + passage + "\n\n* statement: " + fact + "\n\n" +
           kLlmJudgeInstruction;
}

namespace detail {

inline bool parse_true_false(const std::string& raw) {
    auto t = text::to_lower(text::trim(raw));
    while (!t.empty() && (t.front() == '\'' || t.front() == '"')) t.erase(0, 1);
    if (t.rfind("true", 0) == 0) return true;
    if (t.rfind("false", 0) == 0) return false;
    throw ParseError("judge output not parseable as True/False: \"" + raw + "\"");
}

// Fraction of the fact's content-word stems found in the passage.
// 1.0 means every content word occurs (vacuously true for stopword-only
// facts).
inline double lexical_fraction(const std::string& fact,
                               const std::string& passage,
                               const std::unordered_set<std::string>& stopwords) {
    auto fact_words = text::content_words(fact, stopwords);
    if (fact_words.empty()) return 1.0;
    std::unordered_set<std::string> passage_stems;
    for (auto& w : text::content_words(passage, stopwords))
        passage_stems.insert(text::stem(w));
    size_t hits = 0;
    for (auto& w : fact_words)
        if (passage_stems.count(text::stem(w))) ++hits;
    return static_cast<double>(hits) / static_cast<double>(fact_words.size());
}

}  // namespace detail

// Scores one (fact, passage) pair. Valid for every kind except llm_judge,
// which has no scalar score.
inline double score_pair(const AtomicFact& fact, const std::string& passage,
                         const OracleSpec& spec) {
    if (spec.kind == OracleKind::llm_judge)
        throw std::invalid_argument("score_pair: llm_judge has no pair score");
    if (text::trim(passage).empty())
        throw std::invalid_argument("score_pair: passage empty after normalization");
    if (spec.kind == OracleKind::lexical_overlap)
        return detail::lexical_fraction(fact.text, passage, spec.stopwords);
    if (!spec.scorer) throw ConfigError("oracle \"" + spec.id + "\" has no scorer");
    return spec.scorer->score(fact.text, passage);
}

// Decides whether the fact's knowledge is present in the passage set.
inline Judgment judge(const AtomicFact& fact,
                      const std::vector<std::string>& passages,
                      const OracleSpec& spec) {
    if (passages.empty()) throw std::invalid_argument("judge: passages empty");
    if (text::trim(fact.text).empty())
        throw std::invalid_argument("judge: fact text empty");

    Judgment j;
    j.fact = fact;
    j.oracle_id = spec.id;

    std::vector<std::string> scoped = passages;
    if (spec.concatenate_passages && passages.size() > 1) {
        std::string joined;
        for (size_t i = 0; i < passages.size(); ++i) {
            if (i) joined += "\n\n";
            joined += passages[i];
        }
        scoped = {joined};
    }

    if (spec.kind == OracleKind::llm_judge) {
        if (!spec.judge_backend)
            throw ConfigError("oracle \"" + spec.id + "\" has no judge backend");
        for (size_t i = 0; i < scoped.size(); ++i) {
            GenRequest req;
            req.prompt = render_judge_prompt(fact.text, scoped[i]);
            bool verdict = detail::parse_true_false(spec.judge_backend->generate(req));
            if (verdict) {
                j.present = true;
                j.passage_index = i;
                break;
            }
        }
        return j;
    }

    if (spec.kind == OracleKind::lexical_overlap) {
        double best = -1.0;
        bool any_full = false;
        for (size_t i = 0; i < scoped.size(); ++i) {
            double frac = detail::lexical_fraction(fact.text, scoped[i], spec.stopwords);
            if (frac > best) {
                best = frac;
                j.passage_index = i;
            }
            if (frac == 1.0) any_full = true;
        }
        j.raw_score = best;
        j.present = any_full;
        return j;
    }

    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < scoped.size(); ++i) {
        double s = score_pair(fact, scoped[i], spec);
        if (s > best) {
            best = s;
            j.passage_index = i;
        }
    }
    j.raw_score = best;
    j.present = best >= spec.threshold;
    return j;
}

// --- threshold calibration -------------------------------------------------

struct LabeledPair {
    AtomicFact fact;
    std::string passage;
    bool human_present = false;
};

struct CalibrationResult {
    double threshold = 0.0;
    double agreement = 0.0;  // fraction of pairs where (score >= t) == human
    std::string warning;     // set when the label set is degenerate
};

// Sweeps candidate thresholds over the sorted distinct scores plus +/-inf
// sentinels and returns the smallest threshold maximizing percent
// agreement with the human labels.
inline CalibrationResult calibrate_threshold(const std::vector<LabeledPair>& labeled,
                                             const OracleSpec& spec) {
    if (labeled.empty())
        throw std::invalid_argument("calibrate_threshold: no labeled pairs");

    std::vector<double> scores;
    scores.reserve(labeled.size());
    for (const auto& lp : labeled) scores.push_back(score_pair(lp.fact, lp.passage, spec));

    std::vector<double> candidates = scores;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
    candidates.insert(candidates.begin(), -std::numeric_limits<double>::infinity());
    candidates.push_back(std::numeric_limits<double>::infinity());

    CalibrationResult best;
    best.agreement = -1.0;
    for (double t : candidates) {
        size_t hits = 0;
        for (size_t i = 0; i < labeled.size(); ++i)
            if ((scores[i] >= t) == labeled[i].human_present) ++hits;
        double agree = static_cast<double>(hits) / static_cast<double>(labeled.size());
        if (agree > best.agreement) {
            best.agreement = agree;
            best.threshold = t;
        }
    }

    bool any_true = false, any_false = false;
    for (const auto& lp : labeled) (lp.human_present ? any_true : any_false) = true;
    if (!any_true || !any_false)
        best.warning = "all human labels identical; agreement is trivially attainable";
    return best;
}

// --- inter-annotator agreement ----------------------------------------------

struct AgreementResult {
    double agreement = 0.0;
    double kappa = 0.0;  // NaN when chance agreement is 1
};

inline AgreementResult agreement_and_kappa(const std::vector<bool>& labels_a,
                                           const std::vector<bool>& labels_b) {
    if (labels_a.size() != labels_b.size())
        throw std::invalid_argument("agreement_and_kappa: length mismatch");
    if (labels_a.empty())
        throw std::invalid_argument("agreement_and_kappa: empty label vectors");

    const double n = static_cast<double>(labels_a.size());
    double match = 0, a_true = 0, b_true = 0;
    for (size_t i = 0; i < labels_a.size(); ++i) {
        if (labels_a[i] == labels_b[i]) ++match;
        if (labels_a[i]) ++a_true;
        if (labels_b[i]) ++b_true;
    }
    AgreementResult r;
    r.agreement = match / n;
    double pe = (a_true / n) * (b_true / n) +
                ((n - a_true) / n) * ((n - b_true) / n);
    r.kappa = (1.0 - pe) == 0.0
                  ? std::numeric_limits<double>::quiet_NaN()
                  : (r.agreement - pe) / (1.0 - pe);
    return r;
}

// --- oracle registry ---------------------------------------------------------

// Registry file entry: configuration data only. Model identifiers and
// endpoint URLs stay out of code.
struct OracleConfig {
    std::string id;
    OracleKind kind = OracleKind::lexical_overlap;
    double threshold = 0.0;
    std::string model;     // scorer model identifier, informational
    std::string endpoint;  // scoring endpoint URL, empty for offline kinds
};

inline std::map<std::string, OracleConfig> load_oracle_registry(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open oracle registry: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("oracle registry " + path + ": " + e.what());
    }
    std::map<std::string, OracleConfig> out;
    for (const auto& entry : j.at("oracles")) {
        OracleConfig cfg;
        cfg.id = entry.at("id").get<std::string>();
        cfg.kind = oracle_kind_from_string(entry.at("kind").get<std::string>());
        cfg.threshold = entry.value("threshold", 0.0);
        cfg.model = entry.value("model", std::string{});
        cfg.endpoint = entry.value("endpoint", std::string{});
        out[cfg.id] = cfg;
    }
    return out;
}

}  // namespace groundeval
