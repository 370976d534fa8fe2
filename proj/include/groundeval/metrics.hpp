#pragma once

// Grounding metrics. Precision is the fraction of the response's atomic
// facts whose knowledge is present in the scoped input contexts; recall is
// the fraction of gold atomic facts present in the response; the grounding
// score is their harmonic mean. Values are fractions in [0, 1]; reports
// render them x100.

#include <string>
#include <vector>

#include "groundeval/backend.hpp"
#include "groundeval/core.hpp"
#include "groundeval/errors.hpp"
#include "groundeval/oracle.hpp"

namespace groundeval {

// full_input judges against every document; gold_only restricts to is_gold
// documents. full_input is the formal definition; gold_only is what the
// distractor analysis implicitly measures.
enum class PrecisionScope { full_input, gold_only };

inline const char* to_string(PrecisionScope s) {
    return s == PrecisionScope::full_input ? "full_input" : "gold_only";
}

inline PrecisionScope precision_scope_from_string(const std::string& s) {
    if (s == "full_input") return PrecisionScope::full_input;
    if (s == "gold_only") return PrecisionScope::gold_only;
    throw ParseError("unknown precision scope: " + s);
}

struct GroundingScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    size_t n_response_facts = 0;
    size_t n_gold_facts = 0;
    PrecisionScope precision_scope = PrecisionScope::full_input;
};

inline double grounding_f1(double p, double r) {
    if (p + r <= 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

struct JudgedFraction {
    double value = 0.0;
    std::vector<Judgment> judgments;
};

inline std::vector<std::string> scoped_passages(
    const std::vector<ContextDocument>& contexts, PrecisionScope scope) {
    std::vector<std::string> out;
    for (const auto& d : contexts)
        if (scope == PrecisionScope::full_input || d.is_gold)
            out.push_back(d.body);
    return out;
}

// Fraction of response facts judged present in the scoped passage set.
// A fact-free response scores 0, not a vacuous 1: a response that grounds
// nothing must not get perfect precision.
inline JudgedFraction grounding_precision_detailed(
    const std::vector<AtomicFact>& response_facts,
    const std::vector<ContextDocument>& contexts, const OracleSpec& oracle,
    PrecisionScope scope = PrecisionScope::full_input) {
    if (contexts.empty())
        throw std::invalid_argument("grounding_precision: contexts empty");
    auto passages = scoped_passages(contexts, scope);
    if (passages.empty())
        throw Error("grounding_precision: no gold documents in scope");

    JudgedFraction out;
    if (response_facts.empty()) return out;
    size_t present = 0;
    for (const auto& f : response_facts) {
        auto j = judge(f, passages, oracle);
        if (j.present) ++present;
        out.judgments.push_back(std::move(j));
    }
    out.value = static_cast<double>(present) /
                static_cast<double>(response_facts.size());
    return out;
}

inline double grounding_precision(const std::vector<AtomicFact>& response_facts,
                                  const std::vector<ContextDocument>& contexts,
                                  const OracleSpec& oracle,
                                  PrecisionScope scope = PrecisionScope::full_input) {
    return grounding_precision_detailed(response_facts, contexts, oracle, scope).value;
}

// Fraction of gold facts judged present in the response text, taken as a
// single passage. An empty response scores 0 and never errors.
inline JudgedFraction grounding_recall_detailed(
    const std::vector<AtomicFact>& gold_facts, const std::string& response_text,
    const OracleSpec& oracle) {
    if (gold_facts.empty())
        throw std::invalid_argument("grounding_recall: gold_facts empty");

    JudgedFraction out;
    if (text::trim(response_text).empty()) {
        for (const auto& f : gold_facts) {
            Judgment j;
            j.fact = f;
            j.oracle_id = oracle.id;
            j.present = false;
            out.judgments.push_back(std::move(j));
        }
        return out;
    }
    size_t present = 0;
    for (const auto& f : gold_facts) {
        auto j = judge(f, {response_text}, oracle);
        if (j.present) ++present;
        out.judgments.push_back(std::move(j));
    }
    out.value = static_cast<double>(present) /
                static_cast<double>(gold_facts.size());
    return out;
}

inline double grounding_recall(const std::vector<AtomicFact>& gold_facts,
                               const std::string& response_text,
                               const OracleSpec& oracle) {
    return grounding_recall_detailed(gold_facts, response_text, oracle).value;
}

inline GroundingScore score_response(const std::vector<AtomicFact>& response_facts,
                                     const std::vector<AtomicFact>& gold_facts,
                                     const std::string& response_text,
                                     const std::vector<ContextDocument>& contexts,
                                     const OracleSpec& oracle,
                                     PrecisionScope scope = PrecisionScope::full_input) {
    GroundingScore s;
    s.precision = grounding_precision(response_facts, contexts, oracle, scope);
    s.recall = grounding_recall(gold_facts, response_text, oracle);
    s.f1 = grounding_f1(s.precision, s.recall);
    s.n_response_facts = response_facts.size();
    s.n_gold_facts = gold_facts.size();
    s.precision_scope = scope;
    return s;
}

// 1 iff any alias, after case-folding and whitespace normalization of both
// sides, is a substring of the response. Definite-answer instances only;
// the caller filters.
inline int answer_accuracy(const std::string& response_text,
                           const std::vector<std::string>& answers) {
    if (answers.empty())
        throw std::invalid_argument("answer_accuracy: answers empty");
    auto norm_response = text::collapse_whitespace(text::to_lower(response_text));
    for (const auto& a : answers) {
        auto alias = text::collapse_whitespace(text::to_lower(a));
        if (alias.empty()) continue;
        if (norm_response.find(alias) != std::string::npos) return 1;
    }
    return 0;
}

// Form-filling fluency instruction; {response} is filled in. Applied to
// free-form instances only.
inline constexpr const char* kFluencyInstruction =
    R"(You will be given one response written for a instruction.

Your task is to rate the response on one metric.

Please make sure you read and understand these instructions carefully. Please keep this document open while reviewing, and refer to it as needed.


Evaluation Criteria:

Fluency (1-5): the quality of the response upon the Input in terms of grammar, spelling, punctuation, word choice, and sentence structure. The response should not contain any unnatural symbols.

- 1: Very Poor.     The response is mostly incoherent with severe issues in grammar, spelling, punctuation, word choice, sentence structure, and contains unnatural symbols.
- 2: Below Average. The response is understandable with effort; numerous errors in grammar, spelling, punctuation, word choice, and sentence structure; may have unnatural symbols.
- 3: Average.       The response is understandable with occasional errors in grammar, spelling, punctuation, word choice, or sentence structure; no unnatural symbols.
- 4: Above Average. The response is mostly fluent with very few errors; clear and easy to understand; no unnatural symbols.
- 5: Excellent.     The response is perfectly fluent; free from any errors; clear, concise, and natural with no unnatural symbols.

Evaluation Steps:
1. Read the given response thoroughly.
2. Check for any spelling mistakes.
3. Examine the grammar and sentence structure. Look for incorrect verb conjugations, misplaced modifiers, and other grammatical mistakes.
4. Ensure that punctuation is used correctly. Check for missing or misused commas, periods, semicolons, etc.
5. Evaluate the word choice. Are the words appropriate for the context? Are there any words that sound unnatural or out of place?
6. Confirm that there are no unnatural symbols or characters in the response.
7. Based on the observations, rate the fluency of the response using the provided scale (1-5).


Example:


Response:

{response}


Evaluation Form (scores ONLY):

Fluency (1-5):
)";

// Accepts "Fluency (1-5): 4" or a bare integer. Out-of-range integers are
// errors, not clamps.
inline int parse_fluency_output(const std::string& raw) {
    auto t = text::trim(raw);
    auto marker = t.rfind(':');
    std::string tail = marker == std::string::npos ? t : text::trim(t.substr(marker + 1));
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("fluency output not parseable: \"" + raw + "\"");
    int score = std::stoi(tail);
    if (score < 1 || score > 5)
        throw ParseError("fluency score out of range 1..5: \"" + raw + "\"");
    return score;
}

inline int fluency_score(const std::string& response_text,
                         GenerationBackend& judge_backend) {
    if (text::trim(response_text).empty())
        throw std::invalid_argument("fluency_score: response empty");
    std::string prompt = kFluencyInstruction;
    auto slot = prompt.find("{response}");
    prompt.replace(slot, 10, response_text);
    GenRequest req;
    req.prompt = prompt;
    return parse_fluency_output(judge_backend.generate(req));
}

}  // namespace groundeval
