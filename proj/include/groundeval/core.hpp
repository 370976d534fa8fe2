#pragma once

// Domain types for grounding evaluation and their invariant checks.
//
// An Instance is one evaluation item: a question, its acceptable answer
// aliases, the context documents shown to the model, and the gold atomic
// facts a grounded response must cover. Instances come in an original and
// a conflict version sharing the same base id, so pairs are joinable.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "groundeval/errors.hpp"
#include "groundeval/text.hpp"

namespace groundeval {

struct ContextDocument {
    std::string title;
    std::string url;  // provenance only; may be empty
    std::string body;
    bool is_gold = false;

    bool operator==(const ContextDocument&) const = default;
};

struct AtomicFact {
    std::string text;
    std::optional<size_t> source_doc_index;

    bool operator==(const AtomicFact&) const = default;
};

enum class Popularity { high, low };
enum class Multiplicity { single, multi };
enum class AnswerFormat { definite, free_form };
enum class Version { original, conflict };

struct FactorLabels {
    Popularity popularity = Popularity::low;
    Multiplicity multiplicity = Multiplicity::single;
    AnswerFormat answer_format = AnswerFormat::definite;

    bool operator==(const FactorLabels&) const = default;
};

struct Instance {
    std::string id;
    Version version = Version::original;
    std::string question;
    std::vector<std::string> answers;  // empty allowed for free_form only
    std::vector<ContextDocument> contexts;
    std::vector<AtomicFact> gold_facts;
    FactorLabels factors;

    bool operator==(const Instance&) const = default;
};

struct GeneratedResponse {
    std::string instance_id;
    std::string model_id;
    std::string text;
    std::vector<AtomicFact> atomic_facts;  // empty until decomposed

    bool operator==(const GeneratedResponse&) const = default;
};

inline const char* to_string(Popularity v) {
    return v == Popularity::high ? "high" : "low";
}
inline const char* to_string(Multiplicity v) {
    return v == Multiplicity::single ? "single" : "multi";
}
inline const char* to_string(AnswerFormat v) {
    return v == AnswerFormat::definite ? "definite" : "free_form";
}
inline const char* to_string(Version v) {
    return v == Version::original ? "original" : "conflict";
}

inline Popularity popularity_from_string(const std::string& s) {
    if (s == "high") return Popularity::high;
    if (s == "low") return Popularity::low;
    throw ParseError("unknown popularity value: " + s);
}
inline Multiplicity multiplicity_from_string(const std::string& s) {
    if (s == "single") return Multiplicity::single;
    if (s == "multi") return Multiplicity::multi;
    throw ParseError("unknown multiplicity value: " + s);
}
inline AnswerFormat answer_format_from_string(const std::string& s) {
    if (s == "definite") return AnswerFormat::definite;
    if (s == "free_form") return AnswerFormat::free_form;
    throw ParseError("unknown answer_format value: " + s);
}
inline Version version_from_string(const std::string& s) {
    if (s == "original") return Version::original;
    if (s == "conflict") return Version::conflict;
    throw ParseError("unknown version value: " + s);
}

// A fact is one declarative sentence: segmentation yields exactly one
// sentence and the text ends with a period.
inline bool is_single_declarative_sentence(const std::string& s) {
    auto t = text::trim(s);
    if (t.empty() || t.back() != '.') return false;
    return text::split_sentences(t).size() == 1;
}

// Returns human-readable violations; empty means the instance is valid.
// Violations are data, not errors: callers decide whether to throw.
inline std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> v;
    if (inst.id.empty()) v.push_back("id empty");

    bool any_gold_doc = false;
    for (size_t i = 0; i < inst.contexts.size(); ++i) {
        if (text::trim(inst.contexts[i].body).empty())
            v.push_back("context " + std::to_string(i) + " body empty");
        if (inst.contexts[i].is_gold) any_gold_doc = true;
    }
    if (!any_gold_doc) v.push_back("no gold document");

    if (inst.gold_facts.empty()) v.push_back("gold_facts empty");

    std::set<size_t> cited;
    bool all_facts_cited = true;
    for (size_t i = 0; i < inst.gold_facts.size(); ++i) {
        const auto& f = inst.gold_facts[i];
        if (!is_single_declarative_sentence(f.text))
            v.push_back("gold fact " + std::to_string(i) +
                        " not a single declarative sentence");
        if (f.source_doc_index) {
            if (*f.source_doc_index >= inst.contexts.size()) {
                v.push_back("gold fact " + std::to_string(i) +
                            " source out of range");
            } else {
                cited.insert(*f.source_doc_index);
                if (!inst.contexts[*f.source_doc_index].is_gold)
                    v.push_back("gold fact " + std::to_string(i) +
                                " cites a non-gold document");
            }
        } else {
            all_facts_cited = false;
        }
    }

    // multiplicity=multi iff gold facts span >=2 distinct source documents.
    // Only decidable from the citations present: >=2 cited sources always
    // contradicts single; <2 contradicts multi only when every fact is cited.
    if (cited.size() >= 2 && inst.factors.multiplicity == Multiplicity::single)
        v.push_back("multiplicity label inconsistent");
    if (cited.size() < 2 && all_facts_cited && !inst.gold_facts.empty() &&
        inst.factors.multiplicity == Multiplicity::multi)
        v.push_back("multiplicity label inconsistent");

    if (inst.factors.answer_format == AnswerFormat::definite &&
        inst.answers.empty())
        v.push_back("answers empty for definite");

    return v;
}

// Dataset-level counting invariant: each base id at most once per version.
inline std::vector<std::string> validate_dataset(
    const std::vector<Instance>& instances) {
    std::vector<std::string> v;
    std::set<std::pair<std::string, Version>> seen;
    for (const auto& inst : instances) {
        if (!seen.insert({inst.id, inst.version}).second)
            v.push_back("duplicate id per version: " + inst.id + "/" +
                        to_string(inst.version));
    }
    return v;
}

}  // namespace groundeval
