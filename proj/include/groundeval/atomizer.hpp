#pragma once

// Atomic-fact decomposition. The LLM-backed decomposer sends one prompt per
// input text and parses a bulleted fact list back; the rule-based fallback
// is plain sentence segmentation so the whole metric pipeline runs with
// zero model calls.

#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "groundeval/backend.hpp"
#include "groundeval/core.hpp"
#include "groundeval/errors.hpp"
#include "groundeval/text.hpp"

namespace groundeval {

struct DecomposerSpec {
    enum class Kind { llm_prompted, rule_based };
    Kind kind = Kind::rule_based;
    std::string prompt_template;  // llm_prompted: must contain {text}
    std::shared_ptr<GenerationBackend> backend;  // llm_prompted only

    std::string cache_id() const {
        if (kind == Kind::rule_based) return "rule_based";
        return "llm:" + (backend ? backend->id() : "?") + ":" +
               text::fnv1a_hex(prompt_template);
    }
};

// Splits raw decomposer output on line boundaries, strips bullets and
// numbering, and drops empty lines. Throws when nothing survives.
inline std::vector<AtomicFact> parse_fact_list(const std::string& raw) {
    std::vector<AtomicFact> facts;
    size_t pos = 0;
    while (pos <= raw.size()) {
        size_t nl = raw.find('\n', pos);
        std::string line = raw.substr(pos, nl == std::string::npos ? std::string::npos
                                                                   : nl - pos);
        pos = nl == std::string::npos ? raw.size() + 1 : nl + 1;

        std::string t = text::trim(line);
        // bullet markers
        while (!t.empty() && (t[0] == '-' || t[0] == '*' ||
                              static_cast<unsigned char>(t[0]) == 0xE2)) {
            if (static_cast<unsigned char>(t[0]) == 0xE2) {
                // UTF-8 bullet (0xE2 0x80 0xA2)
                if (t.size() >= 3 && static_cast<unsigned char>(t[1]) == 0x80 &&
                    static_cast<unsigned char>(t[2]) == 0xA2)
                    t = text::trim(t.substr(3));
                else
                    break;
            } else {
                t = text::trim(t.substr(1));
            }
        }
        // numbering: digits directly followed by '.' or ')'
        size_t d = 0;
        while (d < t.size() && std::isdigit(static_cast<unsigned char>(t[d]))) ++d;
        if (d > 0 && d < t.size() && (t[d] == '.' || t[d] == ')'))
            t = text::trim(t.substr(d + 1));

        if (!t.empty()) facts.push_back(AtomicFact{t, std::nullopt});
    }
    if (facts.empty()) throw ParseError("no facts parsed from decomposer output");
    return facts;
}

namespace detail {

inline std::string ensure_terminal_period(std::string s) {
    s = text::trim(s);
    while (!s.empty() && (s.back() == '!' || s.back() == '?' || s.back() == '.'))
        s.pop_back();
    s = text::trim(s);
    s.push_back('.');
    return s;
}

// Exact-match dedup after whitespace/case normalization, keeping first
// occurrence order. Duplicate facts would double-count in precision.
inline std::vector<AtomicFact> dedup_facts(std::vector<AtomicFact> facts) {
    std::vector<AtomicFact> out;
    std::unordered_set<std::string> seen;
    for (auto& f : facts) {
        auto key = text::collapse_whitespace(text::to_lower(f.text));
        if (seen.insert(key).second) out.push_back(std::move(f));
    }
    return out;
}

inline std::string render_decompose_prompt(const std::string& tmpl,
                                           const std::string& input) {
    auto slot = tmpl.find("{text}");
    if (slot == std::string::npos)
        throw ConfigError("decomposer prompt template has no {text} slot");
    std::string out = tmpl;
    out.replace(slot, 6, input);
    return out;
}

}  // namespace detail

// Decomposes free text into atomic facts. Output order follows source
// sentence order; rule_based is a pure function of its input.
inline std::vector<AtomicFact> decompose(const std::string& input,
                                         const DecomposerSpec& spec) {
    if (text::trim(input).empty())
        throw std::invalid_argument("decompose: text is empty");

    if (spec.kind == DecomposerSpec::Kind::rule_based) {
        std::vector<AtomicFact> facts;
        for (auto& sent : text::split_sentences(input))
            facts.push_back(AtomicFact{detail::ensure_terminal_period(sent),
                                       std::nullopt});
        return detail::dedup_facts(std::move(facts));
    }

    if (!spec.backend)
        throw ConfigError("llm_prompted decomposer has no backend");
    if (spec.prompt_template.empty())
        throw ConfigError("llm_prompted decomposer has no prompt template");

    GenRequest req;
    req.prompt = detail::render_decompose_prompt(spec.prompt_template, input);
    std::string raw = spec.backend->generate(req);
    std::vector<AtomicFact> facts;
    try {
        facts = parse_fact_list(raw);
    } catch (const ParseError&) {
        throw ParseError("unparseable decomposer output: \"" + raw + "\"");
    }
    for (auto& f : facts) f.text = detail::ensure_terminal_period(f.text);
    return detail::dedup_facts(std::move(facts));
}

}  // namespace groundeval
