#pragma once

// Dataset file I/O. One JSON record per line, UTF-8, fields exactly as in
// core.hpp. Distractor pools live in a sibling file keyed by instance id so
// *-Dist variants can be materialized on demand.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "groundeval/core.hpp"
#include "groundeval/errors.hpp"

namespace groundeval {

using json = nlohmann::json;

inline void to_json(json& j, const ContextDocument& d) {
    j = json{{"title", d.title},
             {"url", d.url},
             {"body", d.body},
             {"is_gold", d.is_gold}};
}

inline void from_json(const json& j, ContextDocument& d) {
    j.at("title").get_to(d.title);
    j.at("url").get_to(d.url);
    j.at("body").get_to(d.body);
    j.at("is_gold").get_to(d.is_gold);
}

inline void to_json(json& j, const AtomicFact& f) {
    j = json{{"text", f.text}};
    if (f.source_doc_index) j["source_doc_index"] = *f.source_doc_index;
}

inline void from_json(const json& j, AtomicFact& f) {
    j.at("text").get_to(f.text);
    if (j.contains("source_doc_index") && !j["source_doc_index"].is_null())
        f.source_doc_index = j["source_doc_index"].get<size_t>();
    else
        f.source_doc_index.reset();
}

inline void to_json(json& j, const FactorLabels& f) {
    j = json{{"popularity", to_string(f.popularity)},
             {"multiplicity", to_string(f.multiplicity)},
             {"answer_format", to_string(f.answer_format)}};
}

inline void from_json(const json& j, FactorLabels& f) {
    f.popularity = popularity_from_string(j.at("popularity").get<std::string>());
    f.multiplicity =
        multiplicity_from_string(j.at("multiplicity").get<std::string>());
    f.answer_format =
        answer_format_from_string(j.at("answer_format").get<std::string>());
}

inline void to_json(json& j, const Instance& i) {
    j = json{{"id", i.id},
             {"version", to_string(i.version)},
             {"question", i.question},
             {"answers", i.answers},
             {"contexts", i.contexts},
             {"gold_facts", i.gold_facts},
             {"factors", i.factors}};
}

inline void from_json(const json& j, Instance& i) {
    j.at("id").get_to(i.id);
    i.version = version_from_string(j.at("version").get<std::string>());
    j.at("question").get_to(i.question);
    j.at("answers").get_to(i.answers);
    j.at("contexts").get_to(i.contexts);
    j.at("gold_facts").get_to(i.gold_facts);
    j.at("factors").get_to(i.factors);
}

// One ranked distractor pool entry; rank 1 is most relevant.
struct RankedDocument {
    std::string title;
    std::string url;
    std::string body;
    int rank = 0;
    double score = 0.0;

    bool operator==(const RankedDocument&) const = default;
};

struct DistractorPool {
    std::string instance_id;
    std::vector<RankedDocument> ranked;

    bool operator==(const DistractorPool&) const = default;
};

inline void to_json(json& j, const RankedDocument& d) {
    j = json{{"title", d.title},
             {"url", d.url},
             {"body", d.body},
             {"rank", d.rank},
             {"score", d.score}};
}

inline void from_json(const json& j, RankedDocument& d) {
    j.at("title").get_to(d.title);
    j.at("url").get_to(d.url);
    j.at("body").get_to(d.body);
    j.at("rank").get_to(d.rank);
    j.at("score").get_to(d.score);
}

inline void to_json(json& j, const DistractorPool& p) {
    j = json{{"instance_id", p.instance_id}, {"ranked", p.ranked}};
}

inline void from_json(const json& j, DistractorPool& p) {
    j.at("instance_id").get_to(p.instance_id);
    j.at("ranked").get_to(p.ranked);
}

namespace detail {

template <typename T>
std::vector<T> load_ndjson(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::vector<T> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(json::parse(line).get<T>());
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": " + e.what());
        }
    }
    return out;
}

template <typename T>
void save_ndjson(const std::vector<T>& items, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    for (const auto& item : items) out << json(item).dump() << "\n";
}

}  // namespace detail

// Loads and validates a dataset. Parse failures name the line; validation
// failures list every violated invariant per record id. Record order is
// preserved.
inline std::vector<Instance> load_dataset(
    const std::filesystem::path& path,
    std::optional<Version> expected_version = std::nullopt) {
    auto instances = detail::load_ndjson<Instance>(path);

    std::string problems;
    for (const auto& inst : instances) {
        auto violations = validate_instance(inst);
        if (expected_version && inst.version != *expected_version)
            violations.push_back(std::string("version mismatch: expected ") +
                                 to_string(*expected_version));
        for (const auto& v : violations)
            problems += "  " + inst.id + ": " + v + "\n";
    }
    for (const auto& v : validate_dataset(instances)) problems += "  " + v + "\n";
    if (!problems.empty())
        throw ValidationError("invalid dataset " + path.string() + ":\n" +
                              problems);
    return instances;
}

inline void save_dataset(const std::vector<Instance>& instances,
                         const std::filesystem::path& path) {
    detail::save_ndjson(instances, path);
}

inline std::vector<DistractorPool> load_distractor_pools(
    const std::filesystem::path& path) {
    return detail::load_ndjson<DistractorPool>(path);
}

inline void save_distractor_pools(const std::vector<DistractorPool>& pools,
                                  const std::filesystem::path& path) {
    detail::save_ndjson(pools, path);
}

}  // namespace groundeval
