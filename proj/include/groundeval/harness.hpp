#pragma once

// Evaluation harness: renders prompts, obtains responses through a
// generation backend, decomposes and judges them, and persists everything
// as a resumable run directory:
//
//   <out>/<run_id>/config.json       immutable config snapshot
//   <out>/<run_id>/records/<id>.json one record per instance
//   <out>/<run_id>/summary.json      aggregate means
//
// Backend outputs are cached by content hash, so re-running a finished run
// performs zero backend calls and a killed run resumes to an identical
// result.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "groundeval/atomizer.hpp"
#include "groundeval/backend.hpp"
#include "groundeval/core.hpp"
#include "groundeval/dataset.hpp"
#include "groundeval/errors.hpp"
#include "groundeval/metrics.hpp"
#include "groundeval/oracle.hpp"
#include "groundeval/text.hpp"

namespace groundeval {

enum class DatasetTag {
    original_gold,
    original_dist,
    conflict_gold,
    conflict_dist,
    no_context,
};

inline const char* to_string(DatasetTag t) {
    switch (t) {
        case DatasetTag::original_gold: return "original_gold";
        case DatasetTag::original_dist: return "original_dist";
        case DatasetTag::conflict_gold: return "conflict_gold";
        case DatasetTag::conflict_dist: return "conflict_dist";
        case DatasetTag::no_context: return "no_context";
    }
    return "?";
}

inline DatasetTag dataset_tag_from_string(const std::string& s) {
    if (s == "original_gold") return DatasetTag::original_gold;
    if (s == "original_dist") return DatasetTag::original_dist;
    if (s == "conflict_gold") return DatasetTag::conflict_gold;
    if (s == "conflict_dist") return DatasetTag::conflict_dist;
    if (s == "no_context") return DatasetTag::no_context;
    throw ParseError("unknown dataset tag: " + s);
}

// --- prompt building ----------------------------------------------------------

struct PromptTemplate {
    enum class Style { plain, chat_tagged };
    Style style = Style::plain;
    std::string body;  // slots: {contexts}, {question}

    // The evaluation input format: instruction, [context] block with one
    // "Title: {title} [{url}]" header plus body per document, [question]
    // block, a reminder sentence, then the [answer] header.
    static PromptTemplate standard(Style style = Style::plain) {
        PromptTemplate t;
        t.style = style;
        t.body =
            "Generate an [answer] to the given [question] in full sentence by "
            "utilizing all necessary information in given [context] and limiting "
            "the utilized information to that [context]. Provide all information "
            "you utilize from given [context] to answer the question.\n\n"
            "[context]\n{contexts}\n\n"
            "[question]\n{question}\n\n"
            "Don't Forget that you have to generate an [answer] to the given "
            "[question] in full sentence by utilizing all necessary information "
            "in given [context] and information only from the [context]. Also, "
            "provide all information you utilize from given [context]\n\n"
            "[answer]\n";
        return t;
    }

    // Variant without any [context] block, for the no-context setting.
    static PromptTemplate without_context(Style style = Style::plain) {
        PromptTemplate t;
        t.style = style;
        t.body =
            "Generate an [answer] to the given [question] in full sentence.\n\n"
            "[question]\n{question}\n\n"
            "[answer]\n";
        return t;
    }

    bool has_contexts_slot() const {
        return body.find("{contexts}") != std::string::npos;
    }
};

inline std::string render_context_block(const std::vector<ContextDocument>& docs) {
    std::string out;
    for (size_t i = 0; i < docs.size(); ++i) {
        if (i) out += "\n\n";
        out += "Title: " + docs[i].title + " [" + docs[i].url + "]\n" + docs[i].body;
    }
    return out;
}

// Byte-exact rendering; slots that resolve to nothing are errors, never
// silently dropped.
inline std::string build_prompt(const Instance& inst, const PromptTemplate& tpl) {
    std::string contexts = render_context_block(inst.contexts);
    std::string out;
    out.reserve(tpl.body.size() + contexts.size() + inst.question.size());
    size_t pos = 0;
    while (pos < tpl.body.size()) {
        auto brace = tpl.body.find('{', pos);
        if (brace == std::string::npos) {
            out.append(tpl.body, pos, std::string::npos);
            break;
        }
        out.append(tpl.body, pos, brace - pos);
        if (tpl.body.compare(brace, 10, "{contexts}") == 0) {
            if (contexts.empty())
                throw Error("build_prompt: {contexts} slot is empty");
            out += contexts;
            pos = brace + 10;
        } else if (tpl.body.compare(brace, 10, "{question}") == 0) {
            if (text::trim(inst.question).empty())
                throw Error("build_prompt: {question} slot is empty");
            out += inst.question;
            pos = brace + 10;
        } else {
            out.push_back('{');
            pos = brace + 1;
        }
    }
    if (tpl.style == PromptTemplate::Style::chat_tagged)
        return "<|user|> " + out + " <|assistant|>";
    return out;
}

// --- generation with budget and retry ------------------------------------------

struct GenConfig {
    size_t max_input_tokens = 2048;   // 4096 for the length experiments
    size_t max_output_tokens = 2048;
    Sampling sampling;
    text::TokenCounter counter = text::whitespace_counter();
    int max_retries = 3;
    int backoff_initial_ms = 100;
};

inline nlohmann::json sampling_to_json(const Sampling& s) {
    switch (s.mode) {
        case Sampling::Mode::top_k:
            return {{"mode", "top_k"}, {"k", s.k}};
        case Sampling::Mode::temperature:
            return {{"mode", "temperature"}, {"temperature", s.temperature}};
        default:
            return {{"mode", "backend_default"}};
    }
}

inline nlohmann::json gen_config_to_json(const GenConfig& cfg) {
    return {{"max_input_tokens", cfg.max_input_tokens},
            {"max_output_tokens", cfg.max_output_tokens},
            {"sampling", sampling_to_json(cfg.sampling)}};
}

// Enforces the input budget before any backend call, then retries
// transient failures with exponential backoff. Malformed requests are
// never retried.
inline std::string generate(const std::string& prompt, GenerationBackend& backend,
                            const GenConfig& cfg,
                            const std::string& instance_id = {}) {
    size_t n_tokens = cfg.counter(prompt);
    if (n_tokens > cfg.max_input_tokens)
        throw MalformedRequestError(
            "prompt exceeds max input tokens (" + std::to_string(n_tokens) + " > " +
            std::to_string(cfg.max_input_tokens) + ")");

    GenRequest req;
    req.prompt = prompt;
    req.instance_id = instance_id;
    req.options.max_output_tokens = cfg.max_output_tokens;
    req.options.sampling = cfg.sampling;

    int delay_ms = cfg.backoff_initial_ms;
    for (int attempt = 0;; ++attempt) {
        try {
            return backend.generate(req);
        } catch (const MalformedRequestError&) {
            throw;
        } catch (const TransientBackendError& e) {
            if (attempt >= cfg.max_retries)
                throw TransientBackendError(std::string("retries exhausted: ") +
                                            e.what());
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= 2;
        }
    }
}

// --- content-addressed cache ----------------------------------------------------

struct CacheKey {
    std::string kind;          // "gen", "decompose", "fluency", ...
    std::string owner_id;      // model or oracle or decomposer id
    std::string content_hash;
    std::string config_hash;
};

namespace detail {

inline std::string sanitize_component(const std::string& s) {
    std::string out;
    for (char c : s)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                              c == '_' || c == '-'
                          ? c
                          : '_');
    return out;
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(
                        std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000);
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

// Directory-backed store. put is idempotent for identical values and
// rejects a second value for an existing key, so recorded outputs are
// immutable.
class FileCache {
public:
    explicit FileCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    std::optional<std::string> get(const CacheKey& key) const {
        auto p = path_for(key);
        if (!std::filesystem::exists(p)) return std::nullopt;
        return detail::read_file(p);
    }

    void put(const CacheKey& key, const std::string& value) {
        auto p = path_for(key);
        if (std::filesystem::exists(p)) {
            if (detail::read_file(p) != value)
                throw CacheConflictError("cache key already holds a different value: " +
                                         p.string());
            return;
        }
        std::filesystem::create_directories(p.parent_path());
        detail::write_file_atomic(p, value);
    }

    std::filesystem::path path_for(const CacheKey& key) const {
        if (key.kind.empty() || key.owner_id.empty() || key.content_hash.empty() ||
            key.config_hash.empty())
            throw std::invalid_argument("cache key has an empty component");
        return dir_ / detail::sanitize_component(key.kind) /
               detail::sanitize_component(key.owner_id) /
               (key.content_hash + "-" + key.config_hash + ".txt");
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

// Memoizes an inner backend through a FileCache. Keys are content hashes
// of the prompt, never instance ids, so edited instances cannot be served
// stale completions.
class CachingBackend : public GenerationBackend {
public:
    CachingBackend(std::shared_ptr<GenerationBackend> inner, FileCache& cache,
                   std::string kind, std::string config_hash)
        : inner_(std::move(inner)),
          cache_(cache),
          kind_(std::move(kind)),
          config_hash_(std::move(config_hash)) {}

    std::string generate(const GenRequest& req) override {
        CacheKey key{kind_, inner_->id(), text::fnv1a_hex(req.prompt), config_hash_};
        if (auto hit = cache_.get(key)) return *hit;
        auto value = inner_->generate(req);
        cache_.put(key, value);
        return value;
    }

    std::string id() const override { return inner_->id(); }

private:
    std::shared_ptr<GenerationBackend> inner_;
    FileCache& cache_;
    std::string kind_;
    std::string config_hash_;
};

// --- run records -----------------------------------------------------------------

inline void to_json(json& j, const GroundingScore& s) {
    j = json{{"precision", s.precision},
             {"recall", s.recall},
             {"f1", s.f1},
             {"n_response_facts", s.n_response_facts},
             {"n_gold_facts", s.n_gold_facts},
             {"precision_scope", to_string(s.precision_scope)}};
}

inline void from_json(const json& j, GroundingScore& s) {
    j.at("precision").get_to(s.precision);
    j.at("recall").get_to(s.recall);
    j.at("f1").get_to(s.f1);
    j.at("n_response_facts").get_to(s.n_response_facts);
    j.at("n_gold_facts").get_to(s.n_gold_facts);
    s.precision_scope =
        precision_scope_from_string(j.at("precision_scope").get<std::string>());
}

inline void to_json(json& j, const Judgment& jt) {
    j = json{{"fact", jt.fact}, {"present", jt.present}, {"oracle_id", jt.oracle_id}};
    if (jt.raw_score) j["raw_score"] = *jt.raw_score;
    if (jt.passage_index) j["passage_index"] = *jt.passage_index;
}

inline void from_json(const json& j, Judgment& jt) {
    j.at("fact").get_to(jt.fact);
    j.at("present").get_to(jt.present);
    j.at("oracle_id").get_to(jt.oracle_id);
    jt.raw_score.reset();
    if (j.contains("raw_score")) jt.raw_score = j["raw_score"].get<double>();
    jt.passage_index.reset();
    if (j.contains("passage_index"))
        jt.passage_index = j["passage_index"].get<size_t>();
}

struct InstanceRecord {
    std::string instance_id;
    std::string model_id;
    FactorLabels factors;
    std::string response;
    std::vector<AtomicFact> response_facts;
    std::vector<Judgment> precision_judgments;
    std::vector<Judgment> recall_judgments;
    std::optional<GroundingScore> score;
    std::optional<int> answer_acc;  // definite instances only
    std::optional<int> fluency;     // free-form instances, when enabled
    std::string error;              // non-empty marks a failed instance
};

inline void to_json(json& j, const InstanceRecord& r) {
    j = json{{"instance_id", r.instance_id},
             {"model_id", r.model_id},
             {"factors", r.factors},
             {"response", r.response},
             {"response_facts", r.response_facts},
             {"precision_judgments", r.precision_judgments},
             {"recall_judgments", r.recall_judgments}};
    if (r.score) j["score"] = *r.score;
    if (r.answer_acc) j["answer_accuracy"] = *r.answer_acc;
    if (r.fluency) j["fluency"] = *r.fluency;
    if (!r.error.empty()) j["error"] = r.error;
}

inline void from_json(const json& j, InstanceRecord& r) {
    j.at("instance_id").get_to(r.instance_id);
    j.at("model_id").get_to(r.model_id);
    j.at("factors").get_to(r.factors);
    j.at("response").get_to(r.response);
    j.at("response_facts").get_to(r.response_facts);
    j.at("precision_judgments").get_to(r.precision_judgments);
    j.at("recall_judgments").get_to(r.recall_judgments);
    r.score.reset();
    if (j.contains("score")) r.score = j["score"].get<GroundingScore>();
    r.answer_acc.reset();
    if (j.contains("answer_accuracy")) r.answer_acc = j["answer_accuracy"].get<int>();
    r.fluency.reset();
    if (j.contains("fluency")) r.fluency = j["fluency"].get<int>();
    r.error = j.value("error", std::string{});
}

struct RunResult {
    std::string run_id;
    std::string model_id;
    DatasetTag tag = DatasetTag::original_gold;
    json config;
    std::map<std::string, InstanceRecord> records;  // instance id -> record
};

struct RunSpec {
    std::string run_id;
    std::string model_id;
    DatasetTag tag = DatasetTag::original_gold;
    PrecisionScope scope = PrecisionScope::full_input;
    PromptTemplate prompt = PromptTemplate::standard();
    GenConfig gen;
    DecomposerSpec decomposer;
    OracleSpec oracle;
    std::shared_ptr<GenerationBackend> fluency_judge;  // enables fluency when set
    int parallelism = 1;
    std::filesystem::path out_dir = "runs";
    std::filesystem::path cache_dir;  // defaults to out_dir / "cache"
    // Extra config echoed into the snapshot (e.g. placement/budget of a
    // materialized *-Dist dataset); reports key off these fields.
    json annotations = json::object();
};

namespace detail {

inline json run_config_snapshot(const RunSpec& spec) {
    json oracle = {{"id", spec.oracle.id},
                   {"kind", to_string(spec.oracle.kind)},
                   {"concatenate_passages", spec.oracle.concatenate_passages}};
    if (is_scorer_kind(spec.oracle.kind) ||
        spec.oracle.kind == OracleKind::lexical_overlap)
        oracle["threshold"] = spec.oracle.threshold;
    json config{{"run_id", spec.run_id},
                {"model_id", spec.model_id},
                {"dataset_tag", to_string(spec.tag)},
                {"precision_scope", to_string(spec.scope)},
                {"template", {{"style", spec.prompt.style == PromptTemplate::Style::plain
                                            ? "plain"
                                            : "chat_tagged"},
                              {"body_hash", text::fnv1a_hex(spec.prompt.body)}}},
                {"decomposer", spec.decomposer.cache_id()},
                {"oracle", oracle},
                {"gen", gen_config_to_json(spec.gen)},
                {"fluency_enabled", static_cast<bool>(spec.fluency_judge)}};
    for (auto& [key, value] : spec.annotations.items()) config[key] = value;
    return config;
}

inline std::string record_filename(const std::string& instance_id) {
    auto sanitized = sanitize_component(instance_id);
    if (sanitized == instance_id) return sanitized + ".json";
    return sanitized + "-" + text::fnv1a_hex(instance_id).substr(0, 8) + ".json";
}

inline InstanceRecord evaluate_instance(const Instance& inst, const RunSpec& spec,
                                        GenerationBackend& gen_backend,
                                        const DecomposerSpec& decomposer,
                                        GenerationBackend* fluency_judge) {
    InstanceRecord rec;
    rec.instance_id = inst.id;
    rec.model_id = spec.model_id;
    rec.factors = inst.factors;

    std::string prompt = build_prompt(inst, spec.prompt);
    rec.response = generate(prompt, gen_backend, spec.gen, inst.id);

    if (!text::trim(rec.response).empty())
        rec.response_facts = decompose(rec.response, decomposer);

    if (spec.tag != DatasetTag::no_context) {
        GroundingScore score;
        auto prec = grounding_precision_detailed(rec.response_facts, inst.contexts,
                                                 spec.oracle, spec.scope);
        auto rec_frac =
            grounding_recall_detailed(inst.gold_facts, rec.response, spec.oracle);
        score.precision = prec.value;
        score.recall = rec_frac.value;
        score.f1 = grounding_f1(score.precision, score.recall);
        score.n_response_facts = rec.response_facts.size();
        score.n_gold_facts = inst.gold_facts.size();
        score.precision_scope = spec.scope;
        rec.precision_judgments = std::move(prec.judgments);
        rec.recall_judgments = std::move(rec_frac.judgments);
        rec.score = score;
    }

    if (inst.factors.answer_format == AnswerFormat::definite && !inst.answers.empty())
        rec.answer_acc = answer_accuracy(rec.response, inst.answers);

    if (fluency_judge && inst.factors.answer_format == AnswerFormat::free_form &&
        !text::trim(rec.response).empty())
        rec.fluency = fluency_score(rec.response, *fluency_judge);

    return rec;
}

}  // namespace detail

// Aggregate summary over a run's records; errored instances are excluded
// from means and counted separately.
inline json summarize_run(const RunResult& run) {
    double p = 0, r = 0, f = 0, acc = 0;
    size_t n_scored = 0, n_acc = 0, n_err = 0;
    for (const auto& [id, rec] : run.records) {
        if (!rec.error.empty()) {
            ++n_err;
            continue;
        }
        if (rec.score) {
            p += rec.score->precision;
            r += rec.score->recall;
            f += rec.score->f1;
            ++n_scored;
        }
        if (rec.answer_acc) {
            acc += *rec.answer_acc;
            ++n_acc;
        }
    }
    json j{{"run_id", run.run_id},
           {"model_id", run.model_id},
           {"dataset_tag", to_string(run.tag)},
           {"n_instances", run.records.size()},
           {"n_errors", n_err},
           {"n_scored", n_scored},
           {"n_answer_scored", n_acc}};
    if (n_scored) {
        j["mean_precision"] = 100.0 * p / static_cast<double>(n_scored);
        j["mean_recall"] = 100.0 * r / static_cast<double>(n_scored);
        j["mean_f1"] = 100.0 * f / static_cast<double>(n_scored);
    }
    if (n_acc) j["mean_answer_accuracy"] = 100.0 * acc / static_cast<double>(n_acc);
    return j;
}

// Runs the full pipeline over a dataset. Per-instance failures are
// recorded and do not abort the run; only configuration errors throw.
// Re-running with the same run directory resumes: finished instances are
// skipped and cached backend outputs are reused.
inline RunResult run_eval(const std::vector<Instance>& dataset,
                          std::shared_ptr<GenerationBackend> backend,
                          const RunSpec& spec) {
    if (spec.run_id.empty()) throw ConfigError("run_id is empty");
    if (!backend) throw ConfigError("backend is null");
    if (spec.prompt.body.find("{question}") == std::string::npos)
        throw ConfigError("prompt template has no {question} slot");
    if (spec.tag == DatasetTag::no_context && spec.prompt.has_contexts_slot())
        throw ConfigError("no_context run must use a template without {contexts}");
    if (spec.tag != DatasetTag::no_context && !spec.prompt.has_contexts_slot())
        throw ConfigError("context run needs a template with a {contexts} slot");
    if (spec.decomposer.kind == DecomposerSpec::Kind::llm_prompted &&
        !spec.decomposer.backend)
        throw ConfigError("llm_prompted decomposer has no backend");
    if (is_scorer_kind(spec.oracle.kind) && !spec.oracle.scorer)
        throw ConfigError("oracle \"" + spec.oracle.id + "\" has no scorer");
    if (spec.oracle.kind == OracleKind::llm_judge && !spec.oracle.judge_backend)
        throw ConfigError("oracle \"" + spec.oracle.id + "\" has no judge backend");

    auto run_dir = spec.out_dir / spec.run_id;
    auto records_dir = run_dir / "records";
    std::filesystem::create_directories(records_dir);
    auto cache_dir = spec.cache_dir.empty() ? spec.out_dir / "cache" : spec.cache_dir;
    FileCache cache(cache_dir);

    // Immutable config snapshot; resuming under a different config is an error.
    json config = detail::run_config_snapshot(spec);
    auto config_path = run_dir / "config.json";
    if (std::filesystem::exists(config_path)) {
        auto existing = json::parse(detail::read_file(config_path));
        if (existing != config)
            throw ConfigError("run " + spec.run_id +
                              " exists with a different config: " + config_path.string());
    } else {
        detail::write_file_atomic(config_path, config.dump(2) + "\n");
    }

    RunResult result;
    result.run_id = spec.run_id;
    result.model_id = spec.model_id;
    result.tag = spec.tag;
    result.config = config;

    // Resume: collect already-finished records.
    for (const auto& entry : std::filesystem::directory_iterator(records_dir)) {
        if (entry.path().extension() != ".json") continue;
        auto rec = json::parse(detail::read_file(entry.path())).get<InstanceRecord>();
        result.records[rec.instance_id] = std::move(rec);
    }

    // Cached views of the backends. Keys are content hashes, shared across runs.
    auto gen_backend = std::make_shared<CachingBackend>(
        backend, cache, "gen", text::fnv1a_hex(gen_config_to_json(spec.gen).dump()));
    DecomposerSpec decomposer = spec.decomposer;
    if (decomposer.kind == DecomposerSpec::Kind::llm_prompted)
        decomposer.backend = std::make_shared<CachingBackend>(
            decomposer.backend, cache, "decompose",
            text::fnv1a_hex(decomposer.prompt_template));
    std::shared_ptr<GenerationBackend> fluency_judge;
    if (spec.fluency_judge)
        fluency_judge = std::make_shared<CachingBackend>(
            spec.fluency_judge, cache, "fluency",
            text::fnv1a_hex(kFluencyInstruction));

    std::vector<const Instance*> todo;
    for (const auto& inst : dataset)
        if (!result.records.count(inst.id)) todo.push_back(&inst);

    std::mutex mu;
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= todo.size()) break;
            const Instance& inst = *todo[i];
            InstanceRecord rec;
            try {
                rec = detail::evaluate_instance(inst, spec, *gen_backend, decomposer,
                                                fluency_judge.get());
            } catch (const std::exception& e) {
                rec = InstanceRecord{};
                rec.instance_id = inst.id;
                rec.model_id = spec.model_id;
                rec.factors = inst.factors;
                rec.error = e.what();
            }
            detail::write_file_atomic(records_dir / detail::record_filename(inst.id),
                                      json(rec).dump(2) + "\n");
            std::lock_guard<std::mutex> lock(mu);
            result.records[rec.instance_id] = std::move(rec);
        }
    };

    int n_threads = std::max(1, spec.parallelism);
    if (n_threads == 1 || todo.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    detail::write_file_atomic(run_dir / "summary.json",
                              summarize_run(result).dump(2) + "\n");
    return result;
}

// Reads a persisted run directory back; missing pieces are named errors.
inline RunResult load_run_result(const std::filesystem::path& run_dir) {
    auto config_path = run_dir / "config.json";
    if (!std::filesystem::exists(config_path))
        throw Error("missing file: " + config_path.string());
    auto records_dir = run_dir / "records";
    if (!std::filesystem::exists(records_dir))
        throw Error("missing directory: " + records_dir.string());

    RunResult run;
    run.config = json::parse(detail::read_file(config_path));
    run.run_id = run.config.value("run_id", std::string{});
    run.model_id = run.config.value("model_id", std::string{});
    run.tag = dataset_tag_from_string(
        run.config.value("dataset_tag", std::string{"original_gold"}));
    for (const auto& entry : std::filesystem::directory_iterator(records_dir)) {
        if (entry.path().extension() != ".json") continue;
        auto rec = json::parse(detail::read_file(entry.path())).get<InstanceRecord>();
        run.records[rec.instance_id] = std::move(rec);
    }
    return run;
}

}  // namespace groundeval
