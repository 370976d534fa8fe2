// groundeval: batch CLI for grounding evaluation.
//
// Subcommands: evaluate, judge, atomize, perturb (inject|rank|bucket|
// check-conflict), calibrate, report. Exit codes: 0 success, 1 runtime
// failure, 2 usage error. Flags override config-file values which override
// defaults. Backend auth tokens are read from an environment variable,
// never from a flag.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "groundeval/atomizer.hpp"
#include "groundeval/backend.hpp"
#include "groundeval/dataset.hpp"
#include "groundeval/harness.hpp"
#include "groundeval/http_backend.hpp"
#include "groundeval/metrics.hpp"
#include "groundeval/oracle.hpp"
#include "groundeval/perturb.hpp"
#include "groundeval/report.hpp"

namespace ge = groundeval;
namespace fs = std::filesystem;
using ge::json;

namespace {

// "echo" | "scripted:<file>" | "http:<url>"
std::shared_ptr<ge::GenerationBackend> make_backend(const std::string& spec,
                                                    const std::string& model,
                                                    const std::string& token_env) {
    if (spec == "echo") return std::make_shared<ge::EchoBackend>();
    if (spec.rfind("scripted:", 0) == 0)
        return std::make_shared<ge::ScriptedBackend>(
            ge::ScriptedBackend::from_file(spec.substr(9)));
    if (spec.rfind("http:", 0) == 0)
        return std::make_shared<ge::HttpChatBackend>(
            spec.substr(5).rfind("//", 0) == 0 ? "http:" + spec.substr(5)
                                               : spec.substr(5),
            model.empty() ? "default" : model, token_env);
    throw ge::ConfigError("unknown backend spec: " + spec +
                          " (expected echo, scripted:<file>, http:<url>)");
}

ge::OracleSpec resolve_oracle(const std::string& name, const std::string& registry_path,
                              std::optional<double> threshold_override,
                              const std::string& stopwords_path,
                              const std::string& token_env) {
    ge::OracleSpec spec;
    if (name == "lexical") {
        spec = ge::OracleSpec::lexical();
    } else if (name == "jaccard") {
        spec.kind = ge::OracleKind::embedding_similarity_threshold;
        spec.threshold = 0.4;
        spec.id = "jaccard";
        spec.scorer = std::make_shared<ge::JaccardScorer>();
    } else if (name == "overlap") {
        spec.kind = ge::OracleKind::pair_scorer_threshold;
        spec.threshold = 3.0;
        spec.id = "overlap";
        spec.scorer = std::make_shared<ge::TermOverlapScorer>();
    } else {
        if (registry_path.empty())
            throw ge::ConfigError("oracle \"" + name +
                                  "\" is not builtin; pass --oracle-registry");
        auto registry = ge::load_oracle_registry(registry_path);
        auto it = registry.find(name);
        if (it == registry.end())
            throw ge::ConfigError("oracle \"" + name + "\" not found in " +
                                  registry_path);
        const auto& cfg = it->second;
        spec.kind = cfg.kind;
        spec.threshold = cfg.threshold;
        spec.id = cfg.id;
        if (ge::is_scorer_kind(cfg.kind)) {
            if (cfg.endpoint.empty())
                throw ge::ConfigError("oracle \"" + name +
                                      "\" needs a scoring endpoint in the registry");
            spec.scorer = std::make_shared<ge::HttpPairScorer>(
                cfg.endpoint, cfg.model.empty() ? cfg.id : cfg.model, token_env);
        } else if (cfg.kind == ge::OracleKind::llm_judge) {
            if (cfg.endpoint.empty())
                throw ge::ConfigError("oracle \"" + name +
                                      "\" needs a generation endpoint in the registry");
            spec.judge_backend = std::make_shared<ge::HttpChatBackend>(
                cfg.endpoint, cfg.model.empty() ? cfg.id : cfg.model, token_env);
        }
    }
    if (threshold_override) spec.threshold = *threshold_override;
    if (!stopwords_path.empty()) spec.stopwords = ge::text::load_stopwords(stopwords_path);
    return spec;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ge::ConfigError("cannot open file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto t = ge::text::trim(line);
        if (!t.empty()) lines.push_back(t);
    }
    return lines;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ge::ConfigError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Evaluate options gathered from flags/config file.
struct EvaluateOptions {
    std::string dataset;
    std::string distractors;
    std::string tag = "original_gold";
    std::string backend;
    std::string model;
    std::string oracle;
    std::string oracle_registry;
    std::string decomposer = "rule";
    std::string decomposer_prompt;
    std::string decomposer_backend;
    std::string template_style = "plain";
    std::string template_file;
    std::string scope = "full_input";
    std::string run_id;
    std::string out = "runs";
    std::string cache_dir;
    std::string stopwords;
    std::string token_env = "GROUNDEVAL_API_TOKEN";
    std::string fluency_backend;
    std::optional<double> threshold;
    size_t budget = 2048;
    std::string placement = "end";
    uint64_t seed = 0;
    size_t max_input_tokens = 2048;
    size_t max_output_tokens = 2048;
    int parallelism = 1;
};

// Materializes the *-Dist variant of each instance from a distractor pool
// file. Every instance must have a pool record; an empty ranked list is a
// legitimate "no distractors available" case.
std::vector<ge::Instance> materialize_dist(const std::vector<ge::Instance>& instances,
                                           const std::string& pool_path,
                                           size_t budget_tokens,
                                           const std::string& placement_name,
                                           uint64_t seed) {
    auto pools = ge::load_distractor_pools(pool_path);
    std::map<std::string, const ge::DistractorPool*> by_id;
    for (const auto& p : pools) by_id[p.instance_id] = &p;

    ge::BudgetSpec budget;
    budget.max_tokens = budget_tokens;
    ge::PlacementStrategy placement{ge::placement_from_string(placement_name), seed};

    std::vector<ge::Instance> out;
    for (const auto& inst : instances) {
        auto it = by_id.find(inst.id);
        if (it == by_id.end())
            throw ge::ConfigError("no distractor pool record for instance " + inst.id +
                                  " in " + pool_path);
        std::vector<ge::ContextDocument> ranked;
        for (const auto& d : it->second->ranked)
            ranked.push_back({d.title, d.url, d.body, false});
        out.push_back(ge::inject_distractors(inst, ranked, budget, placement));
    }
    return out;
}

int cmd_evaluate(const EvaluateOptions& opt) {
    auto tag = ge::dataset_tag_from_string(opt.tag);
    bool is_dist =
        tag == ge::DatasetTag::original_dist || tag == ge::DatasetTag::conflict_dist;
    bool is_conflict =
        tag == ge::DatasetTag::conflict_gold || tag == ge::DatasetTag::conflict_dist;
    if (is_dist && opt.distractors.empty())
        throw ge::ConfigError("--tag " + opt.tag +
                              " needs a distractor pool file (--distractors)");

    auto all = ge::load_dataset(opt.dataset);
    std::vector<ge::Instance> instances;
    for (auto& inst : all)
        if ((inst.version == ge::Version::conflict) == is_conflict)
            instances.push_back(std::move(inst));
    if (instances.empty())
        throw ge::ConfigError("dataset has no " +
                              std::string(is_conflict ? "conflict" : "original") +
                              " instances: " + opt.dataset);

    ge::RunSpec spec;
    if (is_dist) {
        instances = materialize_dist(instances, opt.distractors, opt.budget,
                                     opt.placement, opt.seed);
        spec.annotations["budget"] = opt.budget;
        spec.annotations["placement"] = opt.placement;
    }

    auto backend = make_backend(opt.backend, opt.model, opt.token_env);
    auto counting = std::make_shared<ge::CallCountingBackend>(backend);

    spec.run_id = opt.run_id.empty()
                      ? (opt.model.empty() ? backend->id() : opt.model) + "-" + opt.tag
                      : opt.run_id;
    spec.model_id = opt.model.empty() ? backend->id() : opt.model;
    spec.tag = tag;
    spec.scope = ge::precision_scope_from_string(opt.scope);
    spec.oracle = resolve_oracle(opt.oracle, opt.oracle_registry, opt.threshold,
                                 opt.stopwords, opt.token_env);
    spec.out_dir = opt.out;
    if (!opt.cache_dir.empty()) spec.cache_dir = opt.cache_dir;
    spec.parallelism = opt.parallelism;
    spec.gen.max_input_tokens = opt.max_input_tokens;
    spec.gen.max_output_tokens = opt.max_output_tokens;

    auto style = opt.template_style == "chat" ? ge::PromptTemplate::Style::chat_tagged
                                              : ge::PromptTemplate::Style::plain;
    spec.prompt = tag == ge::DatasetTag::no_context
                      ? ge::PromptTemplate::without_context(style)
                      : ge::PromptTemplate::standard(style);
    if (!opt.template_file.empty()) spec.prompt.body = read_file(opt.template_file);

    if (opt.decomposer == "rule") {
        spec.decomposer.kind = ge::DecomposerSpec::Kind::rule_based;
    } else if (opt.decomposer == "llm") {
        if (opt.decomposer_prompt.empty() || opt.decomposer_backend.empty())
            throw ge::ConfigError(
                "--decomposer llm needs --decomposer-prompt and --decomposer-backend");
        spec.decomposer.kind = ge::DecomposerSpec::Kind::llm_prompted;
        spec.decomposer.prompt_template = read_file(opt.decomposer_prompt);
        spec.decomposer.backend =
            make_backend(opt.decomposer_backend, opt.model, opt.token_env);
    } else {
        throw ge::ConfigError("unknown decomposer: " + opt.decomposer);
    }

    if (!opt.fluency_backend.empty())
        spec.fluency_judge = make_backend(opt.fluency_backend, opt.model, opt.token_env);

    auto result = ge::run_eval(instances, counting, spec);

    size_t n_errors = 0;
    for (const auto& [id, rec] : result.records)
        if (!rec.error.empty()) {
            ++n_errors;
            std::cerr << "instance " << id << " failed: " << rec.error << "\n";
        }
    std::cerr << "backend calls: " << counting->calls() << "\n";
    std::cout << ge::summarize_run(result).dump(2) << "\n";
    std::cerr << "run directory: " << (spec.out_dir / spec.run_id).string() << "\n";
    return 0;
}

struct JudgeOptions {
    std::string facts;
    std::string passages;
    std::string oracle;
    std::string oracle_registry;
    std::string stopwords;
    std::string token_env = "GROUNDEVAL_API_TOKEN";
    std::optional<double> threshold;
    std::string out;
};

int cmd_judge(const JudgeOptions& opt) {
    auto fact_lines = read_lines(opt.facts);
    if (fact_lines.empty()) {
        std::cerr << "no facts in " << opt.facts << "\n";
        return 1;
    }
    auto passages = read_lines(opt.passages);
    if (passages.empty()) {
        std::cerr << "no passages in " << opt.passages << "\n";
        return 1;
    }
    auto oracle = resolve_oracle(opt.oracle, opt.oracle_registry, opt.threshold,
                                 opt.stopwords, opt.token_env);

    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!opt.out.empty()) {
        out_file.open(opt.out);
        if (!out_file) throw ge::Error("cannot write file: " + opt.out);
        out = &out_file;
    }

    size_t present = 0, failed = 0;
    for (const auto& fact_text : fact_lines) {
        try {
            auto j = ge::judge({fact_text, std::nullopt}, passages, oracle);
            if (j.present) ++present;
            *out << json(j).dump() << "\n";
        } catch (const std::exception& e) {
            ++failed;
            *out << json{{"fact", {{"text", fact_text}}}, {"error", e.what()}}.dump()
                 << "\n";
        }
    }
    std::cerr << "judged " << fact_lines.size() << " facts against "
              << passages.size() << " passages: " << present << " present, "
              << fact_lines.size() - present - failed << " absent, " << failed
              << " failed\n";
    return 0;
}

struct AtomizeOptions {
    std::string input;
    std::string decomposer = "rule";
    std::string decomposer_prompt;
    std::string decomposer_backend;
    std::string model;
    std::string token_env = "GROUNDEVAL_API_TOKEN";
    std::string out;
};

int cmd_atomize(const AtomizeOptions& opt) {
    ge::DecomposerSpec spec;
    if (opt.decomposer == "llm") {
        if (opt.decomposer_prompt.empty() || opt.decomposer_backend.empty())
            throw ge::ConfigError(
                "--decomposer llm needs --decomposer-prompt and --decomposer-backend");
        spec.kind = ge::DecomposerSpec::Kind::llm_prompted;
        spec.prompt_template = read_file(opt.decomposer_prompt);
        spec.backend = make_backend(opt.decomposer_backend, opt.model, opt.token_env);
    } else if (opt.decomposer != "rule") {
        throw ge::ConfigError("unknown decomposer: " + opt.decomposer);
    }

    auto facts = ge::decompose(read_file(opt.input), spec);
    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!opt.out.empty()) {
        out_file.open(opt.out);
        if (!out_file) throw ge::Error("cannot write file: " + opt.out);
        out = &out_file;
    }
    for (const auto& f : facts) *out << f.text << "\n";
    std::cerr << facts.size() << " facts\n";
    return 0;
}

std::vector<ge::ContextDocument> load_corpus(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ge::ConfigError("cannot open corpus: " + path.string());
    std::vector<ge::ContextDocument> docs;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (ge::text::trim(line).empty()) continue;
        try {
            auto j = json::parse(line);
            docs.push_back({j.at("title").get<std::string>(),
                            j.value("url", std::string{}),
                            j.at("body").get<std::string>(), false});
        } catch (const json::exception& e) {
            throw ge::ParseError(path.string() + ":" + std::to_string(lineno) + ": " +
                                 e.what());
        }
    }
    return docs;
}

int cmd_perturb_rank(const std::string& dataset_path, const std::string& corpus_path,
                     size_t top_n, const std::string& out_path) {
    auto instances = ge::load_dataset(dataset_path);
    auto corpus = load_corpus(corpus_path);
    ge::TermOverlapRanker ranker;

    std::vector<ge::DistractorPool> pools;
    for (const auto& inst : instances) {
        std::set<std::string> exclude;
        for (const auto& d : inst.contexts)
            if (d.is_gold) exclude.insert(d.title);
        auto ranked = ge::rank_distractors(inst.question, corpus, ranker, exclude, top_n);
        ge::DistractorPool pool;
        pool.instance_id = inst.id;
        for (size_t i = 0; i < ranked.size(); ++i)
            pool.ranked.push_back({ranked[i].title, ranked[i].url, ranked[i].body,
                                   static_cast<int>(i + 1),
                                   ranker.score(inst.question, ranked[i])});
        pools.push_back(std::move(pool));
    }
    ge::save_distractor_pools(pools, out_path);
    std::cerr << "wrote " << pools.size() << " pools to " << out_path << "\n";
    return 0;
}

int cmd_perturb_inject(const std::string& dataset_path, const std::string& pool_path,
                       size_t budget, const std::string& placement, uint64_t seed,
                       const std::string& out_path) {
    auto instances = ge::load_dataset(dataset_path);
    auto materialized = materialize_dist(instances, pool_path, budget, placement, seed);
    ge::save_dataset(materialized, out_path);
    std::cerr << "wrote " << materialized.size() << " instances to " << out_path
              << "\n";
    return 0;
}

int cmd_perturb_bucket(const std::string& pageviews, double top_frac,
                       double bottom_frac, const std::string& out_high,
                       const std::string& out_low) {
    auto records = ge::load_pageview_records(pageviews);
    auto buckets = ge::popularity_bucket(records, top_frac, bottom_frac);
    auto write_titles = [](const std::string& path, const std::set<std::string>& titles) {
        std::ofstream out(path);
        if (!out) throw ge::Error("cannot write file: " + path);
        for (const auto& t : titles) out << t << "\n";
    };
    write_titles(out_high, buckets.high);
    write_titles(out_low, buckets.low);
    std::cerr << buckets.high.size() << " high / " << buckets.low.size()
              << " low titles\n";
    return 0;
}

int cmd_perturb_check_conflict(const std::string& original_path,
                               const std::string& conflict_path,
                               const std::string& oracle_name,
                               const std::string& registry, const std::string& stopwords,
                               const std::string& token_env,
                               const std::string& out_path) {
    // both flags may point at the same mixed-version file
    auto originals = ge::load_dataset(original_path);
    auto conflicts_all = ge::load_dataset(conflict_path);
    std::vector<ge::Instance> conflicts;
    for (auto& inst : conflicts_all)
        if (inst.version == ge::Version::conflict) conflicts.push_back(std::move(inst));
    if (conflicts.empty())
        throw ge::ConfigError("no conflict instances in " + conflict_path);
    auto oracle =
        resolve_oracle(oracle_name, registry, std::nullopt, stopwords, token_env);

    std::map<std::string, const ge::Instance*> by_id;
    for (const auto& inst : originals)
        if (inst.version == ge::Version::original) by_id[inst.id] = &inst;

    json report = json::array();
    size_t invalid = 0;
    for (const auto& conflict : conflicts) {
        auto it = by_id.find(conflict.id);
        if (it == by_id.end()) {
            report.push_back({{"id", conflict.id}, {"error", "no original counterpart"}});
            ++invalid;
            continue;
        }
        auto r = ge::check_conflict_consistency(*it->second, conflict, oracle);
        json entry{{"id", conflict.id},
                   {"missing_in_conflict", r.missing_in_conflict},
                   {"still_in_original", r.still_in_original},
                   {"answers_suspicious", r.answers_suspicious}};
        if (!r.pair_valid()) ++invalid;
        report.push_back(std::move(entry));
    }

    json doc{{"pairs", report}, {"n_pairs", conflicts.size()}, {"n_flagged", invalid}};
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw ge::Error("cannot write file: " + out_path);
        out << doc.dump(2) << "\n";
    }
    std::cerr << conflicts.size() << " pairs checked, " << invalid << " flagged\n";
    return 0;
}

int cmd_calibrate(const std::string& labeled_path, const std::string& oracle_name,
                  const std::string& registry, const std::string& stopwords,
                  const std::string& token_env) {
    std::ifstream in(labeled_path);
    if (!in) throw ge::ConfigError("cannot open labeled file: " + labeled_path);
    std::vector<ge::LabeledPair> labeled;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (ge::text::trim(line).empty()) continue;
        try {
            auto j = json::parse(line);
            labeled.push_back({{j.at("fact").get<std::string>(), std::nullopt},
                               j.at("passage").get<std::string>(),
                               j.at("human_present").get<bool>()});
        } catch (const json::exception& e) {
            throw ge::ParseError(labeled_path + ":" + std::to_string(lineno) + ": " +
                                 e.what());
        }
    }
    auto oracle =
        resolve_oracle(oracle_name, registry, std::nullopt, stopwords, token_env);
    auto result = ge::calibrate_threshold(labeled, oracle);
    json out{{"oracle", oracle.id},
             {"agreement", result.agreement},
             {"n", labeled.size()}};
    // the sentinel thresholds are infinite; JSON has no literal for them
    if (std::isfinite(result.threshold))
        out["threshold"] = result.threshold;
    else
        out["threshold"] = result.threshold > 0 ? "+inf" : "-inf";
    if (!result.warning.empty()) out["warning"] = result.warning;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& run_dirs,
               const std::string& external_scores_path, const std::string& out_dir) {
    std::vector<ge::RunResult> runs;
    for (const auto& dir : run_dirs) runs.push_back(ge::load_run_result(dir));

    std::map<std::string, double> external;
    if (!external_scores_path.empty()) {
        auto j = json::parse(read_file(external_scores_path));
        for (auto& [model, score] : j.items()) external[model] = score.get<double>();
    }
    auto written = ge::emit_report(runs, external, out_dir);
    for (const auto& p : written) std::cerr << "wrote " << p.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grounding evaluation toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file with key=value lines");

    // evaluate
    EvaluateOptions eval;
    auto* evaluate = app.add_subcommand("evaluate", "run a model over a dataset");
    evaluate->add_option("--dataset", eval.dataset, "dataset file")->required();
    evaluate->add_option("--distractors", eval.distractors, "distractor pool file");
    evaluate->add_option("--tag", eval.tag,
                         "original_gold|original_dist|conflict_gold|conflict_dist|"
                         "no_context")
        ->required();
    evaluate->add_option("--backend", eval.backend,
                         "echo | scripted:<file> | http:<url>")
        ->required();
    evaluate->add_option("--model", eval.model, "model id for records and cache keys");
    evaluate->add_option("--oracle", eval.oracle, "oracle id (lexical|jaccard|overlap|registry id)")
        ->required();
    evaluate->add_option("--oracle-registry", eval.oracle_registry, "oracle registry JSON");
    evaluate->add_option("--threshold", eval.threshold, "oracle threshold override");
    evaluate->add_option("--decomposer", eval.decomposer, "rule | llm");
    evaluate->add_option("--decomposer-prompt", eval.decomposer_prompt,
                         "prompt template file for the llm decomposer");
    evaluate->add_option("--decomposer-backend", eval.decomposer_backend,
                         "backend spec for the llm decomposer");
    evaluate->add_option("--template", eval.template_style, "plain | chat");
    evaluate->add_option("--template-file", eval.template_file,
                         "custom prompt template body");
    evaluate->add_option("--scope", eval.scope, "full_input | gold_only");
    evaluate->add_option("--budget", eval.budget, "token budget for *-dist materialization");
    evaluate->add_option("--placement", eval.placement,
                         "end | beginning | middle | random");
    evaluate->add_option("--seed", eval.seed, "seed for random placement");
    evaluate->add_option("--run-id", eval.run_id, "run id (resume key)");
    evaluate->add_option("--out", eval.out, "output directory for runs");
    evaluate->add_option("--cache-dir", eval.cache_dir, "backend output cache directory");
    evaluate->add_option("--stopwords", eval.stopwords, "stopword list file");
    evaluate->add_option("--token-env", eval.token_env,
                         "environment variable holding the API token");
    evaluate->add_option("--fluency-backend", eval.fluency_backend,
                         "backend spec for the fluency judge");
    evaluate->add_option("--max-input-tokens", eval.max_input_tokens, "input budget");
    evaluate->add_option("--max-output-tokens", eval.max_output_tokens, "output budget");
    evaluate->add_option("--parallelism", eval.parallelism, "concurrent instances");

    // judge
    JudgeOptions jopt;
    auto* judge_cmd = app.add_subcommand("judge", "judge facts against passages");
    judge_cmd->add_option("--facts", jopt.facts, "facts file, one per line")->required();
    judge_cmd->add_option("--passages", jopt.passages, "passages file, one per line")
        ->required();
    judge_cmd->add_option("--oracle", jopt.oracle, "oracle id")->required();
    judge_cmd->add_option("--oracle-registry", jopt.oracle_registry, "registry JSON");
    judge_cmd->add_option("--threshold", jopt.threshold, "threshold override");
    judge_cmd->add_option("--stopwords", jopt.stopwords, "stopword list file");
    judge_cmd->add_option("--token-env", jopt.token_env, "token environment variable");
    judge_cmd->add_option("--out", jopt.out, "judgment output file (default stdout)");

    // atomize
    AtomizeOptions aopt;
    auto* atomize = app.add_subcommand("atomize", "decompose text into atomic facts");
    atomize->add_option("--input", aopt.input, "input text file")->required();
    atomize->add_option("--decomposer", aopt.decomposer, "rule | llm");
    atomize->add_option("--decomposer-prompt", aopt.decomposer_prompt, "prompt file");
    atomize->add_option("--decomposer-backend", aopt.decomposer_backend, "backend spec");
    atomize->add_option("--model", aopt.model, "model id");
    atomize->add_option("--token-env", aopt.token_env, "token environment variable");
    atomize->add_option("--out", aopt.out, "facts output file (default stdout)");

    // perturb
    auto* perturb = app.add_subcommand("perturb", "build perturbed datasets");
    perturb->require_subcommand(1);

    std::string p_dataset, p_pool, p_out, p_placement = "end";
    size_t p_budget = 4096;
    uint64_t p_seed = 0;
    auto* inject = perturb->add_subcommand("inject", "materialize a *-dist dataset");
    inject->add_option("--dataset", p_dataset, "gold dataset file")->required();
    inject->add_option("--distractors", p_pool, "distractor pool file")->required();
    inject->add_option("--budget", p_budget, "token budget");
    inject->add_option("--placement", p_placement, "end|beginning|middle|random");
    inject->add_option("--seed", p_seed, "seed for random placement");
    inject->add_option("--out", p_out, "output dataset file")->required();

    std::string r_dataset, r_corpus, r_out;
    size_t r_topn = 40;
    auto* rank = perturb->add_subcommand("rank", "rank distractor candidates");
    rank->add_option("--dataset", r_dataset, "dataset file")->required();
    rank->add_option("--corpus", r_corpus, "corpus file, one JSON doc per line")
        ->required();
    rank->add_option("--top-n", r_topn, "candidates per instance");
    rank->add_option("--out", r_out, "output pool file")->required();

    std::string b_pageviews, b_high, b_low;
    double b_top = 0.3, b_bottom = 0.3;
    auto* bucket = perturb->add_subcommand("bucket", "bucket titles by popularity");
    bucket->add_option("--pageviews", b_pageviews, "pageview records (tsv)")->required();
    bucket->add_option("--top-frac", b_top, "high-popularity fraction");
    bucket->add_option("--bottom-frac", b_bottom, "low-popularity fraction");
    bucket->add_option("--out-high", b_high, "high titles output")->required();
    bucket->add_option("--out-low", b_low, "low titles output")->required();

    std::string c_original, c_conflict, c_oracle = "lexical", c_registry, c_stop,
                c_token = "GROUNDEVAL_API_TOKEN", c_out;
    auto* check = perturb->add_subcommand("check-conflict",
                                          "validate original/conflict pairs");
    check->add_option("--original", c_original, "original dataset")->required();
    check->add_option("--conflict", c_conflict, "conflict dataset")->required();
    check->add_option("--oracle", c_oracle, "oracle id");
    check->add_option("--oracle-registry", c_registry, "registry JSON");
    check->add_option("--stopwords", c_stop, "stopword list file");
    check->add_option("--token-env", c_token, "token environment variable");
    check->add_option("--out", c_out, "report file (default stdout)");

    // calibrate
    std::string cal_labeled, cal_oracle, cal_registry, cal_stop,
        cal_token = "GROUNDEVAL_API_TOKEN";
    auto* calibrate = app.add_subcommand("calibrate", "calibrate an oracle threshold");
    calibrate->add_option("--labeled", cal_labeled,
                          "labeled pairs file, one JSON object per line")
        ->required();
    calibrate->add_option("--oracle", cal_oracle, "oracle id")->required();
    calibrate->add_option("--oracle-registry", cal_registry, "registry JSON");
    calibrate->add_option("--stopwords", cal_stop, "stopword list file");
    calibrate->add_option("--token-env", cal_token, "token environment variable");

    // report
    std::vector<std::string> rep_runs;
    std::string rep_external, rep_out = "report";
    auto* report = app.add_subcommand("report", "aggregate runs into tables");
    report->add_option("--runs", rep_runs, "run directories")->required();
    report->add_option("--external-scores", rep_external,
                       "JSON map of model id to external score");
    report->add_option("--out", rep_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(evaluate)) return cmd_evaluate(eval);
        if (app.got_subcommand(judge_cmd)) return cmd_judge(jopt);
        if (app.got_subcommand(atomize)) return cmd_atomize(aopt);
        if (app.got_subcommand(perturb)) {
            if (perturb->got_subcommand(inject))
                return cmd_perturb_inject(p_dataset, p_pool, p_budget, p_placement,
                                          p_seed, p_out);
            if (perturb->got_subcommand(rank))
                return cmd_perturb_rank(r_dataset, r_corpus, r_topn, r_out);
            if (perturb->got_subcommand(bucket))
                return cmd_perturb_bucket(b_pageviews, b_top, b_bottom, b_high, b_low);
            if (perturb->got_subcommand(check))
                return cmd_perturb_check_conflict(c_original, c_conflict, c_oracle,
                                                  c_registry, c_stop, c_token, c_out);
        }
        if (app.got_subcommand(calibrate))
            return cmd_calibrate(cal_labeled, cal_oracle, cal_registry, cal_stop,
                                 cal_token);
        if (app.got_subcommand(report))
            return cmd_report(rep_runs, rep_external, rep_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
