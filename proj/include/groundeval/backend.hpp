#pragma once

// Generation backend abstraction. The harness only needs "prompt in, text
// out"; model hosting, quantization, and per-model chat plumbing stay on
// the other side of this interface. Two offline backends (echo, scripted)
// make every pipeline stage testable without a model.

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include <json.hpp>

#include "groundeval/errors.hpp"

namespace groundeval {

struct Sampling {
    enum class Mode { backend_default, top_k, temperature };
    Mode mode = Mode::backend_default;
    int k = 10;
    double temperature = 0.6;

    bool operator==(const Sampling&) const = default;
};

struct GenOptions {
    size_t max_output_tokens = 2048;
    Sampling sampling;

    bool operator==(const GenOptions&) const = default;
};

struct GenRequest {
    std::string prompt;
    std::string instance_id;  // metadata for scripted/test backends
    GenOptions options;
};

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;
    virtual std::string generate(const GenRequest& req) = 0;
    virtual std::string id() const = 0;
};

// Returns its prompt unchanged.
class EchoBackend : public GenerationBackend {
public:
    std::string generate(const GenRequest& req) override { return req.prompt; }
    std::string id() const override { return "echo"; }
};

// Fixed responses keyed by instance id. File format: one JSON object per
// line, {"instance_id": ..., "response": ...}.
class ScriptedBackend : public GenerationBackend {
public:
    explicit ScriptedBackend(std::map<std::string, std::string> responses)
        : responses_(std::move(responses)) {}

    static ScriptedBackend from_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open scripted responses: " + path.string());
        std::map<std::string, std::string> responses;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            try {
                auto j = nlohmann::json::parse(line);
                responses[j.at("instance_id").get<std::string>()] =
                    j.at("response").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": " + e.what());
            }
        }
        return ScriptedBackend(std::move(responses));
    }

    std::string generate(const GenRequest& req) override {
        auto it = responses_.find(req.instance_id);
        if (it == responses_.end())
            throw MalformedRequestError("no scripted response for instance: " +
                                        req.instance_id);
        return it->second;
    }

    std::string id() const override { return "scripted"; }

private:
    std::map<std::string, std::string> responses_;
};

// Wraps an arbitrary function as a backend. Handy for tests and for
// judge/scorer doubles.
class CallbackBackend : public GenerationBackend {
public:
    using Fn = std::function<std::string(const GenRequest&)>;
    CallbackBackend(std::string id, Fn fn) : id_(std::move(id)), fn_(std::move(fn)) {}

    std::string generate(const GenRequest& req) override { return fn_(req); }
    std::string id() const override { return id_; }

private:
    std::string id_;
    Fn fn_;
};

// Decorator that counts calls to the wrapped backend. Tests use it to
// assert that cached runs make zero backend calls.
class CallCountingBackend : public GenerationBackend {
public:
    explicit CallCountingBackend(std::shared_ptr<GenerationBackend> inner)
        : inner_(std::move(inner)) {}

    std::string generate(const GenRequest& req) override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return inner_->generate(req);
    }

    std::string id() const override { return inner_->id(); }

    size_t calls() const { return calls_.load(std::memory_order_relaxed); }

private:
    std::shared_ptr<GenerationBackend> inner_;
    std::atomic<size_t> calls_{0};
};

}  // namespace groundeval
