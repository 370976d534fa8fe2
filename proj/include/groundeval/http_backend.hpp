#pragma once

// HTTP-backed generation and scoring. The wire contract is a
// chat-completion-style JSON POST to a configured endpoint; the
// authorization token comes from an environment variable, never a flag.
// Kept in its own header so offline builds and tests never pull httplib.

#include <cstdlib>
#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "groundeval/backend.hpp"
#include "groundeval/errors.hpp"
#include "groundeval/oracle.hpp"

namespace groundeval {

namespace detail {

// Splits "http://host:port/some/path" into client base and path.
inline std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos)
        throw ConfigError("endpoint URL needs a scheme: " + url);
    auto path_start = url.find('/', scheme + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

inline std::string bearer_token(const std::string& env_name) {
    if (env_name.empty()) return {};
    const char* tok = std::getenv(env_name.c_str());
    return tok ? tok : "";
}

inline std::string post_json(const std::string& url, const std::string& token,
                             const nlohmann::json& body) {
    auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res)
        throw TransientBackendError("no response from " + url + ": " +
                                    httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw TransientBackendError("HTTP " + std::to_string(res->status) + " from " +
                                    url + ": " + res->body);
    if (res->status >= 400)
        throw MalformedRequestError("HTTP " + std::to_string(res->status) + " from " +
                                    url + ": " + res->body);
    return res->body;
}

}  // namespace detail

// Sends {model, prompt | messages, max_tokens, sampling fields} and reads
// the completion back from any of the common response shapes.
class HttpChatBackend : public GenerationBackend {
public:
    HttpChatBackend(std::string endpoint_url, std::string model,
                    std::string token_env = "GROUNDEVAL_API_TOKEN",
                    bool as_messages = true)
        : url_(std::move(endpoint_url)),
          model_(std::move(model)),
          token_env_(std::move(token_env)),
          as_messages_(as_messages) {}

    std::string generate(const GenRequest& req) override {
        nlohmann::json body{{"model", model_},
                            {"max_tokens", req.options.max_output_tokens}};
        if (as_messages_)
            body["messages"] = nlohmann::json::array(
                {{{"role", "user"}, {"content", req.prompt}}});
        else
            body["prompt"] = req.prompt;
        switch (req.options.sampling.mode) {
            case Sampling::Mode::top_k: body["top_k"] = req.options.sampling.k; break;
            case Sampling::Mode::temperature:
                body["temperature"] = req.options.sampling.temperature;
                break;
            default: break;
        }

        auto raw = detail::post_json(url_, detail::bearer_token(token_env_), body);
        nlohmann::json res;
        try {
            res = nlohmann::json::parse(raw);
        } catch (const nlohmann::json::exception&) {
            throw BackendError("unparseable backend response: " + raw);
        }
        if (res.contains("text")) return res["text"].get<std::string>();
        if (res.contains("completion")) return res["completion"].get<std::string>();
        if (res.contains("choices") && !res["choices"].empty()) {
            const auto& choice = res["choices"][0];
            if (choice.contains("text")) return choice["text"].get<std::string>();
            if (choice.contains("message"))
                return choice["message"].at("content").get<std::string>();
        }
        throw BackendError("backend response has no completion field: " + raw);
    }

    std::string id() const override { return model_; }

private:
    std::string url_;
    std::string model_;
    std::string token_env_;
    bool as_messages_;
};

// Scores a (fact, passage) pair through a scoring endpoint:
// request {model, text_pair: [fact, passage]}, response {"score": x}.
// Works for cross-encoder relevance scores and embedding similarities
// alike; the endpoint owns the model.
class HttpPairScorer : public PairScorer {
public:
    HttpPairScorer(std::string endpoint_url, std::string model,
                   std::string token_env = "GROUNDEVAL_API_TOKEN")
        : url_(std::move(endpoint_url)),
          model_(std::move(model)),
          token_env_(std::move(token_env)) {}

    double score(const std::string& fact, const std::string& passage) override {
        nlohmann::json body{{"model", model_},
                            {"text_pair", nlohmann::json::array({fact, passage})}};
        auto raw = detail::post_json(url_, detail::bearer_token(token_env_), body);
        try {
            return nlohmann::json::parse(raw).at("score").get<double>();
        } catch (const nlohmann::json::exception&) {
            throw BackendError("unparseable scorer response: " + raw);
        }
    }

    std::string id() const override { return model_; }

private:
    std::string url_;
    std::string model_;
    std::string token_env_;
};

}  // namespace groundeval
