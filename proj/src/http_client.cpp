#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "logihard/harness.hpp"

namespace logihard {

void EndpointConfig::validate() const {
    if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0) {
        throw ConfigError("endpoint: base_url must start with http:// or https://");
    }
    if (model_name.empty()) throw ConfigError("endpoint: model_name is required");
    if (max_tokens <= 0) throw ConfigError("endpoint: max_tokens must be positive");
    if (timeout_seconds <= 0) throw ConfigError("endpoint: timeout_seconds must be positive");
    if (max_retries < 0) throw ConfigError("endpoint: max_retries must be >= 0");
    if (backoff_ms < 0) throw ConfigError("endpoint: backoff_ms must be >= 0");
    if (!(temperature >= 0.0)) throw ConfigError("endpoint: temperature must be >= 0");
}

EndpointConfig EndpointConfig::from_json(const nlohmann::json& j) {
    EndpointConfig e;
    try {
        e.base_url = j.at("base_url").get<std::string>();
        e.model_name = j.at("model_name").get<std::string>();
        e.api_key_env = j.value("api_key_env", e.api_key_env);
        e.temperature = j.value("temperature", e.temperature);
        e.max_tokens = j.value("max_tokens", e.max_tokens);
        e.timeout_seconds = j.value("timeout_seconds", e.timeout_seconds);
        e.max_retries = j.value("max_retries", e.max_retries);
        e.backoff_ms = j.value("backoff_ms", e.backoff_ms);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("endpoint: ") + ex.what());
    }
    e.validate();
    return e;
}

nlohmann::json EndpointConfig::to_json() const {
    return {{"base_url", base_url},       {"model_name", model_name},   {"api_key_env", api_key_env},
            {"temperature", temperature}, {"max_tokens", max_tokens},   {"timeout_seconds", timeout_seconds},
            {"max_retries", max_retries}, {"backoff_ms", backoff_ms}};
}

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // without trailing slash
};

SplitUrl split_url(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    const std::size_t path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    out.origin = url.substr(0, path_start);
    if (path_start != std::string::npos) out.path = url.substr(path_start);
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    return out;
}

bool retryable_code(int code) { return code == 429 || code >= 500; }

}  // namespace

Reply query_model(const EndpointConfig& endpoint, const Prompt& prompt, const TransportLog& log) {
    Reply reply;
    const auto started = std::chrono::steady_clock::now();
    const auto finish = [&](Reply r) {
        r.latency_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
        return r;
    };

    httplib::Headers headers;
    if (!endpoint.api_key_env.empty()) {
        const char* key = std::getenv(endpoint.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            reply.status = TransportStatus::HttpError;
            reply.error = "environment variable " + endpoint.api_key_env + " is not set";
            return finish(reply);
        }
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const nlohmann::json body = {{"model", endpoint.model_name},
                                 {"messages",
                                  {{{"role", "system"}, {"content", prompt.system}},
                                   {{"role", "user"}, {"content", prompt.user}}}},
                                 {"temperature", endpoint.temperature},
                                 {"max_tokens", endpoint.max_tokens}};
    const std::string payload = body.dump();
    const SplitUrl url = split_url(endpoint.base_url);

    httplib::Client client(url.origin);
    client.set_connection_timeout(endpoint.timeout_seconds, 0);
    client.set_read_timeout(endpoint.timeout_seconds, 0);
    client.set_write_timeout(endpoint.timeout_seconds, 0);

    for (int attempt = 0;; ++attempt) {
        reply.retries = attempt;
        bool retry = false;
        auto res = client.Post(url.path + "/chat/completions", headers, payload, "application/json");
        // The key travels only in the Authorization header, which is never logged.
        nlohmann::json entry = {{"type", "http"},  {"attempt", attempt}, {"model", endpoint.model_name},
                                {"request", body}, {"response", nullptr}};
        if (!res) {
            const httplib::Error err = res.error();
            const bool timeout = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout;
            reply.status = timeout ? TransportStatus::Timeout : TransportStatus::HttpError;
            reply.http_code = 0;
            reply.error = httplib::to_string(err);
            retry = true;
        } else {
            reply.http_code = res->status;
            entry["response"] = res->body;
            if (res->status == 200) {
                try {
                    const auto j = nlohmann::json::parse(res->body);
                    reply.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
                    reply.status = TransportStatus::Ok;
                    reply.error.clear();
                } catch (const std::exception& ex) {
                    reply.status = TransportStatus::HttpError;
                    reply.error = std::string("malformed response body: ") + ex.what();
                }
            } else {
                reply.status = TransportStatus::HttpError;
                reply.error = "HTTP " + std::to_string(res->status);
                retry = retryable_code(res->status);
            }
        }
        entry["status"] = status_name(reply.status);
        entry["http_code"] = reply.http_code;
        if (!reply.error.empty()) entry["error"] = reply.error;
        if (log) log(entry);
        if (!retry || attempt >= endpoint.max_retries) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<std::int64_t>(endpoint.backoff_ms) << attempt));
    }
    return finish(reply);
}

}  // namespace logihard
