#include "chartcynics/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace chartcynics {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// "http://host:port/path" -> {"http://host:port", "/path"}
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const auto scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        throw BackendError("endpoint '" + endpoint + "' must include a scheme");
    const auto slash = endpoint.find('/', scheme + 3);
    if (slash == std::string::npos) return {endpoint, ""};
    std::string prefix = endpoint.substr(slash);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {endpoint.substr(0, slash), prefix};
}

bool retryable_status(int status) { return status == 429 || (status >= 500 && status < 600); }

std::string response_text(const json& body) {
    const auto& choices = body.at("choices");
    if (!choices.is_array() || choices.empty())
        throw BackendError("response has no choices");
    const auto& content = choices[0].at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
        std::string out;
        for (const auto& part : content) {
            if (part.contains("text")) out += part["text"].get<std::string>();
        }
        return out;
    }
    throw BackendError("unsupported message content type");
}

struct HttpClientSettings {
    std::string base;
    std::string prefix;
    httplib::Headers headers;
    double timeout_seconds;
};

HttpClientSettings make_settings(const BackendConfig& config, const std::string& endpoint) {
    HttpClientSettings s;
    std::tie(s.base, s.prefix) = split_endpoint(endpoint);
    s.timeout_seconds = config.timeout_seconds;
    if (!config.auth_env.empty()) {
        const char* token = std::getenv(config.auth_env.c_str());
        if (token == nullptr || *token == '\0')
            throw BackendError("environment variable '" + config.auth_env + "' is not set");
        s.headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    return s;
}

// Posts to the configured endpoint with retry/backoff; returns the body of
// the first 200 response.
std::string post_with_retries(const HttpClientSettings& settings, const std::string& body,
                              const BackendConfig& config, std::uint64_t jitter_seed) {
    const std::string path = settings.prefix.empty() ? "/" : settings.prefix;
    std::string attempt_log;
    const int attempts = config.retries + 1;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        httplib::Client cli(settings.base);
        const auto sec = static_cast<time_t>(settings.timeout_seconds);
        const auto usec = static_cast<time_t>((settings.timeout_seconds - double(sec)) * 1e6);
        cli.set_connection_timeout(sec, usec);
        cli.set_read_timeout(sec, usec);
        cli.set_write_timeout(sec, usec);

        auto res = cli.Post(path.c_str(), settings.headers, body, "application/json");
        if (res && res->status == 200) return res->body;

        std::string why = res ? ("status " + std::to_string(res->status))
                              : ("transport error " + httplib::to_string(res.error()));
        attempt_log += "attempt " + std::to_string(attempt) + ": " + why + "; ";

        const bool retryable = !res || retryable_status(res->status);
        if (!retryable)
            throw BackendError("request to " + path + " failed (" + why +
                               "): " + (res ? res->body : ""));
        if (attempt < attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                backoff_delay_ms(attempt, config.backoff_base_ms, jitter_seed)));
        }
    }
    throw BackendError("request to " + path + " failed after " + std::to_string(attempts) +
                       " attempts: " + attempt_log);
}

}  // namespace

std::vector<std::string> BackendConfig::validate() const {
    std::vector<std::string> problems;
    if (retries < 0) problems.push_back("retries must be >= 0");
    if (!(timeout_seconds > 0)) problems.push_back("timeout_seconds must be > 0");
    if (kind == Kind::Http && endpoint.empty()) problems.push_back("http backend needs endpoint");
    if (kind == Kind::Scripted && fixtures_path.empty())
        problems.push_back("scripted backend needs fixtures path");
    return problems;
}

BackendConfig backend_config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw BackendError(std::string("backend config: ") + e.what());
    }
    static const std::set<std::string> known = {
        "kind",    "endpoint",        "model",    "temperature",     "max_tokens",
        "timeout_seconds", "retries", "backoff_base_ms", "auth_env", "fixtures",
        "ocr_endpoint"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (known.count(it.key()) == 0)
            throw BackendError("unknown backend config key '" + it.key() + "'");
    }

    BackendConfig c;
    const std::string kind = j.value("kind", "scripted");
    if (kind == "http")
        c.kind = BackendConfig::Kind::Http;
    else if (kind == "scripted")
        c.kind = BackendConfig::Kind::Scripted;
    else
        throw BackendError("backend config field 'kind' must be \"http\" or \"scripted\"");
    c.endpoint = j.value("endpoint", "");
    c.model = j.value("model", "");
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.retries = j.value("retries", c.retries);
    c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
    c.auth_env = j.value("auth_env", "");
    c.fixtures_path = j.value("fixtures", "");
    c.ocr_endpoint = j.value("ocr_endpoint", "");

    if (auto problems = c.validate(); !problems.empty()) {
        std::string msg = "invalid backend config";
        for (const auto& p : problems) msg += "; " + p;
        throw BackendError(msg);
    }
    return c;
}

BackendConfig load_backend_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BackendError("cannot open backend config '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return backend_config_from_json(text);
}

ScriptedBackend::ScriptedBackend(std::map<std::string, std::string> fixtures)
    : fixtures_(std::move(fixtures)) {}

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BackendError("cannot open fixtures '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw BackendError("fixtures '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw BackendError("fixtures '" + path + "' must be a JSON object");
    std::map<std::string, std::string> fixtures;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_string())
            throw BackendError("fixture '" + it.key() + "' must be a string");
        fixtures[it.key()] = it.value().get<std::string>();
    }
    return ScriptedBackend(std::move(fixtures));
}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
    const std::string key = request.stage + "/" + request.sample_id;
    auto it = fixtures_.find(key);
    if (it == fixtures_.end()) throw BackendError("no fixture for key '" + key + "'");
    return it->second;
}

std::string ScriptedBackend::ocr(const std::string& sample_id,
                                 const std::vector<std::uint8_t>&) {
    auto it = fixtures_.find("ocr/" + sample_id);
    return it == fixtures_.end() ? std::string() : it->second;
}

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {}

std::string HttpBackend::complete(const CompletionRequest& request) {
    json content = json::array();
    content.push_back({{"type", "text"}, {"text", request.prompt}});
    for (const auto& png : request.images) {
        content.push_back(
            {{"type", "image_url"},
             {"image_url",
              {{"url", "data:image/png;base64," + base64_encode(png.data(), png.size())}}}});
    }
    const json body = {
        {"model", config_.model},
        {"messages", json::array({json{{"role", "user"}, {"content", std::move(content)}}})},
        {"temperature", config_.temperature},
        {"max_tokens", config_.max_tokens},
    };

    const auto settings = make_settings(config_, config_.endpoint);
    const std::uint64_t seed =
        splitmix64(std::hash<std::string>{}(request.stage + "/" + request.sample_id));
    const std::string response =
        post_with_retries(settings, body.dump(), config_, seed);
    try {
        return response_text(json::parse(response));
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed completion response: ") + e.what());
    }
}

std::string HttpBackend::ocr(const std::string& sample_id,
                             const std::vector<std::uint8_t>& png) {
    if (config_.ocr_endpoint.empty()) return "";
    const json body = {{"image_b64", base64_encode(png.data(), png.size())}};
    const auto settings = make_settings(config_, config_.ocr_endpoint);
    const std::uint64_t seed = splitmix64(std::hash<std::string>{}("ocr/" + sample_id));
    const std::string response = post_with_retries(settings, body.dump(), config_, seed);
    try {
        return json::parse(response).at("markdown").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed OCR response: ") + e.what());
    }
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
    if (config.kind == BackendConfig::Kind::Scripted)
        return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(config.fixtures_path));
    return std::make_unique<HttpBackend>(config);
}

std::string base64_encode(const std::uint8_t* data, std::size_t size) {
    static const char alphabet[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((size + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= size; i += 3) {
        const std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back(alphabet[v & 63]);
    }
    if (i + 1 == size) {
        const std::uint32_t v = data[i] << 16;
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == size) {
        const std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

int backoff_delay_ms(int attempt, int base_ms, std::uint64_t jitter_seed) {
    if (attempt < 1) attempt = 1;
    const int shift = std::min(attempt - 1, 20);
    const std::int64_t slot = std::int64_t(base_ms) << shift;
    if (slot <= 0) return 0;
    const std::uint64_t jitter = splitmix64(jitter_seed ^ std::uint64_t(attempt)) % std::uint64_t(slot);
    return static_cast<int>(std::min<std::int64_t>(slot + std::int64_t(jitter), 60000));
}

}  // namespace chartcynics
