#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace chartcynics {

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackendConfig {
    enum class Kind { Http, Scripted };
    Kind kind = Kind::Scripted;
    std::string endpoint;
    std::string model;
    double temperature = 0.0;
    int max_tokens = 1024;
    double timeout_seconds = 60.0;
    int retries = 2;
    int backoff_base_ms = 250;
    std::string auth_env;      // env var holding the bearer token, never the token itself
    std::string fixtures_path; // Scripted only
    std::string ocr_endpoint;  // optional OCR service; empty means none

    std::vector<std::string> validate() const;
};

BackendConfig backend_config_from_json(const std::string& json_text);
BackendConfig load_backend_config(const std::string& path);

struct CompletionRequest {
    std::string stage;      // "diagnostic" | "reasoning" | "fusion"
    std::string sample_id;
    std::string prompt;
    std::vector<std::vector<std::uint8_t>> images;  // PNG bytes, attachment order
};

class Backend {
public:
    virtual ~Backend() = default;

    virtual std::string complete(const CompletionRequest& request) = 0;

    // Returns markdown for the image, or empty when no OCR source exists for
    // this sample. Throws BackendError only on genuine transport failure.
    virtual std::string ocr(const std::string& sample_id,
                            const std::vector<std::uint8_t>& png) = 0;
};

// Deterministic fixture lookup keyed "<stage>/<sample_id>".
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::map<std::string, std::string> fixtures);
    static ScriptedBackend from_file(const std::string& path);

    std::string complete(const CompletionRequest& request) override;
    std::string ocr(const std::string& sample_id,
                    const std::vector<std::uint8_t>& png) override;

private:
    std::map<std::string, std::string> fixtures_;
};

// OpenAI-compatible chat-completions client with vision attachments and
// exponential backoff.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig config);

    std::string complete(const CompletionRequest& request) override;
    std::string ocr(const std::string& sample_id,
                    const std::vector<std::uint8_t>& png) override;

private:
    BackendConfig config_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& config);

std::string base64_encode(const std::uint8_t* data, std::size_t size);

// Delay before retry attempt `attempt` (1-based); non-decreasing in attempt.
int backoff_delay_ms(int attempt, int base_ms, std::uint64_t jitter_seed);

}  // namespace chartcynics
