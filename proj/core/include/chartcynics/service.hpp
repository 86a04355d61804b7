#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartcynics/reward.hpp"
#include "chartcynics/types.hpp"

namespace chartcynics {

struct ScoreRequest {
    std::string trace_text;
    std::string ground_truth;
    std::string trap;
    std::string misleader;
    std::vector<OracleRow> oracle_table;
    std::string explanation;
    bool has_weight_overrides = false;
    RewardWeights weights;
};

// Throws DatasetError naming the offending field.
ScoreRequest score_request_from_json(const nlohmann::json& j);

// The exact computation the service performs, callable in process.
RewardBreakdown score_request_to_breakdown(const ScoreRequest& request,
                                           const PipelineConfig& config,
                                           const Taxonomy& taxonomy);

struct ServiceConfig {
    PipelineConfig pipeline;
    Taxonomy taxonomy;
    std::string bearer_token;  // from an env var; empty disables auth
};

// POST /v1/score, POST /v1/score_group, GET /health. Malformed JSON or bad
// fields give 400, unknown categories 422, wrong content type 415.
class RewardService {
public:
    explicit RewardService(ServiceConfig config);
    ~RewardService();

    // Blocking; false when the address cannot be bound.
    bool listen(const std::string& host, int port);

    // Ephemeral-port variant for tests: bind, then run listen_after_bind on a
    // caller-owned thread.
    int bind_any(const std::string& host);
    bool listen_after_bind();

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace chartcynics
