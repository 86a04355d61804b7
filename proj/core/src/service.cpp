#include "chartcynics/service.hpp"

#include <httplib.h>

#include "chartcynics/dataset.hpp"

namespace chartcynics {

using nlohmann::json;

namespace {

bool valid_label(const std::string& label) {
    return label.size() == 1 && label[0] >= 'A' && label[0] <= 'F';
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

}  // namespace

ScoreRequest score_request_from_json(const json& j) {
    if (!j.is_object()) throw DatasetError("request must be a JSON object");
    ScoreRequest r;
    auto require_string = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string())
            throw DatasetError(std::string("field '") + key + "' must be a string");
        return it->get<std::string>();
    };
    r.trace_text = require_string("trace_text");
    r.ground_truth = require_string("ground_truth");
    if (!valid_label(r.ground_truth))
        throw DatasetError("field 'ground_truth' must be a single letter A-F");
    if (auto it = j.find("trap"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw DatasetError("field 'trap' must be a string");
        r.trap = it->get<std::string>();
        if (!r.trap.empty() && !valid_label(r.trap))
            throw DatasetError("field 'trap' must be a single letter A-F");
    }
    r.misleader = require_string("misleader");
    if (auto it = j.find("oracle"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw DatasetError("field 'oracle' must be an array");
        for (const auto& row : *it) {
            OracleRow o;
            auto cat = row.find("category");
            if (cat == row.end() || !cat->is_string())
                throw DatasetError("field 'oracle.category' must be a string");
            o.category = cat->get<std::string>();
            if (auto s = row.find("series"); s != row.end() && s->is_string())
                o.series = s->get<std::string>();
            auto val = row.find("value");
            if (val == row.end() || !val->is_number())
                throw DatasetError("field 'oracle.value' must be a number");
            o.value = val->get<double>();
            r.oracle_table.push_back(std::move(o));
        }
    }
    if (auto it = j.find("explanation"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw DatasetError("field 'explanation' must be a string");
        r.explanation = it->get<std::string>();
    }
    if (auto it = j.find("weights"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw DatasetError("field 'weights' must be an object");
        r.has_weight_overrides = true;
        r.weights.fact = it->value("fact", r.weights.fact);
        r.weights.contra = it->value("contra", r.weights.contra);
        r.weights.logic = it->value("logic", r.weights.logic);
        r.weights.fmt = it->value("fmt", r.weights.fmt);
    }
    return r;
}

RewardBreakdown score_request_to_breakdown(const ScoreRequest& request,
                                           const PipelineConfig& config,
                                           const Taxonomy& taxonomy) {
    PipelineConfig effective = config;
    if (request.has_weight_overrides) effective.weights = request.weights;

    ChartSample sample;
    sample.id = "request";
    sample.ground_truth = request.ground_truth;
    sample.trap = request.trap;
    sample.misleader = request.misleader;
    sample.oracle_table = request.oracle_table;
    sample.explanation = request.explanation;

    const ReasoningTrace trace = parse_trace(request.trace_text);
    return total_reward(trace, sample, effective, taxonomy);
}

struct RewardService::Impl {
    ServiceConfig config;
    httplib::Server server;

    explicit Impl(ServiceConfig cfg) : config(std::move(cfg)) { setup_routes(); }

    bool authorized(const httplib::Request& req) const {
        if (config.bearer_token.empty()) return true;
        return req.get_header_value("Authorization") == "Bearer " + config.bearer_token;
    }

    bool guard(const httplib::Request& req, httplib::Response& res) const {
        if (!authorized(req)) {
            send_json(res, 401, json{{"error", "unauthorized"}});
            return false;
        }
        const std::string content_type = req.get_header_value("Content-Type");
        if (content_type.rfind("application/json", 0) != 0) {
            send_json(res, 415, json{{"error", "content type must be application/json"}});
            return false;
        }
        return true;
    }

    void handle_score(const httplib::Request& req, httplib::Response& res) {
        if (!guard(req, res)) return;
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            send_json(res, 400, json{{"error", std::string("malformed JSON: ") + e.what()}});
            return;
        }
        try {
            const ScoreRequest request = score_request_from_json(body);
            const RewardBreakdown breakdown =
                score_request_to_breakdown(request, config.pipeline, config.taxonomy);
            send_json(res, 200, reward_to_json(breakdown));
        } catch (const RewardError& e) {
            send_json(res, 422, json{{"error", e.what()}});
        } catch (const DatasetError& e) {
            send_json(res, 400, json{{"error", e.what()}});
        }
    }

    void handle_score_group(const httplib::Request& req, httplib::Response& res) {
        if (!guard(req, res)) return;
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            send_json(res, 400, json{{"error", std::string("malformed JSON: ") + e.what()}});
            return;
        }
        try {
            auto it = body.find("requests");
            if (it == body.end() || !it->is_array())
                throw DatasetError("field 'requests' must be an array");
            if (it->size() < 2) throw DatasetError("field 'requests' needs at least 2 entries");
            json breakdowns = json::array();
            std::vector<double> totals;
            for (const auto& rj : *it) {
                const ScoreRequest request = score_request_from_json(rj);
                const RewardBreakdown breakdown =
                    score_request_to_breakdown(request, config.pipeline, config.taxonomy);
                totals.push_back(breakdown.total);
                breakdowns.push_back(reward_to_json(breakdown));
            }
            const std::vector<double> advantages =
                group_advantage(totals, static_cast<int>(totals.size()));
            send_json(res, 200, json{{"breakdowns", std::move(breakdowns)},
                                     {"advantages", advantages}});
        } catch (const RewardError& e) {
            send_json(res, 422, json{{"error", e.what()}});
        } catch (const DatasetError& e) {
            send_json(res, 400, json{{"error", e.what()}});
        }
    }

    void setup_routes() {
        server.Get("/health", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req)) {
                send_json(res, 401, json{{"error", "unauthorized"}});
                return;
            }
            send_json(res, 200, json{{"status", "ok"}});
        });
        server.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
            handle_score(req, res);
        });
        server.Post("/v1/score_group",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle_score_group(req, res);
                    });
    }
};

RewardService::RewardService(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RewardService::~RewardService() = default;

bool RewardService::listen(const std::string& host, int port) {
    return impl_->server.listen(host, port);
}

int RewardService::bind_any(const std::string& host) {
    return impl_->server.bind_to_any_port(host);
}

bool RewardService::listen_after_bind() { return impl_->server.listen_after_bind(); }

void RewardService::stop() { impl_->server.stop(); }

}  // namespace chartcynics
