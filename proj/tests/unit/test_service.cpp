#include <doctest.h>

#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "chartcynics/dataset.hpp"
#include "chartcynics/service.hpp"

namespace cc = chartcynics;
using nlohmann::json;

namespace {

struct RunningService {
    cc::RewardService service;
    std::thread thread;
    int port = 0;

    explicit RunningService(cc::ServiceConfig config) : service(std::move(config)) {
        port = service.bind_any("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { service.listen_after_bind(); });
        // poll /health until the listener answers
        httplib::Client probe("127.0.0.1", port);
        for (int i = 0; i < 100; ++i) {
            if (auto res = probe.Get("/health")) break;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
    }

    ~RunningService() {
        service.stop();
        if (thread.joinable()) thread.join();
    }
};

cc::ServiceConfig plain_config() {
    cc::ServiceConfig config;
    config.taxonomy = cc::default_taxonomy();
    return config;
}

json score_body(const std::string& trace, const std::string& answer = "A") {
    return json{
        {"trace_text", trace},
        {"ground_truth", answer},
        {"trap", "B"},
        {"misleader", "inverted_axis"},
        {"oracle",
         json::array({json{{"category", "2005"}, {"series", "Deaths"}, {"value", 873.0}},
                      json{{"category", "2010"}, {"series", "Deaths"}, {"value", 1021.0}}})},
    };
}

const std::string kTrace =
    "<Visual_Heuristic>\nPerception Audit: inverted axis.\n</Visual_Heuristic>\n"
    "<OCR_Validation>\nIn 2005 the value is 873. In 2010 the value is 1021.\n"
    "</OCR_Validation>\n"
    "<Ambiguity_Resolution>\nAdversarial Trap Rejection applies.\n</Ambiguity_Resolution>\n"
    "<Final_Answer>\nFinal Answer: A\n</Final_Answer>\n";

std::string random_trace(std::mt19937_64& rng) {
    static const std::vector<std::string> headers = {
        "Perception Audit", "Numerical Anchoring", "Deception Mapping",
        "Sufficiency & Integrity Check", "Adversarial Trap Rejection"};
    static const std::vector<std::string> phrases = {
        "the axis looks inverted", "a reversed axis hides growth", "values are 873 and 1021",
        "in 2005 we see 873", "in 2010 we see 1021", "nothing to report"};
    static const std::vector<std::string> finals = {"Final Answer: A", "Final Answer: B",
                                                    "Final Answer: C", "Cannot be Inferred"};
    auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
    std::string out;
    if (rng() % 4 != 0) {
        out += "<Visual_Heuristic>\n" + pick(headers) + ". " + pick(phrases) +
               "\n</Visual_Heuristic>\n";
    }
    if (rng() % 4 != 0) {
        out += "<OCR_Validation>\n" + pick(phrases) + ". " + pick(phrases) +
               "\n</OCR_Validation>\n";
    }
    if (rng() % 4 != 0) {
        out += "<Ambiguity_Resolution>\n" + pick(headers) + ": " + pick(phrases) +
               "\n</Ambiguity_Resolution>\n";
    }
    out += "<Final_Answer>\n" + pick(finals) + "\n</Final_Answer>\n";
    return out;
}

}  // namespace

TEST_CASE("health endpoint answers ok") {
    RunningService rs(plain_config());
    httplib::Client client("127.0.0.1", rs.port);
    auto res = client.Get("/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["status"] == "ok");
}

TEST_CASE("score endpoint matches the in-process computation byte for byte") {
    RunningService rs(plain_config());
    httplib::Client client("127.0.0.1", rs.port);

    std::mt19937_64 rng(31);
    const cc::PipelineConfig pipeline;
    const cc::Taxonomy taxonomy = cc::default_taxonomy();
    for (int trial = 0; trial < 100; ++trial) {
        const std::string trace = random_trace(rng);
        const json body = score_body(trace);
        auto res = client.Post("/v1/score", body.dump(), "application/json");
        REQUIRE(res);
        REQUIRE(res->status == 200);

        const cc::ScoreRequest request = cc::score_request_from_json(body);
        const cc::RewardBreakdown local =
            cc::score_request_to_breakdown(request, pipeline, taxonomy);
        CHECK(res->body == cc::reward_to_json(local).dump());
    }
}

TEST_CASE("score honors weight overrides") {
    RunningService rs(plain_config());
    httplib::Client client("127.0.0.1", rs.port);
    json body = score_body(kTrace);
    body["weights"] = {{"fact", 0.0}, {"contra", 0.0}, {"logic", 0.0}, {"fmt", 0.0}};
    auto res = client.Post("/v1/score", body.dump(), "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 200);
    const json out = json::parse(res->body);
    CHECK(out["weights"]["fact"] == 0.0);
    CHECK(out["total"] == out["shaping"]);
}

TEST_CASE("score_group returns breakdowns plus advantages") {
    RunningService rs(plain_config());
    httplib::Client client("127.0.0.1", rs.port);

    std::mt19937_64 rng(37);
    json requests = json::array();
    for (int i = 0; i < 8; ++i) requests.push_back(score_body(random_trace(rng)));
    auto res = client.Post("/v1/score_group", json{{"requests", requests}}.dump(),
                           "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 200);
    const json out = json::parse(res->body);
    REQUIRE(out["breakdowns"].size() == 8);
    REQUIRE(out["advantages"].size() == 8);

    std::vector<double> totals;
    for (const auto& b : out["breakdowns"]) totals.push_back(b["total"].get<double>());
    const auto expected = cc::group_advantage(totals, 8);
    for (int i = 0; i < 8; ++i) CHECK(out["advantages"][i].get<double>() == expected[i]);
}

TEST_CASE("malformed requests get 400 with a field name") {
    RunningService rs(plain_config());
    httplib::Client client("127.0.0.1", rs.port);

    auto res = client.Post("/v1/score", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);

    json body = score_body(kTrace);
    body.erase("ground_truth");
    res = client.Post("/v1/score", body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(res->body.find("ground_truth") != std::string::npos);

    res = client.Post("/v1/score_group", json{{"requests", json::array()}}.dump(),
                      "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
}

TEST_CASE("unknown categories get 422") {
    RunningService rs(plain_config());
    httplib::Client client("127.0.0.1", rs.port);
    json body = score_body(kTrace);
    body["misleader"] = "martian_interference";
    auto res = client.Post("/v1/score", body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 422);
    CHECK(res->body.find("martian_interference") != std::string::npos);
}

TEST_CASE("non-json content type gets 415") {
    RunningService rs(plain_config());
    httplib::Client client("127.0.0.1", rs.port);
    auto res = client.Post("/v1/score", score_body(kTrace).dump(), "text/plain");
    REQUIRE(res);
    CHECK(res->status == 415);
}

TEST_CASE("bearer auth guards every endpoint when configured") {
    cc::ServiceConfig config = plain_config();
    config.bearer_token = "hunter2";
    RunningService rs(std::move(config));
    httplib::Client client("127.0.0.1", rs.port);

    auto res = client.Get("/health");
    REQUIRE(res);
    CHECK(res->status == 401);

    res = client.Post("/v1/score", score_body(kTrace).dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 401);

    httplib::Headers auth = {{"Authorization", "Bearer hunter2"}};
    res = client.Get("/health", auth);
    REQUIRE(res);
    CHECK(res->status == 200);
}

TEST_CASE("score_request_from_json validates labels") {
    json body = score_body(kTrace);
    body["ground_truth"] = "AA";
    CHECK_THROWS_AS(cc::score_request_from_json(body), cc::DatasetError);
    body = score_body(kTrace);
    body["trap"] = "z";
    CHECK_THROWS_AS(cc::score_request_from_json(body), cc::DatasetError);
    body = score_body(kTrace);
    body.erase("trap");
    const cc::ScoreRequest r = cc::score_request_from_json(body);
    CHECK(r.trap.empty());
}
