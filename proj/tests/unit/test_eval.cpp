#include <doctest.h>

#include <algorithm>
#include <random>

#include "chartcynics/eval.hpp"

namespace cc = chartcynics;

namespace {

std::vector<cc::PerSampleOutcome> synth_outcomes(int correct, int wm, int wo) {
    std::vector<cc::PerSampleOutcome> out;
    int n = 0;
    for (int i = 0; i < correct; ++i)
        out.push_back({"s" + std::to_string(n++), "A", cc::Outcome::Correct});
    for (int i = 0; i < wm; ++i)
        out.push_back({"s" + std::to_string(n++), "B", cc::Outcome::WrongMisled});
    for (int i = 0; i < wo; ++i)
        out.push_back({"s" + std::to_string(n++), "Abstain", cc::Outcome::WrongOther});
    return out;
}

cc::ChartSample pool_sample(const std::string& id, const std::string& misleader,
                            const std::string& chart_type) {
    cc::ChartSample s;
    s.id = id;
    s.question = "Q?";
    s.options = {{"A", "Yes"}, {"B", "No"}};
    s.ground_truth = "A";
    s.trap = "B";
    s.misleader = misleader;
    s.chart_type = chart_type;
    return s;
}

}  // namespace

TEST_CASE("classify_outcome partitions answers") {
    CHECK(cc::classify_outcome({"A", false}, "A", "B") == cc::Outcome::Correct);
    CHECK(cc::classify_outcome({"B", false}, "A", "B") == cc::Outcome::WrongMisled);
    CHECK(cc::classify_outcome({"C", false}, "A", "B") == cc::Outcome::WrongOther);
    CHECK(cc::classify_outcome({"", true}, "A", "B") == cc::Outcome::WrongOther);
    CHECK(cc::outcome_name(cc::Outcome::Correct) == "Correct");
    CHECK(cc::outcome_name(cc::Outcome::WrongMisled) == "WM");
    CHECK(cc::outcome_name(cc::Outcome::WrongOther) == "WO");
}

TEST_CASE("round2 is half-up at two decimals") {
    CHECK(cc::round2(88.524) == 88.52);
    CHECK(cc::round2(88.525) == 88.53);
    CHECK(cc::round2(31.967) == 31.97);
    CHECK(cc::round2(0.0) == 0.0);
    CHECK(cc::round2(100.0) == 100.0);
}

TEST_CASE("aggregate reproduces fixed-ratio percentage arithmetic") {
    SUBCASE("two sides at 108 and 39 correct of 122 each") {
        const cc::EvalResult standard_side = cc::aggregate(synth_outcomes(108, 10, 4));
        REQUIRE(standard_side.counts.total == 122);
        CHECK(standard_side.percentages.acc == doctest::Approx(88.52).epsilon(1e-9));
        const cc::EvalResult misleading_side = cc::aggregate(synth_outcomes(39, 70, 13));
        REQUIRE(misleading_side.counts.total == 122);
        CHECK(misleading_side.percentages.acc == doctest::Approx(31.97).epsilon(1e-9));
        const cc::EvalResult overall = cc::aggregate(synth_outcomes(147, 80, 17));
        REQUIRE(overall.counts.total == 244);
        CHECK(overall.percentages.acc == doctest::Approx(60.25).epsilon(1e-9));
    }
    SUBCASE("two sides at 115 and 83 correct of 122 each") {
        const cc::EvalResult a = cc::aggregate(synth_outcomes(115, 4, 3));
        CHECK(a.counts.total == 122);
        CHECK(a.percentages.acc == doctest::Approx(94.26).epsilon(1e-9));
        const cc::EvalResult b = cc::aggregate(synth_outcomes(83, 30, 9));
        CHECK(b.percentages.acc == doctest::Approx(68.03).epsilon(1e-9));
        const cc::EvalResult c = cc::aggregate(synth_outcomes(198, 30, 16));
        CHECK(c.counts.total == 244);
        CHECK(c.percentages.acc == doctest::Approx(81.15).epsilon(1e-9));
    }
}

TEST_CASE("aggregate rejects empty input") {
    CHECK_THROWS_AS(cc::aggregate({}), cc::EvalError);
}

TEST_CASE("percentages sum to 100 within rounding slack") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
        const int total = 1 + int(rng() % 300);
        const int correct = int(rng() % std::uint64_t(total + 1));
        const int wm = int(rng() % std::uint64_t(total - correct + 1));
        const cc::EvalResult r = cc::aggregate(synth_outcomes(correct, wm, total - correct - wm));
        const double sum = r.percentages.acc + r.percentages.wm + r.percentages.wo;
        CHECK(std::abs(sum - 100.0) <= 0.02);
    }
}

TEST_CASE("eval_result_to_json exposes counts and percentages") {
    const auto j = cc::eval_result_to_json(cc::aggregate(synth_outcomes(2, 1, 1)));
    CHECK(j["counts"]["correct"] == 2);
    CHECK(j["counts"]["wm"] == 1);
    CHECK(j["counts"]["wo"] == 1);
    CHECK(j["counts"]["total"] == 4);
    CHECK(j["percentages"]["acc"] == 50.0);
    REQUIRE(j["per_sample"].is_array());
    CHECK(j["per_sample"].size() == 4);
    CHECK(j["per_sample"][0]["outcome"] == "Correct");
}

TEST_CASE("render_report emits markdown and csv rows sorted by name") {
    std::map<std::string, cc::EvalResult> results;
    results["zeta"] = cc::aggregate(synth_outcomes(1, 0, 1));
    results["alpha"] = cc::aggregate(synth_outcomes(1, 1, 0));

    const std::string md = cc::render_report(results, cc::ReportFormat::Markdown);
    CHECK(md.find("| name |") != std::string::npos);
    CHECK(md.find("Acc") != std::string::npos);
    CHECK(md.find("alpha") < md.find("zeta"));
    CHECK(md.find("50.00") != std::string::npos);

    const std::string csv = cc::render_report(results, cc::ReportFormat::Csv);
    CHECK(csv.find("name,acc,wm,wo") == 0);
    CHECK(csv.find("alpha,50.00,50.00,0.00") != std::string::npos);
    CHECK(csv.find("zeta,50.00,0.00,50.00") != std::string::npos);
}

TEST_CASE("mixed sampler draws the documented quotas") {
    std::vector<cc::ChartSample> misleading;
    const std::vector<std::string> misleaders = {
        "inverted_axis", "truncated_axis", "inappropriate_order", "inappropriate_aggregation",
        "inappropriate_scale_functions", "cherry_picking", "disproportionate_encoding"};
    const std::vector<std::string> charts = {"line", "bar", "pie", "scatter", "area",
                                             "bubble", "radar", "heatmap", "funnel"};
    int mid = 0;
    for (const auto& m : misleaders)
        for (const auto& c : charts) {
            if (m == "disproportionate_encoding" && c == "heatmap") continue;
            if (m == "disproportionate_encoding" && c == "funnel") continue;
            for (int k = 0; k < 3; ++k)
                misleading.push_back(
                    pool_sample("m" + std::to_string(mid++), m, c));
        }
    // 7*9 - 2 = 61 categories

    std::vector<cc::ChartSample> standard;
    int sid = 0;
    for (int combo = 0; combo < 7; ++combo)
        for (int k = 0; k < 20; ++k)
            standard.push_back(pool_sample("s" + std::to_string(sid++), "none",
                                           "type" + std::to_string(combo)));

    const auto drawn = cc::sample_mixed_benchmark(misleading, standard, 42);
    CHECK(drawn.size() == 244);

    std::map<std::string, int> per_category;
    std::map<std::string, int> per_combo;
    for (const auto& s : drawn) {
        if (s.misleader != "none")
            ++per_category[s.misleader + "|" + s.chart_type];
        else
            ++per_combo[s.chart_type];
    }
    CHECK(per_category.size() == 61);
    for (const auto& [k, v] : per_category) CHECK(v == 2);
    int standard_total = 0;
    for (const auto& [k, v] : per_combo) {
        CHECK(v >= 17);
        CHECK(v <= 18);
        standard_total += v;
    }
    CHECK(standard_total == 122);

    const auto again = cc::sample_mixed_benchmark(misleading, standard, 42);
    REQUIRE(again.size() == drawn.size());
    for (std::size_t i = 0; i < drawn.size(); ++i) CHECK(again[i].id == drawn[i].id);

    const auto other_seed = cc::sample_mixed_benchmark(misleading, standard, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < drawn.size(); ++i) any_diff |= (other_seed[i].id != drawn[i].id);
    CHECK(any_diff);
}

TEST_CASE("mixed sampler is invariant to pool order") {
    std::vector<cc::ChartSample> misleading;
    int mid = 0;
    for (int cat = 0; cat < 3; ++cat)
        for (int k = 0; k < 4; ++k)
            misleading.push_back(pool_sample("m" + std::to_string(mid++),
                                             "mis" + std::to_string(cat), "line"));
    std::vector<cc::ChartSample> standard;
    for (int i = 0; i < 12; ++i)
        standard.push_back(pool_sample("s" + std::to_string(i), "none", "bar"));

    const auto a = cc::sample_mixed_benchmark(misleading, standard, 7, 6);
    std::reverse(misleading.begin(), misleading.end());
    std::reverse(standard.begin(), standard.end());
    const auto b = cc::sample_mixed_benchmark(misleading, standard, 7, 6);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == b[i].id);
}

TEST_CASE("mixed sampler names starved categories") {
    std::vector<cc::ChartSample> misleading = {pool_sample("m0", "inverted_axis", "line")};
    std::vector<cc::ChartSample> standard;
    for (int i = 0; i < 4; ++i)
        standard.push_back(pool_sample("s" + std::to_string(i), "none", "bar"));
    CHECK_THROWS_WITH_AS(cc::sample_mixed_benchmark(misleading, standard, 1, 2),
                         doctest::Contains("inverted_axis"), cc::EvalError);

    std::vector<cc::ChartSample> misleading_ok = {
        pool_sample("m0", "inverted_axis", "line"),
        pool_sample("m1", "inverted_axis", "line"),
    };
    CHECK_THROWS_AS(cc::sample_mixed_benchmark(misleading_ok, {}, 1, 2), cc::EvalError);
}
