#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartcynics/summarizer.hpp"
#include "chartcynics/types.hpp"

namespace chartcynics {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Outcome { Correct, WrongMisled, WrongOther };

std::string outcome_name(Outcome o);

// answer == ground truth -> Correct; answer == trap -> WrongMisled;
// everything else, abstentions included, -> WrongOther.
Outcome classify_outcome(const ExtractedAnswer& answer, const std::string& ground_truth,
                         const std::string& trap);

struct PerSampleOutcome {
    std::string id;
    std::string answer;  // option label or "Abstain"
    Outcome outcome = Outcome::WrongOther;
};

struct EvalCounts {
    int correct = 0;
    int wrong_misled = 0;
    int wrong_other = 0;
    int total = 0;
};

struct EvalPercentages {
    double acc = 0.0;
    double wm = 0.0;
    double wo = 0.0;
};

struct EvalResult {
    std::vector<PerSampleOutcome> per_sample;
    EvalCounts counts;
    EvalPercentages percentages;
};

// Half-up to 2 decimals, the table precision used throughout.
double round2(double value);

EvalResult aggregate(const std::vector<PerSampleOutcome>& outcomes);

nlohmann::json eval_result_to_json(const EvalResult& result);

// Two seeded picks per (misleader, chart_type) category on the misleading
// side; round-robin over chart_type combos on the standard side; both sides
// filled to per_side then shuffled together. Output depends only on sample
// content and the seed, not on pool order.
std::vector<ChartSample> sample_mixed_benchmark(const std::vector<ChartSample>& misleading_pool,
                                                const std::vector<ChartSample>& standard_pool,
                                                std::uint64_t seed, int per_side = 122);

enum class ReportFormat { Markdown, Csv };

// One row per configuration, sorted by name, columns Acc / WM / WO.
std::string render_report(const std::map<std::string, EvalResult>& results, ReportFormat format);

}  // namespace chartcynics
