#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartcynics/summarizer.hpp"
#include "chartcynics/types.hpp"

namespace chartcynics {

struct RewardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RewardBreakdown {
    double r_fact = 0.0;
    double r_contra = 0.0;
    double r_logic = 0.0;
    double r_fmt = 0.0;
    double shaping = 0.0;
    double total = 0.0;
    RewardWeights weights;
    std::map<std::string, std::string> diagnostics;
};

std::vector<std::pair<std::string, double>> extract_numeric_tokens(const std::string& text);

// Average ranks for ties, then Pearson over the rank vectors; a constant rank
// vector yields 0.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Aligns numbers in the <OCR_Validation> body to oracle values by sentence
// co-occurrence with the category string (nearest in relative terms, each
// token used once, numbers embedded in the category label excluded), falling
// back to positional pairing when no category string appears. With fewer than
// two aligned pairs the reward is 0, otherwise max(0, spearman).
double reward_fact(const ReasoningTrace& trace, const std::vector<OracleRow>& oracle);

// hit = matched keyword fraction over ambiguity_resolution + ocr_validation;
// overlap = content-token overlap of ambiguity_resolution with the expert
// explanation (1.0 when no explanation); full credit above the threshold,
// linear scaling below.
double reward_contra(const ReasoningTrace& trace, const std::string& category_id,
                     const std::string& explanation, const Taxonomy& taxonomy,
                     double overlap_threshold);

// Five-step completeness s/5, halved when the detected steps are out of
// canonical order.
double reward_logic(const ReasoningTrace& trace);

// 1 iff all four tags open and close exactly once, in canonical order.
double reward_fmt(const std::string& raw_text);

double shaping_reward(const ExtractedAnswer& answer, const std::string& ground_truth,
                      const std::string& trap, const ShapingPolicy& policy);

// All components plus shaping. The sample's misleader must be a taxonomy
// category; unknown categories propagate as RewardError.
RewardBreakdown total_reward(const ReasoningTrace& trace, const ChartSample& sample,
                             const PipelineConfig& config, const Taxonomy& taxonomy);

nlohmann::json reward_to_json(const RewardBreakdown& breakdown);

// (r_i - mean) / population std; a zero-spread group maps to all zeros.
std::vector<double> group_advantage(const std::vector<double>& totals, int group_size);

}  // namespace chartcynics
