#include "chartcynics/reward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chartcynics/numeric.hpp"
#include "chartcynics/text.hpp"

namespace chartcynics {

using nlohmann::json;

namespace {

std::vector<double> fractional_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (double(i + 1) + double(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= double(n);
    mean_b /= double(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return 0.0;
    return cov / std::sqrt(var_a * var_b);
}

// Relative distance used for nearest-value alignment.
double relative_distance(double token, double target) {
    const double scale = std::max(std::abs(target), 1e-9);
    return std::abs(token - target) / scale;
}

}  // namespace

std::vector<std::pair<std::string, double>> extract_numeric_tokens(const std::string& text) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& token : scan_numbers(text)) out.emplace_back(token.raw, token.value);
    return out;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw RewardError("spearman: length mismatch (" + std::to_string(xs.size()) + " vs " +
                          std::to_string(ys.size()) + ")");
    if (xs.size() < 2) throw RewardError("spearman: need at least 2 points");
    return pearson(fractional_ranks(xs), fractional_ranks(ys));
}

double reward_fact(const ReasoningTrace& trace, const std::vector<OracleRow>& oracle) {
    if (oracle.empty()) return 0.0;
    const auto tokens = scan_numbers(trace.ocr_validation);
    if (tokens.size() < 2) return 0.0;

    const auto sentences = split_sentences(trace.ocr_validation);

    struct SentenceTokens {
        std::string text;
        std::vector<std::size_t> token_ids;
    };
    std::vector<SentenceTokens> sentence_tokens;
    for (const auto& sentence : sentences) {
        SentenceTokens st;
        st.text = sentence;
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            if (sentence.find(tokens[t].raw) != std::string::npos) st.token_ids.push_back(t);
        }
        sentence_tokens.push_back(std::move(st));
    }

    std::vector<double> trace_values, oracle_values;
    std::vector<bool> used(tokens.size(), false);
    bool any_category_seen = false;

    for (const auto& row : oracle) {
        if (row.category.empty()) continue;

        // numbers that are part of the category label itself never count as
        // its value (e.g. the year inside "2005")
        std::vector<double> label_numbers;
        for (const auto& t : scan_numbers(row.category)) label_numbers.push_back(t.value);

        std::size_t best_token = tokens.size();
        double best_distance = 0.0;
        for (const auto& st : sentence_tokens) {
            if (!contains_word(st.text, row.category)) continue;
            any_category_seen = true;
            for (std::size_t t : st.token_ids) {
                if (used[t]) continue;
                if (std::find(label_numbers.begin(), label_numbers.end(), tokens[t].value) !=
                    label_numbers.end())
                    continue;
                const double d = relative_distance(tokens[t].value, row.value);
                if (best_token == tokens.size() || d < best_distance) {
                    best_token = t;
                    best_distance = d;
                }
            }
        }
        if (best_token < tokens.size()) {
            used[best_token] = true;
            trace_values.push_back(tokens[best_token].value);
            oracle_values.push_back(row.value);
        }
    }

    if (!any_category_seen) {
        trace_values.clear();
        oracle_values.clear();
        const std::size_t k = std::min(tokens.size(), oracle.size());
        for (std::size_t i = 0; i < k; ++i) {
            trace_values.push_back(tokens[i].value);
            oracle_values.push_back(oracle[i].value);
        }
    }

    if (trace_values.size() < 2) return 0.0;
    return std::max(0.0, spearman(trace_values, oracle_values));
}

double reward_contra(const ReasoningTrace& trace, const std::string& category_id,
                     const std::string& explanation, const Taxonomy& taxonomy,
                     double overlap_threshold) {
    const TaxonomyCategory* category = taxonomy.find(category_id);
    if (category == nullptr)
        throw RewardError("unknown category '" + category_id + "'");

    const std::string search_space = trace.ambiguity_resolution + "\n" + trace.ocr_validation;
    std::size_t hits = 0;
    for (const auto& kw : category->keywords) {
        if (contains_word(search_space, kw)) ++hits;
    }
    const double hit = category->keywords.empty()
                           ? 0.0
                           : double(hits) / double(category->keywords.size());

    double overlap = 1.0;
    if (!explanation.empty()) {
        const auto expl_tokens = content_token_set(explanation);
        if (!expl_tokens.empty()) {
            const auto trace_tokens = content_token_set(trace.ambiguity_resolution);
            std::size_t common = 0;
            for (const auto& t : expl_tokens) common += trace_tokens.count(t);
            overlap = double(common) / double(expl_tokens.size());
        }
    }

    if (overlap >= overlap_threshold) return hit;
    return hit * (overlap / overlap_threshold);
}

double reward_logic(const ReasoningTrace& trace) {
    const std::string reasoning = trace.visual_heuristic + "\n" + trace.ocr_validation + "\n" +
                                  trace.ambiguity_resolution;
    const auto steps = detect_dcot_steps(reasoning);
    if (steps.empty()) return 0.0;
    bool ordered = true;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i].first < steps[i - 1].first) ordered = false;
    }
    const double s = double(steps.size()) / 5.0;
    return ordered ? s : s * 0.5;
}

double reward_fmt(const std::string& raw_text) {
    static const char* tags[4] = {"Visual_Heuristic", "OCR_Validation", "Ambiguity_Resolution",
                                  "Final_Answer"};
    std::vector<std::size_t> positions;
    for (const char* tag : tags) {
        for (const std::string token : {"<" + std::string(tag) + ">", "</" + std::string(tag) + ">"}) {
            std::size_t first = raw_text.find(token);
            if (first == std::string::npos) return 0.0;
            if (raw_text.find(token, first + token.size()) != std::string::npos) return 0.0;
            positions.push_back(first);
        }
    }
    for (std::size_t i = 1; i < positions.size(); ++i) {
        if (positions[i] <= positions[i - 1]) return 0.0;
    }
    return 1.0;
}

double shaping_reward(const ExtractedAnswer& answer, const std::string& ground_truth,
                      const std::string& trap, const ShapingPolicy& policy) {
    if (answer.abstain) return policy.abstain;
    if (answer.label == ground_truth) return policy.correct;
    if (!trap.empty() && answer.label == trap) return policy.trap;
    return policy.other;
}

RewardBreakdown total_reward(const ReasoningTrace& trace, const ChartSample& sample,
                             const PipelineConfig& config, const Taxonomy& taxonomy) {
    RewardBreakdown b;
    b.weights = config.weights;

    b.r_fact = reward_fact(trace, sample.oracle_table);
    b.diagnostics["fact"] = sample.oracle_table.empty()
                                ? "no oracle"
                                : "spearman over aligned trace/oracle values";

    b.r_contra = reward_contra(trace, sample.misleader, sample.explanation, taxonomy,
                               config.overlap_threshold);
    b.diagnostics["contra"] =
        "keyword hits for '" + sample.misleader + "' with explanation overlap gate";

    b.r_logic = reward_logic(trace);
    {
        const auto steps = detect_dcot_steps(trace.visual_heuristic + "\n" +
                                             trace.ocr_validation + "\n" +
                                             trace.ambiguity_resolution);
        b.diagnostics["logic"] = std::to_string(steps.size()) + "/5 steps detected";
    }

    b.r_fmt = reward_fmt(trace.raw_text);
    b.diagnostics["fmt"] = b.r_fmt == 1.0 ? "canonical tag structure" : "tag structure violated";

    std::vector<Option> options = sample.options;
    if (options.empty()) {
        for (char label = 'A'; label <= 'F'; ++label) options.push_back({std::string(1, label), ""});
    }
    const ExtractedAnswer answer =
        extract_answer_text(trace.final_answer_segment, options, config.abstain_phrase);
    b.shaping = shaping_reward(answer, sample.ground_truth, sample.trap, config.shaping);
    b.diagnostics["shaping"] =
        answer.abstain ? "abstained" : ("answered '" + answer.label + "'");

    b.total = b.weights.fact * b.r_fact + b.weights.contra * b.r_contra +
              b.weights.logic * b.r_logic + b.weights.fmt * b.r_fmt + b.shaping;
    return b;
}

json reward_to_json(const RewardBreakdown& b) {
    return json{{"r_fact", b.r_fact},
                {"r_contra", b.r_contra},
                {"r_logic", b.r_logic},
                {"r_fmt", b.r_fmt},
                {"shaping", b.shaping},
                {"total", b.total},
                {"weights",
                 {{"fact", b.weights.fact},
                  {"contra", b.weights.contra},
                  {"logic", b.weights.logic},
                  {"fmt", b.weights.fmt}}},
                {"diagnostics", b.diagnostics}};
}

std::vector<double> group_advantage(const std::vector<double>& totals, int group_size) {
    if (group_size < 2) throw RewardError("group_advantage: group_size must be >= 2");
    if (totals.size() != std::size_t(group_size))
        throw RewardError("group_advantage: expected " + std::to_string(group_size) +
                          " totals, got " + std::to_string(totals.size()));
    double mean = 0.0;
    for (double r : totals) mean += r;
    mean /= double(totals.size());
    double var = 0.0;
    for (double r : totals) var += (r - mean) * (r - mean);
    var /= double(totals.size());
    const double std_dev = std::sqrt(var);
    std::vector<double> out(totals.size(), 0.0);
    if (std_dev == 0.0) return out;
    for (std::size_t i = 0; i < totals.size(); ++i) out[i] = (totals[i] - mean) / std_dev;
    return out;
}

}  // namespace chartcynics
