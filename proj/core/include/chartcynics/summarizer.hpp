#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartcynics/backend.hpp"
#include "chartcynics/data_path.hpp"
#include "chartcynics/prompts.hpp"
#include "chartcynics/types.hpp"
#include "chartcynics/vision_path.hpp"

namespace chartcynics {

// Canonical five-step order.
const std::array<std::string, 5>& dcot_step_names();

// (canonical index 1..5, first occurrence position), ordered by position.
// "Sufficiency & Integrity Check" also matches with "and" for "&".
std::vector<std::pair<int, std::size_t>> detect_dcot_steps(const std::string& text);

struct DcotStep {
    int index = 0;  // 1..5
    std::string title;
    std::string body;
};

struct ReasoningTrace {
    std::string visual_heuristic;
    std::string ocr_validation;
    std::string ambiguity_resolution;
    std::string final_answer_segment;
    std::vector<DcotStep> dcot_steps;
    std::string answer;  // option label; empty when abstained
    bool abstain = true;
    std::string raw_text;
};

struct ExtractedAnswer {
    std::string label;
    bool abstain = true;
};

// Lenient: missing tags leave their fields empty and never block scoring.
ReasoningTrace parse_trace(const std::string& text);

// Canonical form; render(parse(t)) re-parses to the same field contents.
std::string render_trace(const ReasoningTrace& trace);

// Shared search order: abstention phrase, then "Final Answer: <L>", then a
// standalone uppercase label, then exact option-text occurrence. Zero or two
// or more distinct candidates at the deciding step mean Abstain.
ExtractedAnswer extract_answer_text(const std::string& segment,
                                    const std::vector<Option>& options,
                                    const std::string& abstain_phrase);

ExtractedAnswer extract_answer(const ReasoningTrace& trace, const std::vector<Option>& options,
                               const std::string& abstain_phrase = "Cannot be Inferred");

std::string build_fusion_prompt(const ChartSample& sample, const DiagnosticReport& report,
                                const OcrDocument& doc, const Taxonomy& taxonomy,
                                const PromptTemplate& tmpl, const std::string& abstain_phrase);

struct StageFailure {
    std::string stage;
    std::string message;
};

struct PipelineResult {
    std::string sample_id;
    DiagnosticReport report;
    OcrDocument doc;
    ReasoningTrace trace;
    std::string answer;  // option label; empty when abstained
    bool abstain = true;
    std::string vision_answer;  // the reasoning agent's intermediate answer
    bool vision_abstain = true;
    std::vector<StageFailure> errors;
    std::map<std::string, double> timings_ms;
    std::string diagnostic_template;
    std::string reasoning_template;
    std::string fusion_template;
};

// Stable key order; timings are excluded unless include_timings so golden
// outputs stay byte-identical.
nlohmann::json pipeline_result_to_json(const PipelineResult& result, bool include_timings);

// Vision path, data path, then fusion. A failed stage is recorded and later
// independent stages still run; fusion needs at least one path's output.
PipelineResult run_pipeline(Backend& backend, const ChartSample& sample,
                            const PipelineConfig& config, const Taxonomy& taxonomy,
                            const TemplateSet& templates);

}  // namespace chartcynics
