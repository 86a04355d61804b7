#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chartcynics/backend.hpp"
#include "chartcynics/prompts.hpp"
#include "chartcynics/roi.hpp"
#include "chartcynics/types.hpp"

namespace chartcynics {

// Stage-attributed pipeline failure ("diagnostic", "reasoning", "ocr", "fusion").
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string stage_name, const std::string& msg)
        : std::runtime_error("stage " + stage_name + ": " + msg), stage(std::move(stage_name)) {}
};

struct DiagnosticReport {
    std::vector<std::string> diagnosis;
    std::vector<std::string> action_directives;
    std::vector<std::string> anomalies;  // taxonomy ids, may contain "unknown"
    std::map<RoiKind, std::string> roi_notes;
    std::string raw_text;

    std::vector<std::string> validate(const Taxonomy& taxonomy) const;
};

// One "- Name (id): description" line per category.
std::string taxonomy_summary(const Taxonomy& taxonomy);

std::string format_options(const std::vector<Option>& options);

// The builder never receives the question or options, which enforces the
// blind-test rule by construction. `crops` lists the attached ROI kinds in
// attachment order (after the full image).
std::string build_diagnostic_prompt(const std::vector<RoiKind>& crops, const Taxonomy& taxonomy,
                                    const PromptTemplate& tmpl);

// Lenient mode always returns a report; with neither header present it keeps
// raw_text and marks anomalies ["unknown"]. Strict mode throws instead.
DiagnosticReport parse_diagnostic_report(const std::string& text, const Taxonomy& taxonomy,
                                         bool strict = false);

// Directives are injected ahead of the question so the first reasoning step
// restates them.
std::string build_reasoning_prompt(const std::string& question,
                                   const std::vector<Option>& options,
                                   const DiagnosticReport& report, const PromptTemplate& tmpl,
                                   const std::string& abstain_phrase);

struct VisionPathOutcome {
    DiagnosticReport report;
    std::string answer;  // option label; empty when abstained
    bool abstain = true;
    std::string reasoning_text;
};

VisionPathOutcome run_vision_path(Backend& backend, const ChartSample& sample,
                                  const PipelineConfig& config, const Taxonomy& taxonomy,
                                  const TemplateSet& templates);

}  // namespace chartcynics
