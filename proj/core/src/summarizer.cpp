#include "chartcynics/summarizer.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "chartcynics/image.hpp"
#include "chartcynics/text.hpp"

namespace chartcynics {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string tag_body(const std::string& text, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    const auto o = text.find(open);
    if (o == std::string::npos) return "";
    const auto c = text.find(close, o + open.size());
    if (c == std::string::npos) return "";
    return trim(text.substr(o + open.size(), c - (o + open.size())));
}

// Case-insensitive find.
std::size_t ifind(const std::string& haystack_lower, const std::string& needle_lower,
                  std::size_t from = 0) {
    return haystack_lower.find(needle_lower, from);
}

std::vector<std::string> answer_header_candidates(const std::string& segment,
                                                  const std::vector<Option>& options) {
    std::vector<std::string> out;
    const std::string lower = to_lower(segment);
    const std::string marker = "final answer";
    std::size_t pos = 0;
    while ((pos = ifind(lower, marker, pos)) != std::string::npos) {
        std::size_t i = pos + marker.size();
        while (i < segment.size() &&
               (segment[i] == ' ' || segment[i] == '\t' || segment[i] == ':' ||
                segment[i] == '-' || segment[i] == '*'))
            ++i;
        if (i < segment.size()) {
            const char c = segment[i];
            const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            const bool standalone = (i + 1 >= segment.size()) || !is_alnum(segment[i + 1]);
            if (standalone) {
                const std::string label(1, upper);
                for (const auto& o : options) {
                    if (o.label == label) {
                        out.push_back(label);
                        break;
                    }
                }
            }
        }
        pos += marker.size();
    }
    return out;
}

std::vector<std::string> standalone_letter_candidates(const std::string& segment,
                                                      const std::vector<Option>& options) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < segment.size(); ++i) {
        const char c = segment[i];
        if (c < 'A' || c > 'F') continue;
        const bool left_ok = i == 0 || !is_alnum(segment[i - 1]);
        const bool right_ok = i + 1 >= segment.size() || !is_alnum(segment[i + 1]);
        if (!left_ok || !right_ok) continue;
        const std::string label(1, c);
        for (const auto& o : options) {
            if (o.label == label) {
                out.push_back(label);
                break;
            }
        }
    }
    return out;
}

// Empty when the distinct candidate count is not exactly one.
std::string unique_candidate(const std::vector<std::string>& candidates) {
    std::string found;
    for (const auto& c : candidates) {
        if (found.empty())
            found = c;
        else if (found != c)
            return "";
    }
    return found;
}

std::string render_report_block(const DiagnosticReport& report) {
    if (report.diagnosis.empty() && report.action_directives.empty()) {
        return report.raw_text.empty() ? "(no structural findings available)"
                                       : trim(report.raw_text);
    }
    std::string out = "DIAGNOSIS:\n";
    for (const auto& d : report.diagnosis) out += "- " + d + "\n";
    if (report.diagnosis.empty()) out += "- (none)\n";
    out += "ACTION DIRECTIVE:\n";
    for (const auto& d : report.action_directives) out += "- " + d + "\n";
    if (report.action_directives.empty()) out += "- (none)\n";
    if (!report.anomalies.empty()) {
        out += "Detected anomaly categories: ";
        for (std::size_t i = 0; i < report.anomalies.size(); ++i) {
            if (i) out += ", ";
            out += report.anomalies[i];
        }
        out += "\n";
    }
    out.pop_back();
    return out;
}

struct StageTimer {
    std::map<std::string, double>& sink;
    std::string stage;
    std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
    ~StageTimer() {
        const auto end = std::chrono::steady_clock::now();
        sink[stage] = std::chrono::duration<double, std::milli>(end - begin).count();
    }
};

json report_to_json(const DiagnosticReport& report) {
    json roi_notes = json::object();
    for (const auto& [kind, note] : report.roi_notes) roi_notes[roi_kind_name(kind)] = note;
    return json{{"diagnosis", report.diagnosis},
                {"action_directives", report.action_directives},
                {"anomalies", report.anomalies},
                {"roi_notes", std::move(roi_notes)},
                {"raw_text", report.raw_text}};
}

json doc_to_json(const OcrDocument& doc) {
    json tables = json::array();
    for (const auto& t : doc.tables)
        tables.push_back({{"headers", t.headers}, {"rows", t.rows}});
    json entities = json::array();
    for (const auto& e : doc.entities)
        entities.push_back({{"raw_token", e.raw_token},
                            {"value", e.value},
                            {"row", e.row},
                            {"col", e.col},
                            {"category", e.category},
                            {"series", e.series}});
    json flags = json::array();
    for (IntegrityFlag f : {IntegrityFlag::ReversedOrder, IntegrityFlag::ShuffledOrder,
                            IntegrityFlag::IncompletePeriod, IntegrityFlag::ExceedsCanvas}) {
        if (doc.integrity_flags.count(f)) flags.push_back(integrity_flag_name(f));
    }
    return json{{"source_markdown", doc.source_markdown},
                {"tables", std::move(tables)},
                {"entities", std::move(entities)},
                {"trust", trust_name(doc.trust)},
                {"integrity_flags", std::move(flags)},
                {"directives", doc.directives}};
}

json trace_to_json(const ReasoningTrace& trace) {
    json steps = json::array();
    for (const auto& s : trace.dcot_steps)
        steps.push_back({{"index", s.index}, {"title", s.title}, {"body", s.body}});
    return json{{"visual_heuristic", trace.visual_heuristic},
                {"ocr_validation", trace.ocr_validation},
                {"ambiguity_resolution", trace.ambiguity_resolution},
                {"final_answer_segment", trace.final_answer_segment},
                {"dcot_steps", std::move(steps)},
                {"answer", trace.answer},
                {"abstain", trace.abstain}};
}

}  // namespace

const std::array<std::string, 5>& dcot_step_names() {
    static const std::array<std::string, 5> names = {
        "Perception Audit", "Numerical Anchoring", "Deception Mapping",
        "Sufficiency & Integrity Check", "Adversarial Trap Rejection"};
    return names;
}

std::vector<std::pair<int, std::size_t>> detect_dcot_steps(const std::string& text) {
    const std::string lower = to_lower(text);
    std::vector<std::pair<int, std::size_t>> found;
    for (int i = 0; i < 5; ++i) {
        const std::string name = to_lower(dcot_step_names()[std::size_t(i)]);
        std::size_t pos = lower.find(name);
        if (pos == std::string::npos && name.find('&') != std::string::npos) {
            std::string alt = name;
            alt.replace(alt.find('&'), 1, "and");
            pos = lower.find(alt);
        }
        if (pos != std::string::npos) found.emplace_back(i + 1, pos);
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return found;
}

ReasoningTrace parse_trace(const std::string& text) {
    ReasoningTrace trace;
    trace.raw_text = text;
    trace.visual_heuristic = tag_body(text, "Visual_Heuristic");
    trace.ocr_validation = tag_body(text, "OCR_Validation");
    trace.ambiguity_resolution = tag_body(text, "Ambiguity_Resolution");
    trace.final_answer_segment = tag_body(text, "Final_Answer");

    const std::string reasoning = trace.visual_heuristic + "\n" + trace.ocr_validation + "\n" +
                                  trace.ambiguity_resolution;
    const auto steps = detect_dcot_steps(reasoning);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto [index, pos] = steps[i];
        const std::size_t name_len = dcot_step_names()[std::size_t(index - 1)].size();
        const std::size_t body_begin = pos + name_len;
        const std::size_t body_end = i + 1 < steps.size() ? steps[i + 1].second : reasoning.size();
        DcotStep step;
        step.index = index;
        step.title = dcot_step_names()[std::size_t(index - 1)];
        if (body_end > body_begin) {
            std::string body = reasoning.substr(body_begin, body_end - body_begin);
            if (!body.empty() && (body[0] == ':' || body[0] == '.')) body.erase(body.begin());
            step.body = trim(body);
        }
        trace.dcot_steps.push_back(std::move(step));
    }
    return trace;
}

std::string render_trace(const ReasoningTrace& trace) {
    std::string out;
    auto emit = [&](const char* tag, const std::string& body) {
        out += "<";
        out += tag;
        out += ">\n";
        if (!body.empty()) {
            out += body;
            out += "\n";
        }
        out += "</";
        out += tag;
        out += ">\n";
    };
    emit("Visual_Heuristic", trace.visual_heuristic);
    emit("OCR_Validation", trace.ocr_validation);
    emit("Ambiguity_Resolution", trace.ambiguity_resolution);
    emit("Final_Answer", trace.final_answer_segment);
    return out;
}

ExtractedAnswer extract_answer_text(const std::string& segment,
                                    const std::vector<Option>& options,
                                    const std::string& abstain_phrase) {
    if (!abstain_phrase.empty() && contains_word(segment, abstain_phrase)) return {"", true};

    if (const auto c1 = answer_header_candidates(segment, options); !c1.empty()) {
        const std::string label = unique_candidate(c1);
        return label.empty() ? ExtractedAnswer{"", true} : ExtractedAnswer{label, false};
    }
    if (const auto c2 = standalone_letter_candidates(segment, options); !c2.empty()) {
        const std::string label = unique_candidate(c2);
        return label.empty() ? ExtractedAnswer{"", true} : ExtractedAnswer{label, false};
    }
    std::vector<std::string> c3;
    for (const auto& o : options) {
        if (!o.text.empty() && contains_word(segment, o.text)) c3.push_back(o.label);
    }
    if (!c3.empty()) {
        const std::string label = unique_candidate(c3);
        return label.empty() ? ExtractedAnswer{"", true} : ExtractedAnswer{label, false};
    }
    return {"", true};
}

ExtractedAnswer extract_answer(const ReasoningTrace& trace, const std::vector<Option>& options,
                               const std::string& abstain_phrase) {
    return extract_answer_text(trace.final_answer_segment, options, abstain_phrase);
}

std::string build_fusion_prompt(const ChartSample& sample, const DiagnosticReport& report,
                                const OcrDocument& doc, const Taxonomy& taxonomy,
                                const PromptTemplate& tmpl, const std::string& abstain_phrase) {
    std::string directives;
    if (doc.directives.empty()) {
        directives = "(none)";
    } else {
        for (const auto& d : doc.directives) directives += "- " + d + "\n";
        directives.pop_back();
    }
    const std::string ocr =
        doc.source_markdown.empty() ? "(no extracted data available)" : doc.source_markdown;
    return render_template(tmpl.text, {{"taxonomy", taxonomy_summary(taxonomy)},
                                       {"report", render_report_block(report)},
                                       {"trust", trust_name(doc.trust)},
                                       {"ocr", ocr},
                                       {"directives", directives},
                                       {"question", sample.question},
                                       {"options", format_options(sample.options)},
                                       {"abstain", abstain_phrase}});
}

json pipeline_result_to_json(const PipelineResult& result, bool include_timings) {
    json errors = json::array();
    for (const auto& e : result.errors)
        errors.push_back({{"stage", e.stage}, {"message", e.message}});
    json j{{"sample_id", result.sample_id},
           {"answer", result.answer},
           {"abstain", result.abstain},
           {"vision_answer", result.vision_answer},
           {"vision_abstain", result.vision_abstain},
           {"report", report_to_json(result.report)},
           {"doc", doc_to_json(result.doc)},
           {"trace", trace_to_json(result.trace)},
           {"errors", std::move(errors)},
           {"templates",
            {{"diagnostic", result.diagnostic_template},
             {"reasoning", result.reasoning_template},
             {"fusion", result.fusion_template}}}};
    if (include_timings) j["timings_ms"] = result.timings_ms;
    return j;
}

PipelineResult run_pipeline(Backend& backend, const ChartSample& sample,
                            const PipelineConfig& config, const Taxonomy& taxonomy,
                            const TemplateSet& templates) {
    PipelineResult result;
    result.sample_id = sample.id;
    result.diagnostic_template = templates.diagnostic.id;
    result.reasoning_template = templates.reasoning.id;
    result.fusion_template = templates.fusion.id;

    bool vision_ok = false;
    {
        StageTimer timer{result.timings_ms, "vision_path"};
        try {
            VisionPathOutcome outcome =
                run_vision_path(backend, sample, config, taxonomy, templates);
            result.report = std::move(outcome.report);
            result.vision_answer = outcome.answer;
            result.vision_abstain = outcome.abstain;
            vision_ok = true;
        } catch (const StageError& e) {
            result.errors.push_back({e.stage, e.what()});
        }
    }

    {
        StageTimer timer{result.timings_ms, "data_path"};
        try {
            std::vector<std::uint8_t> png;
            if (sample.ocr_markdown.empty() && !sample.image_path.empty()) {
                try {
                    png = encode_png(decode_png(sample.image_path));
                } catch (const ImageError&) {
                    // the OCR backend simply gets no pixels; scripted OCR ignores them
                }
            }
            result.doc = run_data_path(backend, sample, png,
                                       vision_ok ? &result.report : nullptr);
        } catch (const StageError& e) {
            result.errors.push_back({e.stage, e.what()});
        }
    }

    const bool data_has_evidence = !result.doc.source_markdown.empty() ||
                                   !result.doc.tables.empty() || !result.doc.entities.empty();
    if (!vision_ok && !data_has_evidence) {
        result.errors.push_back({"fusion", "no evidence"});
        return result;
    }

    {
        StageTimer timer{result.timings_ms, "fusion"};
        try {
            const std::string prompt = build_fusion_prompt(
                sample, result.report, result.doc, taxonomy, templates.fusion,
                config.abstain_phrase);
            const std::string text =
                backend.complete({"fusion", sample.id, prompt, {}});
            result.trace = parse_trace(text);
            const ExtractedAnswer ans =
                extract_answer(result.trace, sample.options, config.abstain_phrase);
            result.trace.answer = ans.label;
            result.trace.abstain = ans.abstain;
            result.answer = ans.label;
            result.abstain = ans.abstain;
        } catch (const BackendError& e) {
            result.errors.push_back({"fusion", e.what()});
        }
    }
    return result;
}

}  // namespace chartcynics
