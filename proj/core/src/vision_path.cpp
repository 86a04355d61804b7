#include "chartcynics/vision_path.hpp"

#include <algorithm>

#include "chartcynics/dataset.hpp"
#include "chartcynics/image.hpp"
#include "chartcynics/summarizer.hpp"
#include "chartcynics/text.hpp"

namespace chartcynics {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strips "-", "*", "3." or "3)" style bullets.
std::string strip_bullet(const std::string& line) {
    std::string t = trim(line);
    if (!t.empty() && (t[0] == '-' || t[0] == '*')) return trim(t.substr(1));
    std::size_t i = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i > 0 && i < t.size() && (t[i] == '.' || t[i] == ')')) return trim(t.substr(i + 1));
    return t;
}

std::vector<std::string> bullet_items(const std::string& body) {
    std::vector<std::string> items;
    std::string line;
    auto flush = [&] {
        const std::string item = strip_bullet(line);
        if (!item.empty()) items.push_back(item);
        line.clear();
    };
    for (char c : body) {
        if (c == '\n')
            flush();
        else
            line.push_back(c);
    }
    flush();
    return items;
}

struct HeaderSpan {
    std::size_t start = std::string::npos;  // header begin
    std::size_t body = std::string::npos;   // first char after the header
};

HeaderSpan find_header(const std::string& lower, std::size_t from,
                       const std::vector<std::string>& variants) {
    HeaderSpan best;
    for (const auto& v : variants) {
        const std::size_t p = lower.find(v, from);
        if (p != std::string::npos && p < best.start) best = {p, p + v.size()};
    }
    return best;
}

}  // namespace

std::vector<std::string> DiagnosticReport::validate(const Taxonomy& taxonomy) const {
    std::vector<std::string> problems;
    bool real_anomaly = false;
    for (const auto& a : anomalies) {
        if (a == "unknown") continue;
        if (taxonomy.find(a) == nullptr)
            problems.push_back("anomaly '" + a + "' is not a taxonomy id");
        real_anomaly = true;
    }
    if (real_anomaly && action_directives.empty())
        problems.push_back("anomalies present but no action directives");
    return problems;
}

std::string taxonomy_summary(const Taxonomy& taxonomy) {
    std::string out;
    for (const auto& c : taxonomy.categories) {
        out += "- " + c.name + " (" + c.id + "): " + c.description + "\n";
    }
    if (!out.empty()) out.pop_back();
    return out;
}

std::string format_options(const std::vector<Option>& options) {
    std::string out;
    for (const auto& o : options) {
        out += o.label + ". " + o.text + "\n";
    }
    if (!out.empty()) out.pop_back();
    return out;
}

std::string build_diagnostic_prompt(const std::vector<RoiKind>& crops, const Taxonomy& taxonomy,
                                    const PromptTemplate& tmpl) {
    std::string images = "1. the full chart image";
    int idx = 2;
    for (RoiKind kind : crops) {
        images += "\n" + std::to_string(idx) + ". the " + roi_kind_name(kind) + " crop";
        ++idx;
    }
    if (crops.empty()) images += "\n(no cropped regions are available for this chart)";
    return render_template(tmpl.text,
                           {{"images", images}, {"taxonomy", taxonomy_summary(taxonomy)}});
}

DiagnosticReport parse_diagnostic_report(const std::string& text, const Taxonomy& taxonomy,
                                         bool strict) {
    DiagnosticReport report;
    report.raw_text = text;

    const std::string lower = to_lower(text);
    const HeaderSpan diag = find_header(lower, 0, {"diagnosis:"});
    const HeaderSpan directive =
        find_header(lower, 0, {"action directives:", "action directive:"});

    if (diag.start == std::string::npos && directive.start == std::string::npos) {
        if (strict)
            throw StageError("diagnostic",
                             "report has neither a DIAGNOSIS nor an ACTION DIRECTIVE header");
        report.anomalies = {"unknown"};
        return report;
    }

    if (diag.start != std::string::npos) {
        const std::size_t end = (directive.start != std::string::npos && directive.start > diag.start)
                                    ? directive.start
                                    : text.size();
        report.diagnosis = bullet_items(text.substr(diag.body, end - diag.body));
    }
    if (directive.start != std::string::npos) {
        const std::size_t end = (diag.start != std::string::npos && diag.start > directive.start)
                                    ? diag.start
                                    : text.size();
        report.action_directives =
            bullet_items(text.substr(directive.body, end - directive.body));
    }

    for (const auto& item : report.diagnosis) {
        for (RoiKind kind :
             {RoiKind::Title, RoiKind::Legend, RoiKind::XAxis, RoiKind::YAxis}) {
            const std::string prefix = roi_kind_name(kind) + ":";
            const std::string lowered = to_lower(item);
            if (lowered.rfind(prefix, 0) == 0 && report.roi_notes.count(kind) == 0)
                report.roi_notes[kind] = trim(item.substr(prefix.size()));
        }
    }

    report.anomalies = taxonomy.match(text);
    return report;
}

std::string build_reasoning_prompt(const std::string& question,
                                   const std::vector<Option>& options,
                                   const DiagnosticReport& report, const PromptTemplate& tmpl,
                                   const std::string& abstain_phrase) {
    std::string directives;
    if (report.action_directives.empty()) {
        directives = "No structural anomalies were reported.";
    } else {
        for (const auto& d : report.action_directives) directives += "- " + d + "\n";
        directives.pop_back();
    }
    return render_template(tmpl.text, {{"directives", directives},
                                       {"question", question},
                                       {"options", format_options(options)},
                                       {"abstain", abstain_phrase}});
}

VisionPathOutcome run_vision_path(Backend& backend, const ChartSample& sample,
                                  const PipelineConfig& config, const Taxonomy& taxonomy,
                                  const TemplateSet& templates) {
    Image full;
    std::vector<std::uint8_t> full_png;
    try {
        full = decode_png(sample.image_path);
        full_png = encode_png(full);
    } catch (const ImageError& e) {
        throw StageError("diagnostic", e.what());
    }

    std::map<RoiKind, CropRegion> rois;
    if (!sample.detections_path.empty()) {
        try {
            const auto detections = load_detections(sample.detections_path);
            rois = extract_rois(detections, full.width, full.height, config.roi_padding);
        } catch (const std::exception& e) {
            throw StageError("diagnostic", e.what());
        }
    }

    std::vector<RoiKind> kinds;
    std::vector<std::vector<std::uint8_t>> images{full_png};
    for (const auto& [kind, region] : rois) {
        if (static_cast<int>(kinds.size()) >= config.max_rois) break;
        kinds.push_back(kind);
        images.push_back(encode_png(crop(full, region.rect)));
    }

    const std::string diagnostic_prompt =
        build_diagnostic_prompt(kinds, taxonomy, templates.diagnostic);
    std::string diagnostic_text;
    try {
        diagnostic_text =
            backend.complete({"diagnostic", sample.id, diagnostic_prompt, images});
    } catch (const BackendError& e) {
        throw StageError("diagnostic", e.what());
    }

    VisionPathOutcome outcome;
    outcome.report = parse_diagnostic_report(diagnostic_text, taxonomy);

    const std::string reasoning_prompt =
        build_reasoning_prompt(sample.question, sample.options, outcome.report,
                               templates.reasoning, config.abstain_phrase);
    try {
        outcome.reasoning_text =
            backend.complete({"reasoning", sample.id, reasoning_prompt, {full_png}});
    } catch (const BackendError& e) {
        throw StageError("reasoning", e.what());
    }

    const ExtractedAnswer ans =
        extract_answer_text(outcome.reasoning_text, sample.options, config.abstain_phrase);
    outcome.answer = ans.label;
    outcome.abstain = ans.abstain;
    return outcome;
}

}  // namespace chartcynics
