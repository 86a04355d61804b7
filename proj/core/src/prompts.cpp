#include "chartcynics/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace chartcynics {

namespace {

constexpr const char* kDiagnosticV1 =
    R"(You are a chart forensics specialist performing a blind structural inspection.
You will receive the chart image(s) listed here:
{{images}}

You are NOT told what question will be asked about this chart. Inspect the full
image first, then each crop in the order listed, and look for structural
anomalies from this catalogue:
{{taxonomy}}

Report only what you can verify from the pixels: axis directions, baselines,
tick spacing, category order, time coverage, size encodings. Do not estimate
trends and do not answer any data question.

Respond in exactly this format:
DIAGNOSIS:
- <one factual finding per line about the chart's structure>
ACTION DIRECTIVE:
- <one prescriptive instruction per line telling a later reader how to read the values correctly>
)";

constexpr const char* kReasoningV1 =
    R"(You answer a multiple-choice question about the attached chart image. A prior
structural inspection of this chart produced the action directives below. You
must trust them unconditionally, even when they contradict your visual
impression.

Your first reasoning step is mandatory: restate each action directive verbatim
before any other reasoning.

Action directives:
{{directives}}

Apply the directives while reading the chart, then answer.

Question: {{question}}
Options:
{{options}}

Finish with a single line exactly of the form "Final Answer: <letter>". If the
chart cannot support any option, finish with "Final Answer: {{abstain}}".
)";

constexpr const char* kFusionV1 =
    R"(You are the summarizer of a dual-path chart analysis. Combine the structural
inspection (vision path) and the extracted table values (data path) to answer
one multiple-choice question.

Golden Rule I: reported structural anomalies override your visual impression.
Re-interpret any perceived trend under each reported anomaly before using it.
Golden Rule II: extracted values carry the trust tier stated below. Treat
high-trust values as ground truth; treat low-trust values as approximations to
be cross-checked against the directives.

Anomaly catalogue:
{{taxonomy}}

Structural inspection report:
{{report}}

Extracted data (trust: {{trust}}):
{{ocr}}

Calibration directives:
{{directives}}

Question: {{question}}
Options:
{{options}}

Respond using exactly these four XML sections, in this order:
<Visual_Heuristic>...</Visual_Heuristic>
<OCR_Validation>...</OCR_Validation>
<Ambiguity_Resolution>...</Ambiguity_Resolution>
<Final_Answer>...</Final_Answer>

Work through these five steps, in order, by name, inside the first three
sections:
1. Perception Audit
2. Numerical Anchoring
3. Deception Mapping
4. Sufficiency & Integrity Check
5. Adversarial Trap Rejection

Inside <Final_Answer>, if the evidence cannot support any option, write
"{{abstain}}"; otherwise end with a line "Final Answer: <letter>".
)";

PromptTemplate load_role(const std::filesystem::path& dir, const std::string& role,
                         const PromptTemplate& fallback) {
    const auto file = dir / (role + ".txt");
    if (!std::filesystem::exists(file)) return fallback;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw PromptError("cannot open template '" + file.string() + "'");
    std::ostringstream body;
    body << in.rdbuf();
    return PromptTemplate{"custom:" + role + ".txt", body.str()};
}

}  // namespace

TemplateSet builtin_templates() {
    return TemplateSet{
        {"diagnostic_v1", kDiagnosticV1},
        {"reasoning_v1", kReasoningV1},
        {"fusion_v1", kFusionV1},
    };
}

TemplateSet load_templates(const std::string& dir) {
    const std::filesystem::path p(dir);
    if (!std::filesystem::is_directory(p))
        throw PromptError("template dir '" + dir + "' does not exist");
    const TemplateSet builtin = builtin_templates();
    return TemplateSet{
        load_role(p, "diagnostic", builtin.diagnostic),
        load_role(p, "reasoning", builtin.reasoning),
        load_role(p, "fusion", builtin.fusion),
    };
}

TemplateSet resolve_templates(const std::string& dir) {
    return dir.empty() ? builtin_templates() : load_templates(dir);
}

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t open = text.find("{{", i);
        if (open == std::string::npos) {
            out.append(text, i, std::string::npos);
            break;
        }
        out.append(text, i, open - i);
        const std::size_t close = text.find("}}", open + 2);
        if (close == std::string::npos)
            throw PromptError("unterminated placeholder in template");
        const std::string key = text.substr(open + 2, close - open - 2);
        auto it = values.find(key);
        if (it == values.end())
            throw PromptError("unresolved placeholder '" + key + "'");
        out.append(it->second);
        i = close + 2;
    }
    return out;
}

}  // namespace chartcynics
