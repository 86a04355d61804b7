#include "chartcynics/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace chartcynics {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw DatasetError(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key) {
    const json& v = require_field(j, key);
    if (!v.is_string()) throw DatasetError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) throw DatasetError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

double require_number(const json& j, const char* key) {
    const json& v = require_field(j, key);
    if (!v.is_number()) throw DatasetError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot open '" + path + "'");
    return in;
}

json parse_json_file(const std::string& path) {
    auto in = open_or_throw(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DatasetError("'" + path + "': " + e.what());
    }
    return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

}  // namespace

ChartSample sample_from_json(const json& j) {
    if (!j.is_object()) throw DatasetError("sample must be a JSON object");
    ChartSample s;
    s.id = require_string(j, "id");
    s.image_path = require_string(j, "image");
    s.question = require_string(j, "question");

    const json& opts = require_field(j, "options");
    if (!opts.is_array()) throw DatasetError("field 'options' must be an array");
    for (const auto& o : opts) {
        Option opt;
        opt.label = require_string(o, "label");
        opt.text = require_string(o, "text");
        s.options.push_back(std::move(opt));
    }

    s.ground_truth = require_string(j, "answer");
    s.trap = optional_string(j, "trap");
    s.misleader = require_string(j, "misleader");
    s.chart_type = require_string(j, "chart_type");

    if (auto it = j.find("oracle"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw DatasetError("field 'oracle' must be an array");
        for (const auto& r : *it) {
            OracleRow row;
            row.category = require_string(r, "category");
            row.series = optional_string(r, "series");
            row.value = require_number(r, "value");
            s.oracle_table.push_back(std::move(row));
        }
    }
    s.explanation = optional_string(j, "explanation");
    s.ocr_markdown = optional_string(j, "ocr_markdown");
    s.detections_path = optional_string(j, "detections");

    if (auto problems = s.validate(); !problems.empty()) {
        std::string msg = "invalid sample";
        if (!s.id.empty()) msg += " '" + s.id + "'";
        for (const auto& p : problems) msg += "; " + p;
        throw DatasetError(msg);
    }
    return s;
}

json sample_to_json(const ChartSample& s) {
    json j;
    j["id"] = s.id;
    j["image"] = s.image_path;
    j["question"] = s.question;
    json opts = json::array();
    for (const auto& o : s.options) opts.push_back({{"label", o.label}, {"text", o.text}});
    j["options"] = std::move(opts);
    j["answer"] = s.ground_truth;
    if (!s.trap.empty()) j["trap"] = s.trap;
    j["misleader"] = s.misleader;
    j["chart_type"] = s.chart_type;
    if (!s.oracle_table.empty()) {
        json rows = json::array();
        for (const auto& r : s.oracle_table)
            rows.push_back({{"category", r.category}, {"series", r.series}, {"value", r.value}});
        j["oracle"] = std::move(rows);
    }
    if (!s.explanation.empty()) j["explanation"] = s.explanation;
    if (!s.ocr_markdown.empty()) j["ocr_markdown"] = s.ocr_markdown;
    if (!s.detections_path.empty()) j["detections"] = s.detections_path;
    return j;
}

std::vector<ChartSample> parse_dataset(std::istream& in, const std::string& origin) {
    std::vector<ChartSample> out;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            ChartSample s = sample_from_json(j);
            if (!seen.insert(s.id).second)
                throw DatasetError("duplicate id '" + s.id + "'");
            out.push_back(std::move(s));
        } catch (const DatasetError& e) {
            throw DatasetError(origin + " line " + std::to_string(line_no) + ": " + e.what());
        } catch (const json::exception& e) {
            throw DatasetError(origin + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<ChartSample> load_dataset(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_dataset(in, path);
}

void save_dataset(const std::string& path, const std::vector<ChartSample>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DatasetError("cannot write '" + path + "'");
    for (const auto& s : samples) out << sample_to_json(s).dump() << "\n";
}

Taxonomy taxonomy_from_json(const json& j) {
    Taxonomy t;
    const json& cats = require_field(j, "categories");
    if (!cats.is_array()) throw DatasetError("field 'categories' must be an array");
    for (const auto& c : cats) {
        TaxonomyCategory cat;
        cat.id = require_string(c, "id");
        cat.name = require_string(c, "name");
        const json& kws = require_field(c, "keywords");
        if (!kws.is_array()) throw DatasetError("field 'keywords' must be an array");
        for (const auto& k : kws) cat.keywords.push_back(k.get<std::string>());
        cat.description = optional_string(c, "description");
        t.categories.push_back(std::move(cat));
    }
    if (auto problems = t.validate(); !problems.empty()) {
        std::string msg = "invalid taxonomy";
        for (const auto& p : problems) msg += "; " + p;
        throw DatasetError(msg);
    }
    return t;
}

json taxonomy_to_json(const Taxonomy& t) {
    json cats = json::array();
    for (const auto& c : t.categories)
        cats.push_back({{"id", c.id},
                        {"name", c.name},
                        {"keywords", c.keywords},
                        {"description", c.description}});
    return json{{"categories", std::move(cats)}};
}

Taxonomy load_taxonomy(const std::string& path) {
    return taxonomy_from_json(parse_json_file(path));
}

std::vector<Detection> detections_from_json(const json& j) {
    if (!j.is_array()) throw DatasetError("detections file must be a JSON array");
    std::vector<Detection> out;
    for (const auto& d : j) {
        Detection det;
        det.klass = require_string(d, "class");
        const json& bbox = require_field(d, "bbox");
        if (!bbox.is_array() || bbox.size() != 4)
            throw DatasetError("field 'bbox' must be [x, y, w, h]");
        det.x = bbox[0].get<double>();
        det.y = bbox[1].get<double>();
        det.w = bbox[2].get<double>();
        det.h = bbox[3].get<double>();
        det.score = require_number(d, "score");
        if (det.w <= 0 || det.h <= 0)
            throw DatasetError("detection '" + det.klass + "' has non-positive size");
        out.push_back(std::move(det));
    }
    return out;
}

json detections_to_json(const std::vector<Detection>& ds) {
    json out = json::array();
    for (const auto& d : ds)
        out.push_back({{"class", d.klass},
                       {"bbox", {d.x, d.y, d.w, d.h}},
                       {"score", d.score}});
    return out;
}

std::vector<Detection> load_detections(const std::string& path) {
    return detections_from_json(parse_json_file(path));
}

PipelineConfig pipeline_config_from_json(const json& j) {
    PipelineConfig c;
    if (!j.is_object()) throw DatasetError("config must be a JSON object");

    static const std::set<std::string> known = {
        "weights",        "shaping",     "group_size",
        "overlap_threshold", "roi_padding", "max_rois",
        "abstain_phrase", "template_dir", "include_timings",
        "concurrency",    "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (known.count(it.key()) == 0)
            throw DatasetError("unknown config key '" + it.key() + "'");
    }

    if (auto it = j.find("weights"); it != j.end()) {
        const json& w = *it;
        c.weights.fact = w.value("fact", c.weights.fact);
        c.weights.contra = w.value("contra", c.weights.contra);
        c.weights.logic = w.value("logic", c.weights.logic);
        c.weights.fmt = w.value("fmt", c.weights.fmt);
    }
    if (auto it = j.find("shaping"); it != j.end()) {
        const json& s = *it;
        c.shaping.correct = s.value("correct", c.shaping.correct);
        c.shaping.trap = s.value("trap", c.shaping.trap);
        c.shaping.other = s.value("other", c.shaping.other);
        c.shaping.abstain = s.value("abstain", c.shaping.abstain);
    }
    c.group_size = j.value("group_size", c.group_size);
    c.overlap_threshold = j.value("overlap_threshold", c.overlap_threshold);
    if (auto it = j.find("roi_padding"); it != j.end()) {
        const json& p = *it;
        c.roi_padding.legend_frac = p.value("legend_frac", c.roi_padding.legend_frac);
        c.roi_padding.legend_min = p.value("legend_min", c.roi_padding.legend_min);
        c.roi_padding.axis_frac = p.value("axis_frac", c.roi_padding.axis_frac);
        c.roi_padding.axis_min = p.value("axis_min", c.roi_padding.axis_min);
        c.roi_padding.axis_cross_pad = p.value("axis_cross_pad", c.roi_padding.axis_cross_pad);
        c.roi_padding.title_pad = p.value("title_pad", c.roi_padding.title_pad);
    }
    c.max_rois = j.value("max_rois", c.max_rois);
    c.abstain_phrase = j.value("abstain_phrase", c.abstain_phrase);
    c.template_dir = j.value("template_dir", c.template_dir);
    c.include_timings = j.value("include_timings", c.include_timings);
    c.concurrency = j.value("concurrency", c.concurrency);
    c.seed = j.value("seed", c.seed);

    if (auto problems = c.validate(); !problems.empty()) {
        std::string msg = "invalid config";
        for (const auto& p : problems) msg += "; " + p;
        throw DatasetError(msg);
    }
    return c;
}

json pipeline_config_to_json(const PipelineConfig& c) {
    return json{
        {"weights",
         {{"fact", c.weights.fact},
          {"contra", c.weights.contra},
          {"logic", c.weights.logic},
          {"fmt", c.weights.fmt}}},
        {"shaping",
         {{"correct", c.shaping.correct},
          {"trap", c.shaping.trap},
          {"other", c.shaping.other},
          {"abstain", c.shaping.abstain}}},
        {"group_size", c.group_size},
        {"overlap_threshold", c.overlap_threshold},
        {"roi_padding",
         {{"legend_frac", c.roi_padding.legend_frac},
          {"legend_min", c.roi_padding.legend_min},
          {"axis_frac", c.roi_padding.axis_frac},
          {"axis_min", c.roi_padding.axis_min},
          {"axis_cross_pad", c.roi_padding.axis_cross_pad},
          {"title_pad", c.roi_padding.title_pad}}},
        {"max_rois", c.max_rois},
        {"abstain_phrase", c.abstain_phrase},
        {"template_dir", c.template_dir},
        {"include_timings", c.include_timings},
        {"concurrency", c.concurrency},
        {"seed", c.seed},
    };
}

PipelineConfig load_pipeline_config(const std::string& path) {
    return pipeline_config_from_json(parse_json_file(path));
}

std::map<std::string, std::vector<OracleRow>> load_oracle_csv(const std::string& path) {
    auto in = open_or_throw(path);
    std::map<std::string, std::vector<OracleRow>> out;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() == 4 && fields[0] == "id" && fields[1] == "category" &&
                fields[2] == "series" && fields[3] == "value")
                continue;
            throw DatasetError(path + " line 1: expected header id,category,series,value");
        }
        if (fields.size() != 4)
            throw DatasetError(path + " line " + std::to_string(line_no) +
                               ": expected 4 fields, got " + std::to_string(fields.size()));
        OracleRow row;
        row.category = fields[1];
        row.series = fields[2];
        try {
            std::size_t pos = 0;
            row.value = std::stod(fields[3], &pos);
            if (pos != fields[3].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DatasetError(path + " line " + std::to_string(line_no) +
                               ": field 'value' is not a number: '" + fields[3] + "'");
        }
        out[fields[0]].push_back(std::move(row));
    }
    return out;
}

}  // namespace chartcynics
