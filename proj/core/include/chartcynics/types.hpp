#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chartcynics {

struct OracleRow {
    std::string category;
    std::string series;
    double value = 0.0;
};

struct Option {
    std::string label;
    std::string text;
};

struct Detection {
    std::string klass;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    double score = 0.0;
};

struct ChartSample {
    std::string id;
    std::string image_path;
    std::string question;
    std::vector<Option> options;
    std::string ground_truth;
    std::string trap;
    std::string misleader;
    std::string chart_type;
    std::vector<OracleRow> oracle_table;
    std::string explanation;
    std::string ocr_markdown;
    std::string detections_path;

    const Option* find_option(const std::string& label) const;

    // Human-readable problems; empty means the sample is well formed.
    std::vector<std::string> validate() const;
};

struct TaxonomyCategory {
    std::string id;
    std::string name;
    std::vector<std::string> keywords;
    std::string description;
};

struct Taxonomy {
    std::vector<TaxonomyCategory> categories;

    const TaxonomyCategory* find(const std::string& id) const;

    // Category ids whose name or any keyword occurs in `text` as a whole
    // word/phrase, in taxonomy order.
    std::vector<std::string> match(const std::string& text) const;

    std::vector<std::string> validate() const;
};

// Categories named in the misleader literature; extensible via taxonomy files.
Taxonomy default_taxonomy();

struct RewardWeights {
    double fact = 0.20;
    double contra = 0.25;
    double logic = 0.20;
    double fmt = 0.10;
};

struct ShapingPolicy {
    double correct = 1.0;
    double trap = -2.0;
    double other = 0.0;
    double abstain = 0.0;
};

struct RoiPaddingPolicy {
    double legend_frac = 0.10;
    int legend_min = 8;
    double axis_frac = 0.15;
    int axis_min = 12;
    int axis_cross_pad = 8;
    int title_pad = 6;
};

struct PipelineConfig {
    RewardWeights weights;
    ShapingPolicy shaping;
    int group_size = 8;
    double overlap_threshold = 0.3;
    RoiPaddingPolicy roi_padding;
    int max_rois = 4;
    std::string abstain_phrase = "Cannot be Inferred";
    std::string template_dir;  // empty selects the built-in templates
    bool include_timings = false;
    int concurrency = 4;
    std::uint64_t seed = 0;

    std::vector<std::string> validate() const;
};

}  // namespace chartcynics
