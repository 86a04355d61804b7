#include "chartcynics/types.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "chartcynics/text.hpp"

namespace chartcynics {

const Option* ChartSample::find_option(const std::string& label) const {
    for (const auto& o : options) {
        if (o.label == label) return &o;
    }
    return nullptr;
}

std::vector<std::string> ChartSample::validate() const {
    std::vector<std::string> problems;
    if (id.empty()) problems.push_back("id is empty");
    if (question.empty()) problems.push_back("question is empty");
    if (options.empty()) problems.push_back("options is empty");

    std::set<std::string> labels;
    for (const auto& o : options) {
        if (o.label.size() != 1 || o.label[0] < 'A' || o.label[0] > 'F')
            problems.push_back("option label '" + o.label + "' is not a single letter A-F");
        if (!labels.insert(o.label).second)
            problems.push_back("duplicate option label '" + o.label + "'");
    }
    if (ground_truth.empty()) {
        problems.push_back("answer is empty");
    } else if (!options.empty() && labels.count(ground_truth) == 0) {
        problems.push_back("answer '" + ground_truth + "' is not an option label");
    }
    if (!trap.empty()) {
        if (!options.empty() && labels.count(trap) == 0)
            problems.push_back("trap '" + trap + "' is not an option label");
        if (trap == ground_truth)
            problems.push_back("trap equals answer '" + trap + "'");
    }
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& row : oracle_table) {
        if (!std::isfinite(row.value))
            problems.push_back("oracle value for '" + row.category + "' is not finite");
        if (!keys.insert({row.category, row.series}).second)
            problems.push_back("duplicate oracle key (" + row.category + ", " + row.series + ")");
    }
    return problems;
}

const TaxonomyCategory* Taxonomy::find(const std::string& id) const {
    for (const auto& c : categories) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

std::vector<std::string> Taxonomy::match(const std::string& text) const {
    std::vector<std::string> out;
    for (const auto& c : categories) {
        bool hit = contains_word(text, c.name);
        for (std::size_t i = 0; !hit && i < c.keywords.size(); ++i)
            hit = contains_word(text, c.keywords[i]);
        if (hit) out.push_back(c.id);
    }
    return out;
}

std::vector<std::string> Taxonomy::validate() const {
    std::vector<std::string> problems;
    if (categories.empty()) problems.push_back("taxonomy has no categories");
    std::set<std::string> ids;
    for (const auto& c : categories) {
        if (c.id.empty()) problems.push_back("category with empty id");
        if (!ids.insert(c.id).second) problems.push_back("duplicate category id '" + c.id + "'");
        if (c.name.empty()) problems.push_back("category '" + c.id + "' has empty name");
        if (c.keywords.empty()) problems.push_back("category '" + c.id + "' has empty keywords");
    }
    return problems;
}

Taxonomy default_taxonomy() {
    Taxonomy t;
    t.categories = {
        {"inverted_axis",
         "Inverted Axis",
         {"inverted", "reversed axis", "flipped axis", "descending axis"},
         "An axis runs opposite to the conventional direction, so larger values plot lower or "
         "further left."},
        {"truncated_axis",
         "Truncated Axis",
         {"truncated", "non-zero baseline", "baseline does not start at zero", "cut off axis"},
         "The value axis starts above zero, visually exaggerating differences."},
        {"inappropriate_order",
         "Inappropriate Order",
         {"shuffled", "out of order", "non-chronological", "reordered categories"},
         "Categories or periods appear in a misleading order rather than their natural "
         "sequence."},
        {"inappropriate_aggregation",
         "Inappropriate Aggregation",
         {"aggregation", "uneven intervals", "mixed granularity", "binning"},
         "Data is grouped over uneven or mismatched intervals, hiding or manufacturing trends."},
        {"inappropriate_scale_functions",
         "Inappropriate Scale Functions",
         {"logarithmic", "log scale", "nonlinear scale", "irregular tick spacing"},
         "The axis uses a nonlinear or irregular scale where a linear one is expected."},
        {"cherry_picking",
         "Cherry-Picking",
         {"cherry-picking", "cherry picking", "selective range", "incomplete period",
          "partial data"},
         "Only a favorable subset of the data or time range is shown."},
        {"disproportionate_encoding",
         "Disproportionate Encoding",
         {"disproportionate", "area encoding", "3d effect", "exaggerated size"},
         "Visual size (area, volume, icon scale) is not proportional to the underlying values."},
    };
    return t;
}

std::vector<std::string> PipelineConfig::validate() const {
    std::vector<std::string> problems;
    if (group_size < 2) problems.push_back("group_size must be >= 2");
    if (weights.fact < 0 || weights.contra < 0 || weights.logic < 0 || weights.fmt < 0)
        problems.push_back("weights must be >= 0");
    if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0))
        problems.push_back("overlap_threshold must be in (0, 1]");
    if (concurrency < 1) problems.push_back("concurrency must be >= 1");
    if (max_rois < 0) problems.push_back("max_rois must be >= 0");
    return problems;
}

}  // namespace chartcynics
