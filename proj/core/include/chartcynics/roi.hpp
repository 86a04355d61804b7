#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chartcynics/image.hpp"
#include "chartcynics/types.hpp"

namespace chartcynics {

struct RoiError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Order doubles as the image attachment order after the full chart.
enum class RoiKind { Title = 0, Legend = 1, XAxis = 2, YAxis = 3 };

std::string roi_kind_name(RoiKind kind);

struct Padding {
    int left = 0;
    int right = 0;
    int top = 0;
    int bottom = 0;

    bool operator==(const Padding&) const = default;
};

struct CropRegion {
    RoiKind kind = RoiKind::Title;
    Rect rect;
    std::vector<Detection> source_boxes;
    Padding padding_applied;
};

struct Spread {
    double x_spread = 0.0;
    double y_spread = 0.0;
};

Spread compute_spread(const std::vector<Detection>& boxes);

// Maps lowercase detector class names (with '_'/' ' normalized to '-') to kinds.
using RoiAliasTable = std::map<std::string, RoiKind>;
RoiAliasTable default_alias_table();

Padding compute_padding(Rect union_rect, RoiKind kind, const RoiPaddingPolicy& policy);

Rect pad_roi(Rect union_rect, RoiKind kind, int image_w, int image_h,
             const RoiPaddingPolicy& policy);

std::map<RoiKind, CropRegion> extract_rois(const std::vector<Detection>& detections, int image_w,
                                           int image_h, const RoiPaddingPolicy& policy,
                                           const RoiAliasTable& aliases = default_alias_table());

}  // namespace chartcynics
