#include "chartcynics/roi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <tuple>

namespace chartcynics {

namespace {

int round_half_away(double v) { return static_cast<int>(std::lround(v)); }

std::string normalize_class(const std::string& klass) {
    std::string out;
    out.reserve(klass.size());
    for (char c : klass) {
        if (c == '_' || c == ' ')
            out.push_back('-');
        else
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

bool detection_less(const Detection& a, const Detection& b) {
    return std::tie(a.x, a.y, a.w, a.h, a.klass, a.score) <
           std::tie(b.x, b.y, b.w, b.h, b.klass, b.score);
}

}  // namespace

std::string roi_kind_name(RoiKind kind) {
    switch (kind) {
        case RoiKind::Title: return "title";
        case RoiKind::Legend: return "legend";
        case RoiKind::XAxis: return "x-axis";
        case RoiKind::YAxis: return "y-axis";
    }
    return "unknown";
}

Spread compute_spread(const std::vector<Detection>& boxes) {
    if (boxes.empty()) throw RoiError("compute_spread: empty box list");
    double min_l = boxes[0].x, max_r = boxes[0].x + boxes[0].w;
    double min_t = boxes[0].y, max_b = boxes[0].y + boxes[0].h;
    for (const auto& b : boxes) {
        min_l = std::min(min_l, b.x);
        max_r = std::max(max_r, b.x + b.w);
        min_t = std::min(min_t, b.y);
        max_b = std::max(max_b, b.y + b.h);
    }
    return Spread{max_r - min_l, max_b - min_t};
}

RoiAliasTable default_alias_table() {
    return RoiAliasTable{
        {"title", RoiKind::Title},
        {"chart-title", RoiKind::Title},
        {"plot-title", RoiKind::Title},
        {"title-area", RoiKind::Title},
        {"legend", RoiKind::Legend},
        {"legend-area", RoiKind::Legend},
        {"legend-label", RoiKind::Legend},
        {"key", RoiKind::Legend},
        {"x-axis", RoiKind::XAxis},
        {"xaxis", RoiKind::XAxis},
        {"x-axis-label", RoiKind::XAxis},
        {"x-axis-area", RoiKind::XAxis},
        {"x-axis-title", RoiKind::XAxis},
        {"xlabel", RoiKind::XAxis},
        {"y-axis", RoiKind::YAxis},
        {"yaxis", RoiKind::YAxis},
        {"y-axis-label", RoiKind::YAxis},
        {"y-axis-area", RoiKind::YAxis},
        {"y-axis-title", RoiKind::YAxis},
        {"ylabel", RoiKind::YAxis},
    };
}

Padding compute_padding(Rect union_rect, RoiKind kind, const RoiPaddingPolicy& policy) {
    Padding p;
    switch (kind) {
        case RoiKind::Legend: {
            const int side = std::max(
                round_half_away(policy.legend_frac * std::max(union_rect.w, union_rect.h)),
                policy.legend_min);
            p = {side, side, side, side};
            break;
        }
        case RoiKind::XAxis: {
            const int horiz = std::max(round_half_away(policy.axis_frac * union_rect.w),
                                       policy.axis_min);
            p = {horiz, horiz, policy.axis_cross_pad, policy.axis_cross_pad};
            break;
        }
        case RoiKind::YAxis: {
            const int vert = std::max(round_half_away(policy.axis_frac * union_rect.h),
                                      policy.axis_min);
            p = {policy.axis_cross_pad, policy.axis_cross_pad, vert, vert};
            break;
        }
        case RoiKind::Title: {
            p = {policy.title_pad, policy.title_pad, policy.title_pad, policy.title_pad};
            break;
        }
    }
    return p;
}

Rect pad_roi(Rect union_rect, RoiKind kind, int image_w, int image_h,
             const RoiPaddingPolicy& policy) {
    if (union_rect.w <= 0 || union_rect.h <= 0)
        throw RoiError("pad_roi: degenerate union rect");
    const Padding p = compute_padding(union_rect, kind, policy);
    const int x0 = std::max(union_rect.x - p.left, 0);
    const int y0 = std::max(union_rect.y - p.top, 0);
    const int x1 = std::min(union_rect.x + union_rect.w + p.right, image_w);
    const int y1 = std::min(union_rect.y + union_rect.h + p.bottom, image_h);
    return Rect{x0, y0, x1 - x0, y1 - y0};
}

std::map<RoiKind, CropRegion> extract_rois(const std::vector<Detection>& detections, int image_w,
                                           int image_h, const RoiPaddingPolicy& policy,
                                           const RoiAliasTable& aliases) {
    if (image_w <= 0 || image_h <= 0) throw RoiError("extract_rois: image dims must be positive");

    std::map<RoiKind, std::vector<Detection>> grouped;
    for (const auto& d : detections) {
        auto it = aliases.find(normalize_class(d.klass));
        if (it == aliases.end()) continue;
        // keep only the part inside the image; fully outside boxes are dropped
        const double x0 = std::max(d.x, 0.0);
        const double y0 = std::max(d.y, 0.0);
        const double x1 = std::min(d.x + d.w, double(image_w));
        const double y1 = std::min(d.y + d.h, double(image_h));
        if (x1 <= x0 || y1 <= y0) continue;
        grouped[it->second].push_back(d);
    }

    std::map<RoiKind, CropRegion> out;
    for (auto& [kind, boxes] : grouped) {
        std::sort(boxes.begin(), boxes.end(), detection_less);

        double min_l = image_w, min_t = image_h, max_r = 0, max_b = 0;
        for (const auto& b : boxes) {
            min_l = std::min(min_l, std::max(b.x, 0.0));
            min_t = std::min(min_t, std::max(b.y, 0.0));
            max_r = std::max(max_r, std::min(b.x + b.w, double(image_w)));
            max_b = std::max(max_b, std::min(b.y + b.h, double(image_h)));
        }
        Rect uni;
        uni.x = static_cast<int>(std::floor(min_l));
        uni.y = static_cast<int>(std::floor(min_t));
        uni.w = static_cast<int>(std::ceil(max_r)) - uni.x;
        uni.h = static_cast<int>(std::ceil(max_b)) - uni.y;

        CropRegion region;
        region.kind = kind;
        region.source_boxes = boxes;
        region.padding_applied = compute_padding(uni, kind, policy);
        region.rect = pad_roi(uni, kind, image_w, image_h, policy);
        out.emplace(kind, std::move(region));
    }
    return out;
}

}  // namespace chartcynics
