#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "chartcynics/image.hpp"
#include "chartcynics/roi.hpp"

namespace cc = chartcynics;

namespace {

cc::Image test_pattern(int w, int h) {
    cc::Image img = cc::Image::blank(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint8_t* p = img.at(x, y);
            p[0] = std::uint8_t((x * 7 + y * 13) % 256);
            p[1] = std::uint8_t((x * 3 + y * 5) % 256);
            p[2] = std::uint8_t((x + y) % 256);
            p[3] = 255;
        }
    return img;
}

bool same_pixels(const cc::Image& a, const cc::Image& b) {
    return a.width == b.width && a.height == b.height && a.pixels == b.pixels;
}

}  // namespace

TEST_CASE("png encode/decode round-trips pixels exactly") {
    const cc::Image img = test_pattern(37, 23);
    const auto bytes = cc::encode_png(img);
    const cc::Image back = cc::decode_png_bytes(bytes.data(), bytes.size());
    CHECK(same_pixels(img, back));
}

TEST_CASE("png file write/read round-trips") {
    const std::string path = "roi_test_tmp.png";
    const cc::Image img = test_pattern(16, 9);
    cc::write_png(path, img);
    const cc::Image back = cc::decode_png(path);
    CHECK(same_pixels(img, back));
    std::remove(path.c_str());
}

TEST_CASE("decode rejects non-png bytes") {
    const std::uint8_t junk[] = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS(cc::decode_png_bytes(junk, sizeof junk), cc::ImageError);
    CHECK_THROWS_AS(cc::decode_png("does_not_exist.png"), cc::ImageError);
}

TEST_CASE("crop copies the exact pixel block") {
    const cc::Image img = test_pattern(40, 30);
    const cc::Rect r{5, 7, 12, 9};
    const cc::Image c = cc::crop(img, r);
    REQUIRE(c.width == 12);
    REQUIRE(c.height == 9);
    for (int y = 0; y < c.height; ++y)
        for (int x = 0; x < c.width; ++x)
            for (int ch = 0; ch < 4; ++ch)
                CHECK(c.at(x, y)[ch] == img.at(r.x + x, r.y + y)[ch]);
}

TEST_CASE("crop rejects out-of-bounds rects") {
    const cc::Image img = test_pattern(10, 10);
    CHECK_THROWS_AS(cc::crop(img, {8, 8, 4, 4}), cc::ImageError);
    CHECK_THROWS_AS(cc::crop(img, {-1, 0, 4, 4}), cc::ImageError);
    CHECK_THROWS_AS(cc::crop(img, {0, 0, 0, 4}), cc::ImageError);
}

TEST_CASE("padding formulas match the per-kind rules") {
    const cc::RoiPaddingPolicy policy;

    SUBCASE("legend uses a tenth of the longer side, floor 8") {
        const cc::Padding p = cc::compute_padding({0, 0, 200, 50}, cc::RoiKind::Legend, policy);
        CHECK(p.left == 20);
        CHECK(p.right == 20);
        CHECK(p.top == 20);
        CHECK(p.bottom == 20);
        const cc::Padding small =
            cc::compute_padding({0, 0, 30, 20}, cc::RoiKind::Legend, policy);
        CHECK(small.left == 8);
        CHECK(small.top == 8);
    }

    SUBCASE("x-axis stretches horizontally, fixed vertical pad") {
        const cc::Padding p = cc::compute_padding({0, 0, 200, 20}, cc::RoiKind::XAxis, policy);
        CHECK(p.left == 30);
        CHECK(p.right == 30);
        CHECK(p.top == 8);
        CHECK(p.bottom == 8);
        const cc::Padding small =
            cc::compute_padding({0, 0, 40, 20}, cc::RoiKind::XAxis, policy);
        CHECK(small.left == 12);
    }

    SUBCASE("y-axis stretches vertically, fixed horizontal pad") {
        const cc::Padding p = cc::compute_padding({0, 0, 20, 200}, cc::RoiKind::YAxis, policy);
        CHECK(p.top == 30);
        CHECK(p.bottom == 30);
        CHECK(p.left == 8);
        CHECK(p.right == 8);
        const cc::Padding small =
            cc::compute_padding({0, 0, 20, 40}, cc::RoiKind::YAxis, policy);
        CHECK(small.top == 12);
    }

    SUBCASE("title uses the fixed pad") {
        const cc::Padding p = cc::compute_padding({0, 0, 100, 30}, cc::RoiKind::Title, policy);
        CHECK(p.left == 6);
        CHECK(p.right == 6);
        CHECK(p.top == 6);
        CHECK(p.bottom == 6);
    }

    SUBCASE("rounding is half away from zero") {
        const cc::Padding p = cc::compute_padding({0, 0, 85, 10}, cc::RoiKind::Legend, policy);
        CHECK(p.left == 9);
    }
}

TEST_CASE("pad_roi clamps to the image") {
    const cc::RoiPaddingPolicy policy;
    const cc::Rect r = cc::pad_roi({2, 3, 100, 40}, cc::RoiKind::Legend, 120, 60, policy);
    CHECK(r.x == 0);
    CHECK(r.y == 0);
    CHECK(r.x + r.w <= 120);
    CHECK(r.y + r.h <= 60);
    CHECK_THROWS_AS(cc::pad_roi({0, 0, 0, 10}, cc::RoiKind::Legend, 100, 100, policy),
                    cc::RoiError);
}

TEST_CASE("padded region always contains the union box") {
    const cc::RoiPaddingPolicy policy;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const int iw = 50 + int(rng() % 400);
        const int ih = 50 + int(rng() % 400);
        cc::Rect u;
        u.x = int(rng() % std::uint64_t(iw - 10));
        u.y = int(rng() % std::uint64_t(ih - 10));
        u.w = 1 + int(rng() % std::uint64_t(iw - u.x));
        u.h = 1 + int(rng() % std::uint64_t(ih - u.y));
        for (cc::RoiKind kind : {cc::RoiKind::Title, cc::RoiKind::Legend, cc::RoiKind::XAxis,
                                 cc::RoiKind::YAxis}) {
            const cc::Rect p = cc::pad_roi(u, kind, iw, ih, policy);
            CHECK(p.x <= u.x);
            CHECK(p.y <= u.y);
            CHECK(p.x + p.w >= u.x + u.w);
            CHECK(p.y + p.h >= u.y + u.h);
            CHECK(p.x >= 0);
            CHECK(p.y >= 0);
            CHECK(p.x + p.w <= iw);
            CHECK(p.y + p.h <= ih);
        }
    }
}

TEST_CASE("padding grows monotonically with the box size") {
    const cc::RoiPaddingPolicy policy;
    int last = 0;
    for (int w = 10; w <= 400; w += 5) {
        const cc::Padding p = cc::compute_padding({0, 0, w, 20}, cc::RoiKind::XAxis, policy);
        CHECK(p.left >= last);
        last = p.left;
    }
    last = 0;
    for (int side = 10; side <= 400; side += 5) {
        const cc::Padding p =
            cc::compute_padding({0, 0, side, side}, cc::RoiKind::Legend, policy);
        CHECK(p.left >= last);
        last = p.left;
    }
}

TEST_CASE("alias table normalizes detector class spellings") {
    const auto aliases = cc::default_alias_table();
    const std::vector<cc::Detection> dets = {
        {"Chart_Title", 10, 5, 80, 12, 0.9},
        {"LEGEND AREA", 100, 20, 40, 30, 0.8},
        {"xaxis", 10, 150, 150, 20, 0.7},
        {"y-axis-label", 2, 20, 18, 120, 0.7},
        {"data-bar", 30, 40, 10, 90, 0.99},
    };
    const auto rois = cc::extract_rois(dets, 200, 180, cc::RoiPaddingPolicy{}, aliases);
    CHECK(rois.size() == 4);
    CHECK(rois.count(cc::RoiKind::Title) == 1);
    CHECK(rois.count(cc::RoiKind::Legend) == 1);
    CHECK(rois.count(cc::RoiKind::XAxis) == 1);
    CHECK(rois.count(cc::RoiKind::YAxis) == 1);
}

TEST_CASE("extract_rois unions boxes of the same kind") {
    const std::vector<cc::Detection> dets = {
        {"legend", 100, 20, 40, 30, 0.8},
        {"legend", 130, 40, 30, 25, 0.6},
    };
    const auto rois = cc::extract_rois(dets, 300, 300, cc::RoiPaddingPolicy{});
    REQUIRE(rois.count(cc::RoiKind::Legend) == 1);
    const auto& region = rois.at(cc::RoiKind::Legend);
    CHECK(region.source_boxes.size() == 2);
    CHECK(region.rect.x <= 100 - region.padding_applied.left);
    CHECK(region.rect.x + region.rect.w >= 160);
    CHECK(region.rect.y + region.rect.h >= 65);
}

TEST_CASE("extract_rois ignores unknown classes and off-image boxes") {
    const std::vector<cc::Detection> dets = {
        {"watermark", 0, 0, 50, 50, 0.9},
        {"legend", 500, 500, 40, 30, 0.8},
    };
    CHECK(cc::extract_rois(dets, 200, 200, cc::RoiPaddingPolicy{}).empty());
}

TEST_CASE("extract_rois is invariant to detection order") {
    std::vector<cc::Detection> dets = {
        {"legend", 100, 20, 40, 30, 0.8},
        {"title", 10, 5, 80, 12, 0.9},
        {"legend", 130, 40, 30, 25, 0.6},
        {"x-axis", 10, 150, 150, 20, 0.7},
    };
    const auto a = cc::extract_rois(dets, 300, 300, cc::RoiPaddingPolicy{});
    std::reverse(dets.begin(), dets.end());
    const auto b = cc::extract_rois(dets, 300, 300, cc::RoiPaddingPolicy{});
    REQUIRE(a.size() == b.size());
    for (const auto& [kind, region] : a) {
        REQUIRE(b.count(kind) == 1);
        CHECK(b.at(kind).rect == region.rect);
        CHECK(b.at(kind).source_boxes.size() == region.source_boxes.size());
        for (std::size_t i = 0; i < region.source_boxes.size(); ++i) {
            CHECK(b.at(kind).source_boxes[i].x == region.source_boxes[i].x);
            CHECK(b.at(kind).source_boxes[i].y == region.source_boxes[i].y);
        }
    }
}

TEST_CASE("padding_applied reports the pre-clamp padding") {
    const std::vector<cc::Detection> dets = {{"legend", 0, 0, 100, 100, 0.9}};
    const auto rois = cc::extract_rois(dets, 110, 110, cc::RoiPaddingPolicy{});
    REQUIRE(rois.count(cc::RoiKind::Legend) == 1);
    const auto& region = rois.at(cc::RoiKind::Legend);
    CHECK(region.padding_applied.left == 10);
    CHECK(region.rect.x == 0);
    CHECK(region.rect.w == 110);
}

TEST_CASE("compute_spread reflects box dispersion") {
    const std::vector<cc::Detection> boxes = {
        {"legend", 0, 0, 10, 10, 1.0},
        {"legend", 90, 0, 10, 10, 1.0},
    };
    const cc::Spread s = cc::compute_spread(boxes);
    CHECK(s.x_spread == 100.0);
    CHECK(s.y_spread == 10.0);
}
