#include <doctest.h>

#include "chartcynics/backend.hpp"
#include "chartcynics/data_path.hpp"
#include "chartcynics/vision_path.hpp"

namespace cc = chartcynics;

namespace {

const std::string kTwoColumnTable =
    "| Year | Deaths |\n"
    "|---|---|\n"
    "| 2005 | 873 |\n"
    "| 2010 | 1021 |\n";

cc::OcrDocument full_data_path(const std::string& markdown,
                               const cc::DiagnosticReport* report = nullptr) {
    cc::OcrDocument doc = cc::parse_ocr_markdown(markdown);
    doc = cc::assign_trust(std::move(doc), report);
    doc = cc::integrity_audit(std::move(doc));
    doc.directives = cc::emit_calibration_directives(doc);
    return doc;
}

}  // namespace

TEST_CASE("a two-column table yields one entity per value cell") {
    const cc::OcrDocument doc = cc::parse_ocr_markdown(kTwoColumnTable);
    REQUIRE(doc.tables.size() == 1);
    CHECK(doc.tables[0].headers == std::vector<std::string>{"Year", "Deaths"});
    REQUIRE(doc.tables[0].rows.size() == 2);
    REQUIRE(doc.entities.size() == 2);
    CHECK(doc.entities[0].value == 873.0);
    CHECK(doc.entities[0].category == "2005");
    CHECK(doc.entities[0].series == "Deaths");
    CHECK(doc.entities[0].row == 0);
    CHECK(doc.entities[0].col == 1);
    CHECK(doc.entities[1].value == 1021.0);
}

TEST_CASE("category cells do not become entities") {
    const cc::OcrDocument doc = cc::parse_ocr_markdown(
        "| Year | Deaths | Cases |\n|---|---|---|\n| 2005 | 873 | 12000 |\n");
    REQUIRE(doc.entities.size() == 2);
    CHECK(doc.entities[0].value == 873.0);
    CHECK(doc.entities[1].value == 12000.0);
    CHECK(doc.entities[1].series == "Cases");
}

TEST_CASE("loose prose numbers become untabled entities") {
    const cc::OcrDocument doc =
        cc::parse_ocr_markdown("Peak was 42 units in the north.\n" + kTwoColumnTable);
    REQUIRE(doc.entities.size() == 3);
    CHECK(doc.entities[0].value == 42.0);
    CHECK(doc.entities[0].row == -1);
    CHECK(doc.entities[0].col == -1);
}

TEST_CASE("tables without separator rows have no headers") {
    const cc::OcrDocument doc =
        cc::parse_ocr_markdown("| 2005 | 873 |\n| 2010 | 1021 |\n");
    REQUIRE(doc.tables.size() == 1);
    CHECK(doc.tables[0].headers.empty());
    CHECK(doc.tables[0].rows.size() == 2);
    REQUIRE(doc.entities.size() == 2);
    CHECK(doc.entities[0].series.empty());
}

TEST_CASE("complete table earns High trust") {
    const cc::OcrDocument doc = full_data_path(kTwoColumnTable);
    CHECK(doc.trust == cc::Trust::High);
    REQUIRE_FALSE(doc.directives.empty());
    CHECK(doc.directives[0] == "Treat labeled values as ground truth.");
}

TEST_CASE("a missing value cell drops trust to Low") {
    const cc::OcrDocument doc = full_data_path(
        "| Year | Deaths |\n|---|---|\n| 2005 | 873 |\n| 2010 |  |\n");
    CHECK(doc.trust == cc::Trust::Low);
    REQUIRE_FALSE(doc.directives.empty());
    CHECK(doc.directives[0] ==
          "Treat OCR values as approximate; prefer diagnostic deductions.");
}

TEST_CASE("no table at all means Low trust") {
    const cc::OcrDocument doc = full_data_path("just words, no grid\n");
    CHECK(doc.trust == cc::Trust::Low);
}

TEST_CASE("canvas overflow in the report forces Low trust and a flag") {
    cc::DiagnosticReport report;
    report.raw_text = "DIAGNOSIS:\n- Bars exceed the canvas at the top edge.";
    const cc::OcrDocument doc = full_data_path(kTwoColumnTable, &report);
    CHECK(doc.trust == cc::Trust::Low);
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::ExceedsCanvas) == 1);
    REQUIRE(doc.directives.size() == 2);
    CHECK(doc.directives[1] ==
          "Plotted marks exceed the canvas; rely on labeled values, not visual extent.");
}

TEST_CASE("parse_temporal_label handles the documented kinds") {
    auto t = cc::parse_temporal_label("2015");
    CHECK(t.ok);
    CHECK(t.has_year);
    CHECK(t.key == 2015 * 12.0);

    t = cc::parse_temporal_label("Q3 2020");
    CHECK(t.ok);
    CHECK(t.key == 2020 * 12.0 + 6);

    t = cc::parse_temporal_label("March 2020");
    CHECK(t.ok);
    CHECK(t.key == 2020 * 12.0 + 2);

    t = cc::parse_temporal_label("2020 March");
    CHECK(t.ok);
    CHECK(t.key == 2020 * 12.0 + 2);

    t = cc::parse_temporal_label("2024-03");
    CHECK(t.ok);
    CHECK(t.key == 2024 * 12.0 + 2);

    t = cc::parse_temporal_label("2024-03-15");
    CHECK(t.ok);
    CHECK(t.key > 2024 * 12.0 + 2);
    CHECK(t.key < 2024 * 12.0 + 3);

    t = cc::parse_temporal_label("Nov");
    CHECK(t.ok);
    CHECK(t.month_only);
    CHECK(t.key == 10.0);

    t = cc::parse_temporal_label("widgets");
    CHECK_FALSE(t.ok);
    t = cc::parse_temporal_label("550");
    CHECK_FALSE(t.ok);
}

TEST_CASE("partial-period markers are recognized") {
    CHECK(cc::parse_temporal_label("2024*").partial);
    CHECK(cc::parse_temporal_label("2024 (partial)").partial);
    CHECK(cc::parse_temporal_label("2024 to date").partial);
    CHECK(cc::parse_temporal_label("2024 YTD").partial);
    CHECK(cc::parse_temporal_label("YTD 2024").partial);
    CHECK_FALSE(cc::parse_temporal_label("2024").partial);
    CHECK(cc::parse_temporal_label("2024 YTD").has_year);
}

TEST_CASE("reversed chronology raises ReversedOrder") {
    const cc::OcrDocument doc = full_data_path(
        "| Year | V |\n|---|---|\n| 2010 | 3 |\n| 2008 | 2 |\n| 2005 | 1 |\n");
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::ReversedOrder) == 1);
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::ShuffledOrder) == 0);
    REQUIRE(doc.directives.size() == 2);
    CHECK(doc.directives[1] == "Re-sort categories chronologically before comparing.");
}

TEST_CASE("shuffled chronology raises ShuffledOrder") {
    const cc::OcrDocument doc = full_data_path(
        "| Year | V |\n|---|---|\n| 2008 | 2 |\n| 2005 | 1 |\n| 2010 | 3 |\n");
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::ShuffledOrder) == 1);
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::ReversedOrder) == 0);
}

TEST_CASE("forward chronology raises nothing") {
    const cc::OcrDocument doc = full_data_path(kTwoColumnTable);
    CHECK(doc.integrity_flags.empty());
}

TEST_CASE("trailing partial year raises IncompletePeriod") {
    const cc::OcrDocument doc = full_data_path(
        "| Year | V |\n|---|---|\n| 2022 | 10 |\n| 2023 | 11 |\n| 2024* | 3 |\n");
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::IncompletePeriod) == 1);
    REQUIRE(doc.directives.size() == 2);
    CHECK(doc.directives[1] ==
          "The final period is incomplete; do not compare it against full periods.");
}

TEST_CASE("bare trailing month after year rows raises IncompletePeriod") {
    const cc::OcrDocument doc = full_data_path(
        "| Period | V |\n|---|---|\n| 2022 | 10 |\n| 2023 | 11 |\n| June | 3 |\n");
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::IncompletePeriod) == 1);
    CHECK(doc.integrity_flags.count(cc::IntegrityFlag::ShuffledOrder) == 0);
}

TEST_CASE("non-temporal first column never raises order flags") {
    const cc::OcrDocument doc = full_data_path(
        "| Region | V |\n|---|---|\n| North | 10 |\n| South | 2 |\n| East | 7 |\n");
    CHECK(doc.integrity_flags.empty());
}

TEST_CASE("directive order follows trust then flag declaration order") {
    cc::DiagnosticReport report;
    report.raw_text = "bars go beyond the plot area";
    const cc::OcrDocument doc = full_data_path(
        "| Year | V |\n|---|---|\n| 2010 | 3 |\n| 2009 | 2 |\n| 2008* | 1 |\n", &report);
    REQUIRE(doc.directives.size() == 4);
    CHECK(doc.directives[0] ==
          "Treat OCR values as approximate; prefer diagnostic deductions.");
    CHECK(doc.directives[1] == "Re-sort categories chronologically before comparing.");
    CHECK(doc.directives[2] ==
          "The final period is incomplete; do not compare it against full periods.");
    CHECK(doc.directives[3] ==
          "Plotted marks exceed the canvas; rely on labeled values, not visual extent.");
}

TEST_CASE("directive count is one plus the flag count") {
    for (const std::string markdown :
         {kTwoColumnTable, std::string("| Year | V |\n|---|---|\n| 2010 | 3 |\n| 2005 | 1 |\n"),
          std::string("words only")}) {
        const cc::OcrDocument doc = full_data_path(markdown);
        CHECK(doc.directives.size() == 1 + doc.integrity_flags.size());
    }
}

TEST_CASE("run_data_path prefers sample markdown and falls back to backend OCR") {
    cc::ScriptedBackend backend({{"ocr/d1", kTwoColumnTable}});
    cc::ChartSample with_markdown;
    with_markdown.id = "d1";
    with_markdown.ocr_markdown = "| A | B |\n|---|---|\n| x | 1 |\n";
    const cc::OcrDocument doc1 =
        cc::run_data_path(backend, with_markdown, {}, nullptr);
    CHECK(doc1.source_markdown == with_markdown.ocr_markdown);

    cc::ChartSample without;
    without.id = "d1";
    const cc::OcrDocument doc2 = cc::run_data_path(backend, without, {}, nullptr);
    CHECK(doc2.source_markdown == kTwoColumnTable);
    CHECK(doc2.trust == cc::Trust::High);

    cc::ChartSample unknown;
    unknown.id = "nope";
    const cc::OcrDocument doc3 = cc::run_data_path(backend, unknown, {}, nullptr);
    CHECK(doc3.source_markdown.empty());
    CHECK(doc3.trust == cc::Trust::Low);
}

TEST_CASE("names for trust tiers and flags are stable") {
    CHECK(cc::trust_name(cc::Trust::High) == "High");
    CHECK(cc::trust_name(cc::Trust::Low) == "Low");
    CHECK(cc::integrity_flag_name(cc::IntegrityFlag::ReversedOrder) == "ReversedOrder");
    CHECK(cc::integrity_flag_name(cc::IntegrityFlag::ShuffledOrder) == "ShuffledOrder");
    CHECK(cc::integrity_flag_name(cc::IntegrityFlag::IncompletePeriod) == "IncompletePeriod");
    CHECK(cc::integrity_flag_name(cc::IntegrityFlag::ExceedsCanvas) == "ExceedsCanvas");
}
