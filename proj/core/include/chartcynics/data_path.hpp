#pragma once

#include <set>
#include <string>
#include <vector>

#include "chartcynics/backend.hpp"
#include "chartcynics/types.hpp"
#include "chartcynics/vision_path.hpp"

namespace chartcynics {

enum class Trust { High, Low };

// Declaration order is the fixed directive emission order.
enum class IntegrityFlag { ReversedOrder = 0, ShuffledOrder, IncompletePeriod, ExceedsCanvas };

std::string trust_name(Trust t);
std::string integrity_flag_name(IntegrityFlag f);

struct TableData {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;
};

struct NumericEntity {
    std::string raw_token;
    double value = 0.0;
    // Table coordinates; loose entities from non-table lines use row = col = -1.
    int row = -1;
    int col = -1;
    std::string category;  // first cell of the row, when from a multi-column table
    std::string series;    // column header, when present
};

struct OcrDocument {
    std::string source_markdown;
    std::vector<TableData> tables;
    std::vector<NumericEntity> entities;
    Trust trust = Trust::Low;
    std::set<IntegrityFlag> integrity_flags;
    std::vector<std::string> directives;
};

// Extracts pipe-delimited tables; numeric cells outside the first column
// become entities, and numeric tokens on non-table lines become loose
// entities. Trust, flags, and directives stay at their defaults until
// assign_trust / integrity_audit / emit_calibration_directives run.
OcrDocument parse_ocr_markdown(const std::string& markdown);

// High trust needs a table whose every data row has a numeric value cell and
// no canvas-overflow diagnosis in the report; otherwise Low. A matching
// report also sets the ExceedsCanvas flag.
OcrDocument assign_trust(OcrDocument doc, const DiagnosticReport* report);

struct TemporalLabel {
    bool ok = false;
    double key = 0.0;  // months since year 0; comparable across kinds
    bool has_year = false;
    bool partial = false;  // YTD / trailing '*' / "to date" / "(partial)"
    bool month_only = false;
};

TemporalLabel parse_temporal_label(const std::string& label);

// Flags ReversedOrder when a temporal first column is strictly decreasing,
// ShuffledOrder when it is neither non-decreasing nor non-increasing, and
// IncompletePeriod when the final label carries a partial-period marker or is
// a bare month after year-level rows.
OcrDocument integrity_audit(OcrDocument doc);

// Pure function of (trust, flags): the trust directive first, then one fixed
// sentence per flag in declaration order.
std::vector<std::string> emit_calibration_directives(const OcrDocument& doc);

// Full data path: sample markdown, else backend OCR, then trust + audit +
// directives. `full_png` feeds the OCR backend when the sample has no
// markdown.
OcrDocument run_data_path(Backend& backend, const ChartSample& sample,
                          const std::vector<std::uint8_t>& full_png,
                          const DiagnosticReport* report);

}  // namespace chartcynics
