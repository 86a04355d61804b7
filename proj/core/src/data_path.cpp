#include "chartcynics/data_path.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "chartcynics/numeric.hpp"
#include "chartcynics/text.hpp"

namespace chartcynics {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_table_line(const std::string& line) {
    const std::string t = trim(line);
    return t.size() >= 2 && t.front() == '|';
}

std::vector<std::string> split_cells(const std::string& line) {
    std::string t = trim(line);
    if (!t.empty() && t.front() == '|') t.erase(t.begin());
    if (!t.empty() && t.back() == '|') t.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    for (char c : t) {
        if (c == '|') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool is_separator_row(const std::vector<std::string>& cells) {
    if (cells.empty()) return false;
    for (const auto& c : cells) {
        if (c.empty()) return false;
        for (char ch : c) {
            if (ch != '-' && ch != ':' && ch != ' ') return false;
        }
        if (c.find('-') == std::string::npos) return false;
    }
    return true;
}

const std::vector<std::string>& exceeds_canvas_keywords() {
    static const std::vector<std::string> kws = {
        "exceed the canvas", "exceeds the canvas", "exceeding the canvas", "beyond the canvas",
        "outside the canvas", "off the canvas",    "exceed the plot area", "exceeds the plot area",
        "beyond the plot area"};
    return kws;
}

const std::array<std::string, 12>& month_names() {
    static const std::array<std::string, 12> names = {
        "january", "february", "march",     "april",   "may",      "june",
        "july",    "august",   "september", "october", "november", "december"};
    return names;
}

// Returns 1..12 or 0. Accepts full names and 3-letter abbreviations, with an
// optional trailing period.
int parse_month_name(std::string token) {
    token = to_lower(token);
    if (!token.empty() && token.back() == '.') token.pop_back();
    if (token.size() < 3) return 0;
    for (std::size_t m = 0; m < month_names().size(); ++m) {
        const std::string& full = month_names()[m];
        if (token == full || token == full.substr(0, 3)) return static_cast<int>(m) + 1;
    }
    return 0;
}

bool is_year_token(const std::string& t) {
    if (t.size() != 4) return false;
    for (char c : t)
        if (c < '0' || c > '9') return false;
    const int y = std::stoi(t);
    return y >= 1000 && y <= 2999;
}

std::vector<std::string> whitespace_split(const std::string& s) {
    std::vector<std::string> out;
    std::string token;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) out.push_back(std::move(token));
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
}

bool strip_partial_marker(std::string& label) {
    bool partial = false;
    std::string t = trim(label);
    if (!t.empty() && t.back() == '*') {
        partial = true;
        t.pop_back();
        t = trim(t);
    }
    const std::string lower = to_lower(t);
    auto strip_suffix = [&](const std::string& suffix) {
        if (lower.size() >= suffix.size() &&
            lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0) {
            t = trim(t.substr(0, t.size() - suffix.size()));
            return true;
        }
        return false;
    };
    if (strip_suffix("(partial)") || strip_suffix("to date") || strip_suffix("ytd"))
        partial = true;
    else if (lower.rfind("ytd ", 0) == 0) {
        partial = true;
        t = trim(t.substr(4));
    }
    label = t;
    return partial;
}

}  // namespace

std::string trust_name(Trust t) { return t == Trust::High ? "High" : "Low"; }

std::string integrity_flag_name(IntegrityFlag f) {
    switch (f) {
        case IntegrityFlag::ReversedOrder: return "ReversedOrder";
        case IntegrityFlag::ShuffledOrder: return "ShuffledOrder";
        case IntegrityFlag::IncompletePeriod: return "IncompletePeriod";
        case IntegrityFlag::ExceedsCanvas: return "ExceedsCanvas";
    }
    return "Unknown";
}

OcrDocument parse_ocr_markdown(const std::string& markdown) {
    OcrDocument doc;
    doc.source_markdown = markdown;

    std::vector<std::string> lines;
    std::string line;
    for (char c : markdown) {
        if (c == '\n') {
            lines.push_back(std::move(line));
            line.clear();
        } else if (c != '\r') {
            line.push_back(c);
        }
    }
    lines.push_back(std::move(line));

    std::size_t i = 0;
    while (i < lines.size()) {
        if (!is_table_line(lines[i])) {
            for (const auto& token : scan_numbers(lines[i])) {
                NumericEntity e;
                e.raw_token = token.raw;
                e.value = token.value;
                doc.entities.push_back(std::move(e));
            }
            ++i;
            continue;
        }

        TableData table;
        std::vector<std::vector<std::string>> block;
        while (i < lines.size() && is_table_line(lines[i])) {
            block.push_back(split_cells(lines[i]));
            ++i;
        }
        std::size_t r = 0;
        if (block.size() >= 2 && is_separator_row(block[1])) {
            table.headers = block[0];
            r = 2;
        }
        for (; r < block.size(); ++r) {
            if (!is_separator_row(block[r])) table.rows.push_back(block[r]);
        }

        for (std::size_t row = 0; row < table.rows.size(); ++row) {
            const auto& cells = table.rows[row];
            for (std::size_t col = 0; col < cells.size(); ++col) {
                if (cells.size() > 1 && col == 0) continue;  // category column
                auto v = parse_numeric(cells[col]);
                if (!v) continue;
                NumericEntity e;
                e.raw_token = cells[col];
                e.value = *v;
                e.row = static_cast<int>(row);
                e.col = static_cast<int>(col);
                if (cells.size() > 1) e.category = cells[0];
                if (col < table.headers.size()) e.series = table.headers[col];
                doc.entities.push_back(std::move(e));
            }
        }
        doc.tables.push_back(std::move(table));
    }
    return doc;
}

OcrDocument assign_trust(OcrDocument doc, const DiagnosticReport* report) {
    bool exceeds = false;
    if (report != nullptr) {
        for (const auto& kw : exceeds_canvas_keywords()) {
            if (contains_word(report->raw_text, kw)) {
                exceeds = true;
                break;
            }
        }
    }
    if (exceeds) doc.integrity_flags.insert(IntegrityFlag::ExceedsCanvas);

    bool complete_table = false;
    for (const auto& table : doc.tables) {
        if (table.rows.empty()) continue;
        bool all_rows_numeric = true;
        for (const auto& cells : table.rows) {
            bool row_has_value = false;
            for (std::size_t col = 0; col < cells.size(); ++col) {
                if (cells.size() > 1 && col == 0) continue;
                if (parse_numeric(cells[col])) {
                    row_has_value = true;
                    break;
                }
            }
            if (!row_has_value) {
                all_rows_numeric = false;
                break;
            }
        }
        if (all_rows_numeric) {
            complete_table = true;
            break;
        }
    }
    doc.trust = (complete_table && !exceeds) ? Trust::High : Trust::Low;
    return doc;
}

TemporalLabel parse_temporal_label(const std::string& label) {
    TemporalLabel out;
    std::string t = trim(label);
    if (t.empty()) return out;
    out.partial = strip_partial_marker(t);
    if (t.empty()) return out;

    // ISO date: YYYY-MM or YYYY-MM-DD
    {
        const auto tokens = scan_numbers(t);
        if ((tokens.size() == 2 || tokens.size() == 3) && t.find('-') != std::string::npos &&
            tokens[0].raw.size() == 4 && is_year_token(tokens[0].raw)) {
            bool pure = true;
            for (char c : t)
                if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-') pure = false;
            const int month = static_cast<int>(tokens[1].value);
            if (pure && month >= 1 && month <= 12) {
                const double day = tokens.size() == 3 ? tokens[2].value : 1.0;
                out.ok = true;
                out.has_year = true;
                out.key = tokens[0].value * 12.0 + (month - 1) + (day - 1.0) / 31.0;
                return out;
            }
        }
    }

    const auto words = whitespace_split(t);
    if (words.size() == 1) {
        if (is_year_token(words[0])) {
            out.ok = true;
            out.has_year = true;
            out.key = std::stod(words[0]) * 12.0;
            return out;
        }
        if (const int m = parse_month_name(words[0]); m > 0) {
            out.ok = true;
            out.month_only = true;
            out.key = m - 1;
            return out;
        }
        return out;
    }
    if (words.size() == 2) {
        // "Qn YYYY"
        const std::string w0 = to_lower(words[0]);
        if (w0.size() == 2 && w0[0] == 'q' && w0[1] >= '1' && w0[1] <= '4' &&
            is_year_token(words[1])) {
            out.ok = true;
            out.has_year = true;
            out.key = std::stod(words[1]) * 12.0 + (w0[1] - '1') * 3;
            return out;
        }
        // "March 2020" / "2020 March"
        if (const int m = parse_month_name(words[0]); m > 0 && is_year_token(words[1])) {
            out.ok = true;
            out.has_year = true;
            out.key = std::stod(words[1]) * 12.0 + (m - 1);
            return out;
        }
        if (const int m = parse_month_name(words[1]); m > 0 && is_year_token(words[0])) {
            out.ok = true;
            out.has_year = true;
            out.key = std::stod(words[0]) * 12.0 + (m - 1);
            return out;
        }
    }
    return out;
}

OcrDocument integrity_audit(OcrDocument doc) {
    for (const auto& table : doc.tables) {
        if (table.rows.empty()) continue;
        std::vector<TemporalLabel> labels;
        bool all_temporal = true;
        for (const auto& cells : table.rows) {
            if (cells.empty()) {
                all_temporal = false;
                break;
            }
            TemporalLabel tl = parse_temporal_label(cells[0]);
            if (!tl.ok) {
                all_temporal = false;
                break;
            }
            labels.push_back(tl);
        }
        if (!all_temporal || labels.empty()) continue;

        const bool mixed_month_year =
            std::any_of(labels.begin(), labels.end(),
                        [](const TemporalLabel& l) { return l.month_only; }) &&
            std::any_of(labels.begin(), labels.end(),
                        [](const TemporalLabel& l) { return l.has_year; });

        if (labels.size() >= 2 && !mixed_month_year) {
            bool non_decreasing = true, non_increasing = true, strictly_decreasing = true;
            for (std::size_t i = 1; i < labels.size(); ++i) {
                const double a = labels[i - 1].key, b = labels[i].key;
                if (a > b) non_decreasing = false;
                if (a < b) non_increasing = false;
                if (!(a > b)) strictly_decreasing = false;
            }
            if (strictly_decreasing)
                doc.integrity_flags.insert(IntegrityFlag::ReversedOrder);
            else if (!non_decreasing && !non_increasing)
                doc.integrity_flags.insert(IntegrityFlag::ShuffledOrder);
        }

        const TemporalLabel& last = labels.back();
        bool incomplete = last.partial;
        if (!incomplete && last.month_only && labels.size() >= 2) {
            incomplete = std::all_of(labels.begin(), labels.end() - 1,
                                     [](const TemporalLabel& l) { return l.has_year; });
        }
        if (incomplete) doc.integrity_flags.insert(IntegrityFlag::IncompletePeriod);
    }
    return doc;
}

std::vector<std::string> emit_calibration_directives(const OcrDocument& doc) {
    std::vector<std::string> out;
    if (doc.trust == Trust::Low)
        out.push_back("Treat OCR values as approximate; prefer diagnostic deductions.");
    else
        out.push_back("Treat labeled values as ground truth.");
    for (IntegrityFlag f : {IntegrityFlag::ReversedOrder, IntegrityFlag::ShuffledOrder,
                            IntegrityFlag::IncompletePeriod, IntegrityFlag::ExceedsCanvas}) {
        if (doc.integrity_flags.count(f) == 0) continue;
        switch (f) {
            case IntegrityFlag::ReversedOrder:
                out.push_back("Re-sort categories chronologically before comparing.");
                break;
            case IntegrityFlag::ShuffledOrder:
                out.push_back(
                    "Categories are out of natural order; match values to labels, not positions.");
                break;
            case IntegrityFlag::IncompletePeriod:
                out.push_back(
                    "The final period is incomplete; do not compare it against full periods.");
                break;
            case IntegrityFlag::ExceedsCanvas:
                out.push_back(
                    "Plotted marks exceed the canvas; rely on labeled values, not visual extent.");
                break;
        }
    }
    return out;
}

OcrDocument run_data_path(Backend& backend, const ChartSample& sample,
                          const std::vector<std::uint8_t>& full_png,
                          const DiagnosticReport* report) {
    std::string markdown = sample.ocr_markdown;
    if (markdown.empty()) {
        try {
            markdown = backend.ocr(sample.id, full_png);
        } catch (const BackendError& e) {
            throw StageError("ocr", e.what());
        }
    }
    OcrDocument doc = parse_ocr_markdown(markdown);
    doc = assign_trust(std::move(doc), report);
    doc = integrity_audit(std::move(doc));
    doc.directives = emit_calibration_directives(doc);
    return doc;
}

}  // namespace chartcynics
