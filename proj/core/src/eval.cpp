#include "chartcynics/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace chartcynics {

using nlohmann::json;

namespace {

std::string format2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// std::shuffle's distribution is implementation-defined; this Fisher-Yates
// with an explicit bounded draw is reproducible across standard libraries.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % bound);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % bound;
}

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = bounded_draw(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

bool sample_id_less(const ChartSample& a, const ChartSample& b) { return a.id < b.id; }

}  // namespace

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Correct: return "Correct";
        case Outcome::WrongMisled: return "WM";
        case Outcome::WrongOther: return "WO";
    }
    return "WO";
}

Outcome classify_outcome(const ExtractedAnswer& answer, const std::string& ground_truth,
                         const std::string& trap) {
    if (!answer.abstain && answer.label == ground_truth) return Outcome::Correct;
    if (!answer.abstain && !trap.empty() && answer.label == trap) return Outcome::WrongMisled;
    return Outcome::WrongOther;
}

double round2(double value) { return std::floor(value * 100.0 + 0.5) / 100.0; }

EvalResult aggregate(const std::vector<PerSampleOutcome>& outcomes) {
    if (outcomes.empty()) throw EvalError("aggregate: no outcomes");
    EvalResult r;
    r.per_sample = outcomes;
    for (const auto& o : outcomes) {
        switch (o.outcome) {
            case Outcome::Correct: ++r.counts.correct; break;
            case Outcome::WrongMisled: ++r.counts.wrong_misled; break;
            case Outcome::WrongOther: ++r.counts.wrong_other; break;
        }
    }
    r.counts.total = static_cast<int>(outcomes.size());
    const double n = r.counts.total;
    r.percentages.acc = round2(100.0 * r.counts.correct / n);
    r.percentages.wm = round2(100.0 * r.counts.wrong_misled / n);
    r.percentages.wo = round2(100.0 * r.counts.wrong_other / n);
    return r;
}

json eval_result_to_json(const EvalResult& result) {
    json per_sample = json::array();
    for (const auto& o : result.per_sample)
        per_sample.push_back(
            {{"id", o.id}, {"answer", o.answer}, {"outcome", outcome_name(o.outcome)}});
    return json{{"per_sample", std::move(per_sample)},
                {"counts",
                 {{"correct", result.counts.correct},
                  {"wm", result.counts.wrong_misled},
                  {"wo", result.counts.wrong_other},
                  {"total", result.counts.total}}},
                {"percentages",
                 {{"acc", result.percentages.acc},
                  {"wm", result.percentages.wm},
                  {"wo", result.percentages.wo}}}};
}

std::vector<ChartSample> sample_mixed_benchmark(const std::vector<ChartSample>& misleading_pool,
                                                const std::vector<ChartSample>& standard_pool,
                                                std::uint64_t seed, int per_side) {
    std::mt19937_64 rng(seed);

    std::map<std::string, std::vector<ChartSample>> categories;
    for (const auto& s : misleading_pool)
        categories[s.misleader + "|" + s.chart_type].push_back(s);
    for (auto& [key, members] : categories) std::sort(members.begin(), members.end(), sample_id_less);

    std::vector<ChartSample> picked;
    for (auto& [key, members] : categories) {
        if (static_cast<int>(picked.size()) >= per_side) break;
        if (members.size() < 2)
            throw EvalError("misleading category '" + key + "' has fewer than 2 members");
        deterministic_shuffle(members, rng);
        picked.push_back(members[0]);
        picked.push_back(members[1]);
    }

    std::map<std::string, std::vector<ChartSample>> combos;
    for (const auto& s : standard_pool) combos[s.chart_type].push_back(s);
    if (combos.empty()) throw EvalError("standard pool is empty");
    std::vector<std::string> combo_names;
    for (auto& [key, members] : combos) {
        std::sort(members.begin(), members.end(), sample_id_less);
        deterministic_shuffle(members, rng);
        combo_names.push_back(key);
    }

    std::vector<ChartSample> standard_picked;
    std::map<std::string, std::size_t> cursor;
    std::size_t round = 0;
    while (static_cast<int>(standard_picked.size()) < per_side) {
        const std::string& combo = combo_names[round % combo_names.size()];
        ++round;
        std::size_t& at = cursor[combo];
        if (at >= combos[combo].size())
            throw EvalError("standard combo '" + combo + "' ran out of members");
        standard_picked.push_back(combos[combo][at]);
        ++at;
    }

    std::vector<ChartSample> out;
    out.reserve(picked.size() + standard_picked.size());
    out.insert(out.end(), picked.begin(), picked.end());
    out.insert(out.end(), standard_picked.begin(), standard_picked.end());
    deterministic_shuffle(out, rng);
    return out;
}

std::string render_report(const std::map<std::string, EvalResult>& results, ReportFormat format) {
    if (results.empty()) throw EvalError("render_report: no results");
    std::string out;
    if (format == ReportFormat::Csv) {
        out = "name,acc,wm,wo\n";
        for (const auto& [name, r] : results) {
            out += name + "," + format2(r.percentages.acc) + "," + format2(r.percentages.wm) +
                   "," + format2(r.percentages.wo) + "\n";
        }
        return out;
    }
    out = "| name | Acc↑ | WM↓ | WO↓ |\n|---|---|---|---|\n";
    for (const auto& [name, r] : results) {
        out += "| " + name + " | " + format2(r.percentages.acc) + " | " +
               format2(r.percentages.wm) + " | " + format2(r.percentages.wo) + " |\n";
    }
    return out;
}

}  // namespace chartcynics
