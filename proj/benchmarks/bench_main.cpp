#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "chartcynics/data_path.hpp"
#include "chartcynics/numeric.hpp"
#include "chartcynics/reward.hpp"
#include "chartcynics/summarizer.hpp"
#include "chartcynics/types.hpp"

namespace cc = chartcynics;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1000.0);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

std::string synthetic_markdown(int rows) {
    std::ostringstream out;
    out << "| Year | Deaths | Cases |\n|---|---|---|\n";
    for (int i = 0; i < rows; ++i)
        out << "| " << 2000 + i << " | " << 800 + 7 * i << " | " << 12000 + 31 * i << " |\n";
    return out.str();
}

std::string synthetic_trace() {
    std::ostringstream out;
    out << "<Visual_Heuristic>\n";
    out << "Step 1: Perception Audit. The y-axis runs from high to low, an inverted axis.\n";
    out << "Step 2: Numerical Anchoring. Reading the labels directly from the table.\n";
    out << "</Visual_Heuristic>\n<OCR_Validation>\n";
    out << "Deaths were 873 in 2005 and rose to 1021 by 2010; cases grew from 12000 to 12155.\n";
    out << "Step 3: Deception Mapping. The visual slope contradicts the labeled values.\n";
    out << "</OCR_Validation>\n<Ambiguity_Resolution>\n";
    out << "Step 4: Sufficiency & Integrity Check. The table is complete.\n";
    out << "Step 5: Adversarial Trap Rejection. The downhill reading is the trap.\n";
    out << "</Ambiguity_Resolution>\n<Final_Answer>\nA\n</Final_Answer>\n";
    return out.str();
}

cc::ChartSample synthetic_sample() {
    cc::ChartSample s;
    s.id = "bench";
    s.question = "Did deaths increase?";
    s.options = {{"A", "Yes"}, {"B", "No"}};
    s.ground_truth = "A";
    s.trap = "B";
    s.misleader = "inverted_axis";
    s.chart_type = "line";
    for (int i = 0; i < 6; ++i) {
        s.oracle_table.push_back(
            {std::to_string(2005 + i), "Deaths", 873.0 + 30.0 * i});
    }
    s.explanation = "The y-axis is inverted so the rising series appears to fall.";
    return s;
}

void BM_Spearman(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    const auto a = random_vector(n, 1);
    const auto b = random_vector(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(cc::spearman(a, b));
}
BENCHMARK(BM_Spearman)->Arg(8)->Arg(64)->Arg(512);

void BM_ScanNumbers(benchmark::State& state) {
    const std::string text =
        "Revenue grew from $1,200.50 in 2005 to $2,450.75 in 2010, a 104.1% rise "
        "tracked across 12,345 accounts and -4.2% churn.";
    for (auto _ : state) benchmark::DoNotOptimize(cc::scan_numbers(text));
}
BENCHMARK(BM_ScanNumbers);

void BM_ParseOcrMarkdown(benchmark::State& state) {
    const std::string markdown = synthetic_markdown(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cc::parse_ocr_markdown(markdown));
}
BENCHMARK(BM_ParseOcrMarkdown)->Arg(8)->Arg(64);

void BM_TotalReward(benchmark::State& state) {
    const cc::ChartSample sample = synthetic_sample();
    const cc::PipelineConfig config;
    const cc::Taxonomy taxonomy = cc::default_taxonomy();
    const cc::ReasoningTrace trace = cc::parse_trace(synthetic_trace());
    for (auto _ : state)
        benchmark::DoNotOptimize(cc::total_reward(trace, sample, config, taxonomy));
}
BENCHMARK(BM_TotalReward);

void BM_ParseTrace(benchmark::State& state) {
    const std::string text = synthetic_trace();
    for (auto _ : state) benchmark::DoNotOptimize(cc::parse_trace(text));
}
BENCHMARK(BM_ParseTrace);

}  // namespace

BENCHMARK_MAIN();
