#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chartcynics/dataset.hpp"
#include "chartcynics/eval.hpp"
#include "chartcynics/image.hpp"
#include "chartcynics/prompts.hpp"
#include "chartcynics/reward.hpp"
#include "chartcynics/roi.hpp"
#include "chartcynics/service.hpp"
#include "chartcynics/summarizer.hpp"

namespace cc = chartcynics;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSampleFailures = 1;
constexpr int kExitUsage = 2;

struct RunArgs {
    std::string dataset;
    std::string backend_config;
    std::string config;
    std::string taxonomy;
    std::string out;
    std::string summary;
    int concurrency = 0;  // 0 means "use config"
    int limit = -1;
    bool timings = false;
};

struct EvalArgs {
    std::string results;
    std::string dataset;
    std::string out;
    std::string json_out;
    std::string format = "markdown";
    std::string name = "results";
};

struct ScoreArgs {
    std::string trace_file;
    std::string sample;
    std::string config;
    std::string taxonomy;
    double w_fact = -1, w_contra = -1, w_logic = -1, w_fmt = -1;
};

struct MixedArgs {
    std::string misleading;
    std::string standard;
    std::string out;
    std::uint64_t seed = 0;
    int per_side = 122;
};

struct CropArgs {
    std::string image;
    std::string detections;
    std::string out_dir;
    std::string config;
};

struct ServeArgs {
    std::string bind = "127.0.0.1:8080";
    std::string config;
    std::string taxonomy;
    std::string token_env;
};

struct ConvertArgs {
    std::string dataset;
    std::string oracle_csv;
    std::string out;
};

cc::PipelineConfig load_config_or_default(const std::string& path) {
    return path.empty() ? cc::PipelineConfig{} : cc::load_pipeline_config(path);
}

cc::Taxonomy load_taxonomy_or_default(const std::string& path) {
    return path.empty() ? cc::default_taxonomy() : cc::load_taxonomy(path);
}

std::string read_text_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_run(const RunArgs& args) {
    const cc::PipelineConfig config = load_config_or_default(args.config);
    const cc::Taxonomy taxonomy = load_taxonomy_or_default(args.taxonomy);
    const cc::TemplateSet templates = cc::resolve_templates(config.template_dir);
    const cc::BackendConfig backend_config = cc::load_backend_config(args.backend_config);
    const std::unique_ptr<cc::Backend> backend = cc::make_backend(backend_config);

    std::vector<cc::ChartSample> samples = cc::load_dataset(args.dataset);
    if (args.limit >= 0 && samples.size() > std::size_t(args.limit))
        samples.resize(std::size_t(args.limit));

    const int workers =
        std::max(1, args.concurrency > 0 ? args.concurrency : config.concurrency);

    std::vector<std::optional<cc::PipelineResult>> results(samples.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= samples.size()) break;
            results[i] = cc::run_pipeline(*backend, samples[i], config, taxonomy, templates);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<const cc::PipelineResult*> ordered;
    for (const auto& r : results) ordered.push_back(&*r);
    std::sort(ordered.begin(), ordered.end(),
              [](const cc::PipelineResult* a, const cc::PipelineResult* b) {
                  return a->sample_id < b->sample_id;
              });

    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write '" << args.out << "'\n";
        return kExitUsage;
    }
    int failed = 0, errored = 0;
    for (const cc::PipelineResult* r : ordered) {
        const bool fusion_failed =
            std::any_of(r->errors.begin(), r->errors.end(),
                        [](const cc::StageFailure& e) { return e.stage == "fusion"; });
        if (fusion_failed) {
            json errors = json::array();
            for (const auto& e : r->errors)
                errors.push_back({{"stage", e.stage}, {"message", e.message}});
            out << json{{"sample_id", r->sample_id}, {"errors", std::move(errors)}}.dump()
                << "\n";
            ++failed;
        } else {
            out << cc::pipeline_result_to_json(*r, args.timings).dump() << "\n";
            if (!r->errors.empty()) ++errored;
        }
    }
    out.close();

    const std::string summary_path =
        args.summary.empty() ? args.out + ".summary.json" : args.summary;
    {
        std::ofstream sum(summary_path, std::ios::binary);
        sum << json{{"total", samples.size()},
                    {"answered", samples.size() - std::size_t(failed)},
                    {"failed", failed},
                    {"degraded", errored}}
                   .dump()
            << "\n";
    }
    return (failed > 0 || errored > 0) ? kExitSampleFailures : kExitOk;
}

int cmd_eval(const EvalArgs& args) {
    const std::vector<cc::ChartSample> samples = cc::load_dataset(args.dataset);
    std::map<std::string, const cc::ChartSample*> by_id;
    for (const auto& s : samples) by_id[s.id] = &s;

    std::ifstream in(args.results, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open '" << args.results << "'\n";
        return kExitUsage;
    }
    std::vector<cc::PerSampleOutcome> outcomes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            std::cerr << args.results << " line " << line_no << ": " << e.what() << "\n";
            return kExitUsage;
        }
        const std::string id = j.value("sample_id", "");
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            std::cerr << "result id '" << id << "' not present in dataset\n";
            return kExitUsage;
        }
        cc::ExtractedAnswer answer;
        if (j.contains("answer") && j.value("abstain", true) == false) {
            answer = {j["answer"].get<std::string>(), false};
        }
        cc::PerSampleOutcome o;
        o.id = id;
        o.answer = answer.abstain ? "Abstain" : answer.label;
        o.outcome = cc::classify_outcome(answer, it->second->ground_truth, it->second->trap);
        outcomes.push_back(std::move(o));
    }
    if (outcomes.empty()) {
        std::cerr << "no results to evaluate\n";
        return kExitUsage;
    }

    const cc::EvalResult result = cc::aggregate(outcomes);
    const cc::ReportFormat format =
        args.format == "csv" ? cc::ReportFormat::Csv : cc::ReportFormat::Markdown;
    const std::string report = cc::render_report({{args.name, result}}, format);
    if (args.out.empty() || args.out == "-") {
        std::cout << report;
    } else {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write '" << args.out << "'\n";
            return kExitUsage;
        }
        out << report;
    }
    if (!args.json_out.empty()) {
        std::ofstream out(args.json_out, std::ios::binary);
        out << cc::eval_result_to_json(result).dump() << "\n";
    }
    return kExitOk;
}

int cmd_score(const ScoreArgs& args) {
    cc::PipelineConfig config = load_config_or_default(args.config);
    if (args.w_fact >= 0) config.weights.fact = args.w_fact;
    if (args.w_contra >= 0) config.weights.contra = args.w_contra;
    if (args.w_logic >= 0) config.weights.logic = args.w_logic;
    if (args.w_fmt >= 0) config.weights.fmt = args.w_fmt;
    const cc::Taxonomy taxonomy = load_taxonomy_or_default(args.taxonomy);

    const std::string trace_text = read_text_file(args.trace_file);
    const json sample_json = json::parse(read_text_file(args.sample));
    const cc::ChartSample sample = cc::sample_from_json(sample_json);

    const cc::ReasoningTrace trace = cc::parse_trace(trace_text);
    const cc::RewardBreakdown breakdown = cc::total_reward(trace, sample, config, taxonomy);
    std::cout << cc::reward_to_json(breakdown).dump() << "\n";
    return kExitOk;
}

int cmd_mixed_sample(const MixedArgs& args) {
    const auto misleading = cc::load_dataset(args.misleading);
    const auto standard = cc::load_dataset(args.standard);
    const auto sampled =
        cc::sample_mixed_benchmark(misleading, standard, args.seed, args.per_side);
    cc::save_dataset(args.out, sampled);
    std::cout << "wrote " << sampled.size() << " samples to " << args.out << "\n";
    return kExitOk;
}

int cmd_crop(const CropArgs& args) {
    const cc::PipelineConfig config = load_config_or_default(args.config);
    const cc::Image image = cc::decode_png(args.image);
    const auto detections = cc::load_detections(args.detections);
    const auto rois =
        cc::extract_rois(detections, image.width, image.height, config.roi_padding);
    std::filesystem::create_directories(args.out_dir);
    for (const auto& [kind, region] : rois) {
        const std::string path =
            (std::filesystem::path(args.out_dir) / (cc::roi_kind_name(kind) + ".png")).string();
        cc::write_png(path, cc::crop(image, region.rect));
        std::cout << cc::roi_kind_name(kind) << ": rect (" << region.rect.x << ", "
                  << region.rect.y << ", " << region.rect.w << ", " << region.rect.h << ") -> "
                  << path << "\n";
    }
    return kExitOk;
}

int cmd_serve(const ServeArgs& args) {
    cc::ServiceConfig config;
    config.pipeline = load_config_or_default(args.config);
    config.taxonomy = load_taxonomy_or_default(args.taxonomy);
    if (!args.token_env.empty()) {
        const char* token = std::getenv(args.token_env.c_str());
        if (token == nullptr || *token == '\0') {
            std::cerr << "environment variable '" << args.token_env << "' is not set\n";
            return kExitUsage;
        }
        config.bearer_token = token;
    }

    const auto colon = args.bind.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "--bind must look like host:port\n";
        return kExitUsage;
    }
    const std::string host = args.bind.substr(0, colon);
    const int port = std::stoi(args.bind.substr(colon + 1));

    cc::RewardService service(std::move(config));
    std::cout << "listening on " << host << ":" << port << "\n";
    if (!service.listen(host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_convert(const ConvertArgs& args) {
    std::vector<cc::ChartSample> samples = cc::load_dataset(args.dataset);
    const auto oracle = cc::load_oracle_csv(args.oracle_csv);
    for (auto& s : samples) {
        if (auto it = oracle.find(s.id); it != oracle.end()) s.oracle_table = it->second;
    }
    cc::save_dataset(args.out, samples);
    std::cout << "wrote " << samples.size() << " samples to " << args.out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ChartCynics dual-path misleading-chart QA engine"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run the dual-path pipeline over a dataset");
    run->add_option("--dataset", run_args.dataset, "Dataset JSONL path")->required();
    run->add_option("--backend-config", run_args.backend_config, "Backend config JSON path")
        ->required();
    run->add_option("--config", run_args.config, "Pipeline config JSON path");
    run->add_option("--taxonomy", run_args.taxonomy, "Taxonomy JSON path");
    run->add_option("--out", run_args.out, "Output results JSONL path")->required();
    run->add_option("--summary", run_args.summary,
                    "Summary JSON path (default: <out>.summary.json)");
    run->add_option("--concurrency", run_args.concurrency, "Worker count override");
    run->add_option("--limit", run_args.limit, "Process only the first N samples");
    run->add_flag("--timings", run_args.timings, "Include per-stage timings in results");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Score results against ground truth");
    eval->add_option("--results", eval_args.results, "Results JSONL from 'run'")->required();
    eval->add_option("--dataset", eval_args.dataset, "Dataset JSONL path")->required();
    eval->add_option("--out", eval_args.out, "Report output path ('-' for stdout)");
    eval->add_option("--json-out", eval_args.json_out, "Results JSON output path");
    eval->add_option("--format", eval_args.format, "Report format: markdown or csv")
        ->check(CLI::IsMember({"markdown", "csv"}));
    eval->add_option("--name", eval_args.name, "Row name in the report");

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "Score a reasoning trace against one sample");
    score->add_option("--trace-file", score_args.trace_file, "Trace text path ('-' for stdin)")
        ->required();
    score->add_option("--sample", score_args.sample, "Sample JSON path")->required();
    score->add_option("--config", score_args.config, "Pipeline config JSON path");
    score->add_option("--taxonomy", score_args.taxonomy, "Taxonomy JSON path");
    score->add_option("--w-fact", score_args.w_fact, "Override w_fact");
    score->add_option("--w-contra", score_args.w_contra, "Override w_contra");
    score->add_option("--w-logic", score_args.w_logic, "Override w_logic");
    score->add_option("--w-fmt", score_args.w_fmt, "Override w_fmt");

    MixedArgs mixed_args;
    auto* mixed = app.add_subcommand("mixed-sample", "Draw the stratified mixed benchmark");
    mixed->add_option("--misleading", mixed_args.misleading, "Misleading pool JSONL")->required();
    mixed->add_option("--standard", mixed_args.standard, "Standard pool JSONL")->required();
    mixed->add_option("--seed", mixed_args.seed, "RNG seed");
    mixed->add_option("--per-side", mixed_args.per_side, "Samples per side");
    mixed->add_option("--out", mixed_args.out, "Output JSONL path")->required();

    CropArgs crop_args;
    auto* crop = app.add_subcommand("crop", "Write padded ROI crops as PNGs");
    crop->add_option("--image", crop_args.image, "Chart PNG path")->required();
    crop->add_option("--detections", crop_args.detections, "Detections JSON path")->required();
    crop->add_option("--out-dir", crop_args.out_dir, "Output directory")->required();
    crop->add_option("--config", crop_args.config, "Pipeline config JSON path");

    ServeArgs serve_args;
    auto* serve = app.add_subcommand("serve", "Run the reward-scoring HTTP service");
    serve->add_option("--bind", serve_args.bind, "host:port to listen on");
    serve->add_option("--config", serve_args.config, "Pipeline config JSON path");
    serve->add_option("--taxonomy", serve_args.taxonomy, "Taxonomy JSON path");
    serve->add_option("--token-env", serve_args.token_env,
                      "Env var holding the bearer token clients must send");

    ConvertArgs convert_args;
    auto* convert = app.add_subcommand("convert", "Attach CSV oracle rows to a dataset");
    convert->add_option("--dataset", convert_args.dataset, "Dataset JSONL path")->required();
    convert->add_option("--oracle-csv", convert_args.oracle_csv,
                        "CSV with header id,category,series,value")
        ->required();
    convert->add_option("--out", convert_args.out, "Output JSONL path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(run)) return cmd_run(run_args);
        if (app.got_subcommand(eval)) return cmd_eval(eval_args);
        if (app.got_subcommand(score)) return cmd_score(score_args);
        if (app.got_subcommand(mixed)) return cmd_mixed_sample(mixed_args);
        if (app.got_subcommand(crop)) return cmd_crop(crop_args);
        if (app.got_subcommand(serve)) return cmd_serve(serve_args);
        if (app.got_subcommand(convert)) return cmd_convert(convert_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
