#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartcynics/types.hpp"

namespace chartcynics {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSONL, one sample per line. Errors name the line number and the offending
// field; duplicate ids are rejected.
std::vector<ChartSample> load_dataset(const std::string& path);
std::vector<ChartSample> parse_dataset(std::istream& in, const std::string& origin);

ChartSample sample_from_json(const nlohmann::json& j);

// Canonical form: optional fields are omitted when empty, so a round trip
// through serialize/parse yields an equal sample.
nlohmann::json sample_to_json(const ChartSample& s);

void save_dataset(const std::string& path, const std::vector<ChartSample>& samples);

Taxonomy load_taxonomy(const std::string& path);
Taxonomy taxonomy_from_json(const nlohmann::json& j);
nlohmann::json taxonomy_to_json(const Taxonomy& t);

std::vector<Detection> load_detections(const std::string& path);
std::vector<Detection> detections_from_json(const nlohmann::json& j);
nlohmann::json detections_to_json(const std::vector<Detection>& ds);

PipelineConfig load_pipeline_config(const std::string& path);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
nlohmann::json pipeline_config_to_json(const PipelineConfig& c);

// CSV with header "id,category,series,value"; rows grouped by sample id.
std::map<std::string, std::vector<OracleRow>> load_oracle_csv(const std::string& path);

}  // namespace chartcynics
