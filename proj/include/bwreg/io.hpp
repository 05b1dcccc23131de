#pragma once

// Dataset files, configuration documents and result tables.
//
// Two dataset encodings are supported:
//  * structured text: one JSON document holding covariates and row-major
//    responses;
//  * tabular long: a directory with covariates.csv (sample_id,x_1..x_p) and
//    responses.csv (sample_id,row,col,value), 1-based indices, where a
//    missing lower-triangle entry is filled from its mirror.
// Doubles are written in shortest round-trip form, so write -> read is exact.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "bwreg/experiments.hpp"

namespace bwreg {

inline constexpr const char* kLibraryVersion = "1.0.0";

using Json = nlohmann::ordered_json;

enum class DatasetFormat { StructuredText, TabularLong };

const char* to_string(DatasetFormat f);
// "json"/"structured-text" or "long"/"tabular-long".
DatasetFormat parse_dataset_format(const std::string& name);
// A directory is tabular long, anything else structured text.
DatasetFormat detect_dataset_format(const std::filesystem::path& path);

struct DatasetFile {
  Dataset data;
  Json metadata = Json::object();
};

void write_dataset(const std::filesystem::path& path, const Dataset& data, DatasetFormat format,
                   const Json& metadata = Json::object());
DatasetFile load_dataset(const std::filesystem::path& path, DatasetFormat format);
DatasetFile load_dataset(const std::filesystem::path& path);

// Reads and writes JSON documents; parse errors carry line and column.
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

Json to_json(const SolverOptions& o);
Json to_json(const SimConfig& c);
Json to_json(const ExperimentConfig& c);
Json to_json(const TestResult& r);
Json to_json(const StudySummary& s);

// Missing keys keep their defaults; unknown keys and wrong types are
// InvalidConfig errors.
SolverOptions solver_options_from_json(const Json& j);
SimConfig sim_config_from_json(const Json& j);
ExperimentConfig experiment_config_from_json(const Json& j);
CovariateEmbedding parse_embedding(const std::string& name);

// CSV with a header row; numbers in round-trip form.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};
void write_table(const std::filesystem::path& path, const Table& t);

Table trial_table(const std::vector<TrialRecord>& records);
Table power_table(const std::vector<PowerRow>& rows);
Table qq_table(const QQTable& qq);
Table consistency_table(const std::vector<ConsistencyRow>& rows);

}  // namespace bwreg
