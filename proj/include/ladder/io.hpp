#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ladder/observables.hpp"

// CSV tables (17 significant digits) and the JSON run manifest.
namespace ladder::io {

std::string format_real(double v);
std::string format_real(const std::optional<double>& v);  // empty cell when unset

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a column; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

// Writes via a temporary file and rename, so readers never see half a table.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

// Columns t, bias, n_R, k2_L, k2_R, energy, entropy, norm.
CsvTable series_table(const ResultSeries& series);

// Wide n_k table: t, leg, then one column per grid point k_j.
CsvTable momentum_table(const ResultSeries& series, const MomentumGrid& grid);

// Creates `dir` if needed and checks that files can be written there.
// Throws ConfigError otherwise.
void prepare_output_dir(const std::filesystem::path& dir);

std::string timestamp_utc();

struct JobRecord {
  std::string id;
  double parameter = 0.0;
  std::string status;  // "ok" or "failed"
  std::string error;
  std::vector<std::string> files;
  nlohmann::json summary = nlohmann::json::object();  // column -> formatted cell
};

struct RunManifest {
  std::string command;
  std::string version;
  std::string config;  // serialized RunConfig
  std::string started;
  std::string finished;
  int threads = 1;
  std::vector<JobRecord> jobs;
  std::vector<std::string> files;  // every file written by the run

  const JobRecord* find(const std::string& id) const;
  void upsert(JobRecord job);
  void add_file(const std::string& name);
  bool all_ok() const;
};

void to_json(nlohmann::json& j, const JobRecord& r);
void from_json(const nlohmann::json& j, JobRecord& r);
void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
std::optional<RunManifest> read_manifest(const std::filesystem::path& path);

}  // namespace ladder::io
