#include "ladder/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ladder/errors.hpp"

namespace ladder::io {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw std::logic_error("csv row width does not match header");
    append_row(out, row);
  }
  write_text(path, out);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty csv");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) throw ConfigError(path.string() + ": ragged csv row");
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable series_table(const ResultSeries& series) {
  CsvTable table{{"t", "bias", "n_R", "k2_L", "k2_R", "energy", "entropy", "norm"}, {}};
  table.rows.reserve(series.records.size());
  for (const auto& r : series.records)
    table.rows.push_back({format_real(r.t), format_real(r.bias), format_real(r.n_right), format_real(r.k2_left),
                          format_real(r.k2_right), format_real(r.energy), format_real(r.entropy),
                          format_real(r.norm)});
  return table;
}

CsvTable momentum_table(const ResultSeries& series, const MomentumGrid& grid) {
  CsvTable table;
  table.header = {"t", "leg"};
  for (int j = 0; j < grid.points; ++j) table.header.push_back("k=" + format_real(grid.k(j)));
  for (const auto& r : series.records) {
    for (const auto* leg : {&r.nk_left, &r.nk_right}) {
      if (leg->empty()) continue;
      std::vector<std::string> row{format_real(r.t), leg == &r.nk_left ? "L" : "R"};
      for (double v : *leg) row.push_back(format_real(v));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto probe = dir / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const JobRecord* RunManifest::find(const std::string& id) const {
  for (const auto& j : jobs)
    if (j.id == id) return &j;
  return nullptr;
}

void RunManifest::upsert(JobRecord job) {
  for (auto& j : jobs) {
    if (j.id == job.id) {
      j = std::move(job);
      return;
    }
  }
  jobs.push_back(std::move(job));
}

void RunManifest::add_file(const std::string& name) {
  if (std::find(files.begin(), files.end(), name) == files.end()) files.push_back(name);
}

bool RunManifest::all_ok() const {
  return std::all_of(jobs.begin(), jobs.end(), [](const JobRecord& j) { return j.status == "ok"; });
}

void to_json(nlohmann::json& j, const JobRecord& r) {
  j = {{"id", r.id}, {"parameter", r.parameter}, {"status", r.status},
       {"error", r.error}, {"files", r.files}, {"summary", r.summary}};
}

void from_json(const nlohmann::json& j, JobRecord& r) {
  j.at("id").get_to(r.id);
  j.at("parameter").get_to(r.parameter);
  j.at("status").get_to(r.status);
  r.error = j.value("error", "");
  r.files = j.value("files", std::vector<std::string>{});
  r.summary = j.value("summary", nlohmann::json::object());
}

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"command", m.command}, {"version", m.version},   {"config", m.config}, {"started", m.started},
       {"finished", m.finished}, {"threads", m.threads}, {"jobs", m.jobs},     {"files", m.files}};
}

void from_json(const nlohmann::json& j, RunManifest& m) {
  j.at("command").get_to(m.command);
  m.version = j.value("version", "");
  m.config = j.value("config", "");
  m.started = j.value("started", "");
  m.finished = j.value("finished", "");
  m.threads = j.value("threads", 1);
  m.jobs = j.value("jobs", std::vector<JobRecord>{});
  m.files = j.value("files", std::vector<std::string>{});
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_text(path, nlohmann::json(manifest).dump(2) + "\n");
}

std::optional<RunManifest> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in).get<RunManifest>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

}  // namespace ladder::io
