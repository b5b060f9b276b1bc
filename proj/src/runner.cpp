#include "ladder/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <ostream>

#include "ladder/doublewell.hpp"
#include "ladder/errors.hpp"
#include "ladder/protocols.hpp"
#include "ladder/thermal.hpp"

namespace ladder {

namespace fs = std::filesystem;
using io::format_real;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"basis-info", "sweep",      "scan",    "quench",
                                              "quench-scan", "doublewell", "thermal", "plot"};
  return names;
}

int resolve_threads(std::optional<int> flag, const RunConfig& config) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--threads must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("LADDER_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError(std::string("LADDER_THREADS must be a positive integer, got ") + env);
    return static_cast<int>(v);
  }
  if (config.run.threads > 0) return config.run.threads;
  return std::max(1, omp_get_num_procs());
}

fs::path manifest_path(const RunConfig& config, const std::string& command) {
  std::string name = command;
  std::replace(name.begin(), name.end(), '-', '_');
  return config.run.out / (name + "_manifest.json");
}

namespace {

std::string yes_no(bool v) { return v ? "1" : "0"; }

// CSV cells must not contain separators or line breaks.
std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string index_tag(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return buf;
}

LadderSystem make_system(const RunConfig& c) {
  const auto& m = c.model;
  return LadderSystem(m.hamiltonian, FockBasis(LadderGeometry{m.rungs}, m.particles, m.occupation_cap()),
                      m.points_per_site);
}

// Shared bookkeeping of one execute() call.
struct Run {
  const RunConfig& config;
  std::string command;
  ExecuteOptions options;
  std::ostream& log;
  fs::path manifest_file;
  io::RunManifest manifest;
  std::optional<io::RunManifest> previous;

  Run(const RunConfig& c, std::string cmd, const ExecuteOptions& o, std::ostream& l)
      : config(c), command(std::move(cmd)), options(o), log(l), manifest_file(manifest_path(c, command)) {
    manifest.command = command;
    manifest.version = LADDER_VERSION;
    manifest.config = serialize(c);
    manifest.started = io::timestamp_utc();
    manifest.threads = o.threads;
    if (o.resume) {
      previous = io::read_manifest(manifest_file);
      if (previous && previous->config != manifest.config)
        throw ConfigError("--resume: " + manifest_file.string() + " was written for a different configuration");
    }
  }

  // Finished job from the previous manifest, if resuming.
  const io::JobRecord* done(const std::string& id) const {
    if (!previous) return nullptr;
    const auto* j = previous->find(id);
    return j && j->status == "ok" ? j : nullptr;
  }

  void write_table(const std::string& name, const io::CsvTable& table) {
    io::write_csv(config.run.out / name, table);
    manifest.add_file(name);
  }

  void save() {
    manifest.add_file(manifest_file.filename().string());
    io::write_manifest(manifest_file, manifest);
  }

  void finish() {
    manifest.finished = io::timestamp_utc();
    save();
  }

  // Summary table in job order from the manifest's per-job cells.
  io::CsvTable summary(const std::vector<std::string>& header, const std::vector<std::string>& ids) const {
    io::CsvTable table{header, {}};
    for (const auto& id : ids) {
      const auto* job = manifest.find(id);
      std::vector<std::string> row;
      for (const auto& col : header) {
        std::string cell;
        if (job && job->summary.contains(col)) cell = job->summary.at(col).get<std::string>();
        row.push_back(cell);
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  }
};

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.bias_magnitude = c.sweep.bias_magnitude;
  o.rescale = c.sweep.rescale;
  o.hold_periods = c.sweep.hold_periods;
  o.samples_per_period = c.sweep.samples_per_period;
  o.prominence = c.sweep.prominence;
  o.sampling = {c.sweep.momentum, c.sweep.entropy};
  return o;
}

QuenchOptions quench_options(const RunConfig& c) {
  QuenchOptions o;
  o.duration = c.quench.duration;
  o.prominence = c.quench.prominence;
  o.low_density_threshold = c.quench.low_density_threshold;
  o.sampling = {c.quench.momentum, c.quench.entropy};
  return o;
}

StateVector prepare(const RunConfig& c, const LadderSystem& system) {
  return initial_state(system, c.run.initial_bias, c.run.seed, c.run.ground_state_tol);
}

const std::vector<std::string> kSweepHeader{
    "direction", "alpha",         "inverse_rate",   "r",     "n_R",      "amplitude",      "periods",
    "resolved",  "n_R_sweep_end", "k2_L_initial",   "k2_L_sweep_end", "k2_R_sweep_end", "steps", "substeps",
    "max_norm_drift", "status",   "error"};

void run_sweeps(Run& run, std::vector<double> alphas, const std::string& prefix) {
  const auto& c = run.config;
  std::sort(alphas.begin(), alphas.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  std::vector<std::string> ids;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    ids.push_back("alpha=" + format_real(alphas[i]));
    if (const auto* job = run.done(ids.back())) {
      run.manifest.upsert(*job);
      for (const auto& f : job->files) run.manifest.add_file(f);
    } else {
      pending.push_back(i);
    }
  }
  run.log << run.command << ": " << alphas.size() << " sweep(s), " << pending.size() << " to run\n";

  if (!pending.empty()) {
    const LadderSystem system = make_system(c);
    const StateVector psi0 = prepare(c, system);
    std::vector<double> rates;
    for (auto i : pending) rates.push_back(std::abs(alphas[i]));
    const RescalePolicy policy{c.sweep.rescale};
    const int job_threads = std::min<int>(run.options.threads, static_cast<int>(rates.size()));

    rate_scan(system, psi0, c.sweep.direction, rates, policy, sweep_options(c), c.propagation, job_threads,
              [&](std::size_t k, const ScanRow<SweepResult>& row) {
                const std::size_t i = pending[k];
                io::JobRecord job;
                job.id = ids[i];
                job.parameter = alphas[i];
                auto& s = job.summary;
                s["direction"] = to_string(c.sweep.direction);
                s["alpha"] = format_real(alphas[i]);
                s["inverse_rate"] = format_real(2.0 * std::numbers::pi / std::abs(alphas[i]));
                if (row.result) {
                  const auto& r = *row.result;
                  job.status = "ok";
                  s["r"] = format_real(r.rescale);
                  s["n_R"] = format_real(r.transfer);
                  s["amplitude"] = format_real(r.amplitude);
                  s["periods"] = std::to_string(r.periods);
                  s["resolved"] = yes_no(r.resolved);
                  s["n_R_sweep_end"] = format_real(r.at_sweep_end.n_right);
                  s["k2_L_initial"] = format_real(r.series.records.front().k2_left);
                  s["k2_L_sweep_end"] = format_real(r.at_sweep_end.k2_left);
                  s["k2_R_sweep_end"] = format_real(r.at_sweep_end.k2_right);
                  s["steps"] = std::to_string(r.series.diagnostics.steps);
                  s["substeps"] = std::to_string(r.series.diagnostics.substeps);
                  s["max_norm_drift"] = format_real(r.series.diagnostics.max_norm_drift);
                  const std::string series = prefix + "_series_" + index_tag(i) + ".csv";
                  run.write_table(series, io::series_table(r.series));
                  job.files.push_back(series);
                  if (c.sweep.momentum) {
                    const std::string nk = prefix + "_nk_" + index_tag(i) + ".csv";
                    run.write_table(nk, io::momentum_table(r.series, system.grid));
                    job.files.push_back(nk);
                  }
                  run.log << "  " << job.id << "  n_R = " << s["n_R"].get<std::string>() << "\n";
                } else {
                  job.status = "failed";
                  job.error = row.error;
                  s["error"] = sanitize(row.error);
                  run.log << "  " << job.id << "  failed: " << row.error << "\n";
                }
                s["status"] = job.status;
                run.manifest.upsert(std::move(job));
                run.save();
              });
  }
  run.write_table(prefix + "_summary.csv", run.summary(kSweepHeader, ids));
}

const std::vector<std::string> kQuenchHeader{
    "delta_f", "n_R",   "n_R_amplitude", "t_begin",      "t_end",          "periods",        "resolved",
    "k2_L",    "k2_R",  "energy",        "energy_drift", "low_density_rule", "max_norm_drift", "status", "error"};

void run_quenches(Run& run, std::vector<double> biases, const std::string& prefix) {
  const auto& c = run.config;
  std::vector<std::string> ids;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < biases.size(); ++i) {
    ids.push_back("delta_f=" + format_real(biases[i]));
    if (const auto* job = run.done(ids.back())) {
      run.manifest.upsert(*job);
      for (const auto& f : job->files) run.manifest.add_file(f);
    } else {
      pending.push_back(i);
    }
  }
  run.log << run.command << ": " << biases.size() << " quench(es), " << pending.size() << " to run\n";

  if (!pending.empty()) {
    const LadderSystem system = make_system(c);
    const StateVector psi0 = prepare(c, system);
    std::vector<double> todo;
    for (auto i : pending) todo.push_back(biases[i]);
    const int job_threads = std::min<int>(run.options.threads, static_cast<int>(todo.size()));

    quench_scan(system, psi0, todo, quench_options(c), c.propagation, job_threads,
                [&](std::size_t k, const ScanRow<QuenchResult>& row) {
                  const std::size_t i = pending[k];
                  io::JobRecord job;
                  job.id = ids[i];
                  job.parameter = biases[i];
                  auto& s = job.summary;
                  s["delta_f"] = format_real(biases[i]);
                  if (row.result) {
                    const auto& r = *row.result;
                    job.status = "ok";
                    s["n_R"] = format_real(r.n_right.mean);
                    s["n_R_amplitude"] = format_real(r.n_right.amplitude);
                    s["t_begin"] = format_real(r.n_right.t_begin);
                    s["t_end"] = format_real(r.n_right.t_end);
                    s["periods"] = std::to_string(r.n_right.periods);
                    s["resolved"] = yes_no(r.n_right.resolved);
                    if (c.quench.momentum) {
                      s["k2_L"] = format_real(r.k2_left.mean);
                      s["k2_R"] = format_real(r.k2_right.mean);
                    }
                    s["energy"] = format_real(r.energy);
                    s["energy_drift"] = format_real(r.energy_drift);
                    s["low_density_rule"] = yes_no(r.low_density_rule);
                    s["max_norm_drift"] = format_real(r.series.diagnostics.max_norm_drift);
                    const std::string series = prefix + "_series_" + index_tag(i) + ".csv";
                    run.write_table(series, io::series_table(r.series));
                    job.files.push_back(series);
                    if (c.quench.momentum) {
                      const std::string nk = prefix + "_nk_" + index_tag(i) + ".csv";
                      run.write_table(nk, io::momentum_table(r.series, system.grid));
                      job.files.push_back(nk);
                    }
                    run.log << "  " << job.id << "  n_R = " << s["n_R"].get<std::string>() << "\n";
                  } else {
                    job.status = "failed";
                    job.error = row.error;
                    s["error"] = sanitize(row.error);
                    run.log << "  " << job.id << "  failed: " << row.error << "\n";
                  }
                  s["status"] = job.status;
                  run.manifest.upsert(std::move(job));
                  run.save();
                });
  }
  run.write_table(prefix + "_summary.csv", run.summary(kQuenchHeader, ids));
}

void basis_info(Run& run) {
  const auto& c = run.config;
  const LadderSystem system = make_system(c);
  const auto& h = system.hamiltonian;
  const std::size_t nnz = h.static_part().values().size();
  nlohmann::json info{{"L_s", c.model.rungs},
                      {"N", c.model.particles},
                      {"n_max", c.model.occupation_cap()},
                      {"boundary", to_string(c.model.hamiltonian.boundary)},
                      {"dimension", system.basis.dimension()},
                      {"basis_bytes", system.basis.memory_bytes()},
                      {"hamiltonian_nnz", nnz},
                      {"hamiltonian_bytes", nnz * (sizeof(double) + sizeof(std::uint32_t)) +
                                                (system.basis.dimension() + 1) * sizeof(std::size_t)},
                      {"dense_fits", system.basis.dimension() <= c.thermal.dense_cap}};
  io::write_text(c.run.out / "basis_info.json", info.dump(2) + "\n");
  run.manifest.add_file("basis_info.json");
  run.log << info.dump(2) << "\n";
  run.manifest.upsert({"basis", 0.0, "ok", "", {"basis_info.json"}, info});
}

void doublewell_table(Run& run) {
  const auto& c = run.config;
  const auto& d = c.doublewell;
  struct Job {
    int n;
    double x;
  };
  std::vector<Job> jobs;
  for (int n : d.particles)
    for (double x : d.inverse_rate_grid) jobs.push_back({n, x});

  const std::vector<std::string> header{"n",           "U",                  "inverse_rate",  "alpha",
                                        "p_lz",        "gs_analytic",        "inverse_analytic",
                                        "gs_integrated", "inverse_integrated", "status",        "error"};
  io::CsvTable table{header, std::vector<std::vector<std::string>>(jobs.size())};
  std::vector<std::string> errors(jobs.size());
  doublewell::IntegrationOptions integration;
  integration.bias_magnitude = d.bias_magnitude;
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, run.options.threads))
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto [n, x] = jobs[i];
    const double alpha = 2.0 * std::numbers::pi / x;
    std::vector<std::string> row{std::to_string(n), format_real(d.interaction), format_real(x), format_real(alpha)};
    try {
      row.push_back(format_real(doublewell::p_lz(alpha)));
      row.push_back(format_real(doublewell::gs_transfer(n, alpha)));
      row.push_back(format_real(doublewell::inverse_transfer(n, alpha, d.interaction)));
      if (d.integrate) {
        for (auto dir : {SweepDirection::GroundState, SweepDirection::Inverse})
          row.push_back(format_real(
              doublewell::integrate_doublewell(n, d.interaction, alpha, dir, integration, c.propagation)));
      } else {
        row.insert(row.end(), {"", ""});
      }
      row.insert(row.end(), {"ok", ""});
    } catch (const std::exception& e) {
      row.resize(9);
      row.insert(row.end(), {"failed", sanitize(e.what())});
      errors[i] = e.what();
    }
    table.rows[i] = std::move(row);
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    io::JobRecord job{"n=" + std::to_string(jobs[i].n) + ";x=" + format_real(jobs[i].x), jobs[i].x,
                      errors[i].empty() ? "ok" : "failed", errors[i], {"doublewell.csv"}, nlohmann::json::object()};
    run.manifest.upsert(std::move(job));
  }
  run.write_table("doublewell.csv", table);
  run.log << "doublewell: " << jobs.size() << " rows\n";
}

void thermal_table(Run& run) {
  const auto& c = run.config;
  std::vector<double> biases = c.thermal.final_bias_grid;
  if (biases.empty()) biases = c.quench.final_bias_grid;
  if (biases.empty()) throw ConfigError("thermal: set thermal.delta_f_grid or quench.delta_f_grid");

  std::optional<std::vector<double>> energies;
  if (c.thermal.energies_from) {
    const auto source = io::read_csv(*c.thermal.energies_from);
    std::size_t col_bias = 0, col_energy = 0;
    try {
      col_bias = source.column("delta_f");
      col_energy = source.column("energy");
    } catch (const std::out_of_range&) {
      throw ConfigError("thermal.energies_from: needs delta_f and energy columns");
    }
    std::map<double, double> lookup;
    for (const auto& row : source.rows)
      if (!row[col_energy].empty()) lookup[std::stod(row[col_bias])] = std::stod(row[col_energy]);
    energies.emplace();
    for (double b : biases) {
      const auto it = lookup.find(b);
      if (it == lookup.end())
        throw ConfigError("thermal.energies_from: no energy for delta_f = " + format_real(b));
      energies->push_back(it->second);
    }
  }

  const LadderSystem system = make_system(c);
  const StateVector psi0 = energies ? StateVector{} : prepare(c, system);
  std::optional<std::span<const double>> energy_span;
  if (energies) energy_span = std::span<const double>(*energies);
  const auto points =
      thermal_curve(system, biases, energy_span, psi0, c.thermal.tol, c.thermal.dense_cap, run.options.threads);
  std::vector<ThermalPoint> ideal;
  if (c.thermal.ideal_gas)
    ideal = ideal_gas_reference(c.model.hamiltonian, LadderGeometry{c.model.rungs}, c.model.particles, biases);

  io::CsvTable table{{"delta_f", "energy", "beta", "n_R", "k2_L", "k2_R", "negative_beta", "flagged", "note",
                      "ideal_beta", "ideal_n_R", "ideal_k2_L", "ideal_k2_R", "ideal_flagged", "ideal_note", "status"},
                     {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const bool failed = std::isnan(p.beta);
    std::vector<std::string> row{format_real(biases[i]), failed ? "" : format_real(p.energy),
                                 failed ? "" : format_real(p.beta), failed ? "" : format_real(p.n_right),
                                 format_real(p.k2_left), format_real(p.k2_right), yes_no(p.negative_beta),
                                 yes_no(p.flagged), sanitize(p.note)};
    if (c.thermal.ideal_gas) {
      const auto& g = ideal[i];
      row.insert(row.end(), {format_real(g.beta), format_real(g.n_right), format_real(g.k2_left),
                             format_real(g.k2_right), yes_no(g.flagged), sanitize(g.note)});
    } else {
      row.insert(row.end(), 6, "");
    }
    row.push_back(failed ? "failed" : "ok");
    table.rows.push_back(std::move(row));
    run.manifest.upsert({"delta_f=" + format_real(biases[i]), biases[i], failed ? "failed" : "ok",
                         failed ? p.note : "", {"thermal.csv"}, nlohmann::json::object()});
  }
  run.write_table("thermal.csv", table);
  run.log << "thermal: " << points.size() << " points\n";
}

// Self-contained matplotlib scripts for the tables found in the output
// directory.
const std::map<std::string, std::string>& plot_scripts() {
  static const std::map<std::string, std::string> scripts{
      {"scan_summary.csv", R"(import csv, math
import matplotlib.pyplot as plt

rows = [r for r in csv.DictReader(open("scan_summary.csv")) if r["status"] == "ok"]
x = [float(r["inverse_rate"]) for r in rows]
y = [float(r["n_R"]) for r in rows]
err = [float(r["amplitude"]) for r in rows]
grid = [10 ** (k / 50 - 1) for k in range(151)]
plt.semilogx(grid, [1 - math.exp(-g) for g in grid], "k--", label="p_LZ")
plt.errorbar(x, y, yerr=err, fmt="o-", label=rows[0]["direction"] if rows else "")
plt.xlabel("2 pi / alpha")
plt.ylabel("n_R")
plt.legend()
plt.savefig("scan_summary.png", dpi=150)
)"},
      {"quench_scan_summary.csv", R"(import csv
import matplotlib.pyplot as plt

rows = [r for r in csv.DictReader(open("quench_scan_summary.csv")) if r["status"] == "ok"]
x = [float(r["delta_f"]) for r in rows]
fig, ax = plt.subplots(1, 2, figsize=(9, 4))
ax[0].errorbar(x, [float(r["n_R"]) for r in rows], yerr=[float(r["n_R_amplitude"]) for r in rows], fmt="o")
ax[0].set_xlabel("Delta_f")
ax[0].set_ylabel("long-time n_R")
if rows and rows[0]["k2_L"]:
    ax[1].plot(x, [float(r["k2_L"]) for r in rows], "o", label="L")
    ax[1].plot(x, [float(r["k2_R"]) for r in rows], "s", label="R")
    ax[1].legend()
ax[1].set_xlabel("Delta_f")
ax[1].set_ylabel("<k^2>")
fig.tight_layout()
fig.savefig("quench_scan_summary.png", dpi=150)
)"},
      {"thermal.csv", R"(import csv
import matplotlib.pyplot as plt

rows = [r for r in csv.DictReader(open("thermal.csv")) if r["status"] == "ok"]
x = [float(r["delta_f"]) for r in rows]
fig, ax = plt.subplots(1, 2, figsize=(9, 4))
ax[0].plot(x, [float(r["n_R"]) for r in rows], "o-", label="canonical")
if rows and rows[0]["ideal_n_R"]:
    ax[0].plot(x, [float(r["ideal_n_R"]) for r in rows], "--", label="ideal gas")
ax[0].set_xlabel("Delta_f")
ax[0].set_ylabel("n_R")
ax[0].legend()
ax[1].plot(x, [float(r["beta"]) for r in rows], "o-")
ax[1].axhline(0, color="k", lw=0.5)
ax[1].set_xlabel("Delta_f")
ax[1].set_ylabel("beta")
fig.tight_layout()
fig.savefig("thermal.png", dpi=150)
)"},
      {"doublewell.csv", R"(import csv
import matplotlib.pyplot as plt

rows = [r for r in csv.DictReader(open("doublewell.csv")) if r["status"] == "ok"]
fig, ax = plt.subplots(1, 2, figsize=(9, 4), sharey=True)
for n in sorted({r["n"] for r in rows}, key=int):
    sel = [r for r in rows if r["n"] == n]
    x = [float(r["inverse_rate"]) for r in sel]
    for a, kind in zip(ax, ("gs", "inverse")):
        line, = a.semilogx(x, [float(r[kind + "_analytic"]) for r in sel], "-", label=f"n={n}")
        if sel[0][kind + "_integrated"]:
            a.semilogx(x, [float(r[kind + "_integrated"]) for r in sel], "o", color=line.get_color())
ax[0].set_title("ground-state sweep")
ax[1].set_title("inverse sweep")
for a in ax:
    a.set_xlabel("2 pi / alpha")
    a.legend()
ax[0].set_ylabel("n_R")
fig.tight_layout()
fig.savefig("doublewell.png", dpi=150)
)"},
      {"plot_series.py", R"(import csv, sys
import matplotlib.pyplot as plt

# usage: python plot_series.py <series csv>
path = sys.argv[1]
rows = list(csv.DictReader(open(path)))
t = [float(r["t"]) for r in rows]
fig, ax = plt.subplots(2, 1, sharex=True)
ax[0].plot(t, [float(r["n_R"]) for r in rows])
ax[0].set_ylabel("n_R")
if rows and rows[0]["k2_L"]:
    ax[1].plot(t, [float(r["k2_L"]) for r in rows], label="L")
    ax[1].plot(t, [float(r["k2_R"]) for r in rows], label="R")
    ax[1].legend()
ax[1].set_ylabel("<k^2>")
ax[1].set_xlabel("t")
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
)"}};
  return scripts;
}

void plot(Run& run) {
  const auto& out = run.config.run.out;
  int written = 0;
  for (const auto& [source, script] : plot_scripts()) {
    const bool generic = source == "plot_series.py";
    if (!generic && !fs::exists(out / source)) continue;
    const std::string name = generic ? source : "plot_" + source.substr(0, source.size() - 4) + ".py";
    io::write_text(out / name, script);
    run.manifest.add_file(name);
    run.manifest.upsert({name, 0.0, "ok", "", {name}, nlohmann::json::object()});
    run.log << "plot: wrote " << name << "\n";
    ++written;
  }
  if (written == 1) run.log << "plot: no result tables found in " << out.string() << "\n";
}

}  // namespace

io::RunManifest execute(const std::string& command, const RunConfig& config, const ExecuteOptions& options,
                        std::ostream& log) {
  if (std::find(commands().begin(), commands().end(), command) == commands().end())
    throw ConfigError("unknown command '" + command + "'");
  if (const auto errors = validate(config); !errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  if (command == "sweep" && !config.sweep.alpha) throw ConfigError("sweep: set sweep.alpha");
  if (command == "scan" && config.sweep.alpha_grid.empty()) throw ConfigError("scan: set sweep.alpha_grid");
  if (command == "quench" && !config.quench.final_bias) throw ConfigError("quench: set quench.delta_f");
  if (command == "quench-scan" && config.quench.final_bias_grid.empty())
    throw ConfigError("quench-scan: set quench.delta_f_grid");

  io::prepare_output_dir(config.run.out);
  omp_set_num_threads(std::max(1, options.threads));
  Run run(config, command, options, log);
  run.save();

  if (command == "basis-info") basis_info(run);
  else if (command == "sweep") run_sweeps(run, {*config.sweep.alpha}, "sweep");
  else if (command == "scan") run_sweeps(run, config.sweep.alpha_grid, "scan");
  else if (command == "quench") run_quenches(run, {*config.quench.final_bias}, "quench");
  else if (command == "quench-scan") run_quenches(run, config.quench.final_bias_grid, "quench_scan");
  else if (command == "doublewell") doublewell_table(run);
  else if (command == "thermal") thermal_table(run);
  else if (command == "plot") plot(run);

  run.finish();
  return run.manifest;
}

}  // namespace ladder
