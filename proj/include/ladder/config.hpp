#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ladder/hamiltonian.hpp"
#include "ladder/propagator.hpp"
#include "ladder/protocols.hpp"
#include "ladder/thermal.hpp"

// Run configuration. INI text with sections [model], [propagation],
// [sweep], [quench], [doublewell], [thermal], [run]; every key is optional
// and defaults to J_par = 0.38, U = 1.58, |Delta0| = 18.2. Unknown keys are rejected.
namespace ladder {

struct ModelConfig {
  int rungs = 4;
  int particles = 4;
  std::optional<int> max_occupation;  // min(N, 4) when unset
  HamiltonianParams hamiltonian;
  int points_per_site = 16;

  int occupation_cap() const;
};

struct SweepConfig {
  SweepDirection direction = SweepDirection::Inverse;
  double bias_magnitude = 18.2;    // |Delta0|
  std::optional<double> alpha;     // signed, single sweep
  std::vector<double> alpha_grid;  // signed, scan
  std::optional<double> rescale;   // r; default policy when unset
  int hold_periods = 5;
  int samples_per_period = 32;
  double prominence = 1e-4;
  bool momentum = true;
  bool entropy = false;
};

struct QuenchConfig {
  std::optional<double> final_bias;
  std::vector<double> final_bias_grid;
  double duration = 30.0;
  double prominence = 1e-4;
  double low_density_threshold = 0.75;
  bool momentum = true;
  bool entropy = false;
};

struct DoublewellConfig {
  std::vector<int> particles{1, 2, 3};
  double interaction = 10.0;
  double bias_magnitude = 60.0;
  std::vector<double> inverse_rate_grid{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0};  // 2 pi / alpha
  bool integrate = true;
};

struct ThermalConfig {
  std::vector<double> final_bias_grid;
  std::optional<std::filesystem::path> energies_from;  // quench-scan summary CSV
  std::size_t dense_cap = kDefaultDenseCap;
  double tol = 1e-8;
  bool ideal_gas = true;
};

struct RunSettings {
  std::uint64_t seed = 1234;
  int threads = 0;  // 0: hardware default
  std::filesystem::path out = "results";
  double initial_bias = 100.0;
  double ground_state_tol = 1e-10;
};

struct RunConfig {
  ModelConfig model;
  PropagationSettings propagation;
  SweepConfig sweep;
  QuenchConfig quench;
  DoublewellConfig doublewell;
  ThermalConfig thermal;
  RunSettings run;
};

bool operator==(const RunConfig& a, const RunConfig& b);

// All constraint violations, one message each; empty when valid.
std::vector<std::string> validate(const RunConfig& config);

// Throws ConfigError listing every problem at once.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

// Full INI text with every key; parse_config_text(serialize(c)) == c.
std::string serialize(const RunConfig& config);

}  // namespace ladder
