#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ladder/config.hpp"
#include "ladder/errors.hpp"
#include "ladder/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landau-Zener sweeps and quenches of bosons on a two-leg ladder"};
  app.set_version_flag("--version", LADDER_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> threads;
  std::string out;
  bool resume = false;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--threads", threads, "worker threads (overrides LADDER_THREADS and the config)");
  app.add_option("--out", out, "output directory");
  app.add_flag("--resume", resume, "skip jobs already completed in the existing manifest");
  app.add_option("--seed", seed, "seed of the ground-state start vector");

  const std::pair<const char*, const char*> descriptions[] = {
      {"basis-info", "basis dimension and memory estimate"},
      {"sweep", "single Landau-Zener sweep (sweep.alpha)"},
      {"scan", "sweeps over sweep.alpha_grid"},
      {"quench", "sudden quench to quench.delta_f"},
      {"quench-scan", "quenches over quench.delta_f_grid"},
      {"doublewell", "double-well closed forms and exact integration"},
      {"thermal", "energy-matched canonical ensemble and ideal-gas reference"},
      {"plot", "write matplotlib scripts for the tables in the output directory"}};
  for (const auto& [name, text] : descriptions) app.add_subcommand(name, text)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ladder::RunConfig config = config_path.empty() ? ladder::RunConfig{} : ladder::parse_config(config_path);
    if (!out.empty()) config.run.out = out;
    if (seed) config.run.seed = *seed;
    ladder::ExecuteOptions options;
    options.threads = ladder::resolve_threads(threads, config);
    options.resume = resume;

    const auto manifest = ladder::execute(command, config, options, std::cerr);
    if (!manifest.all_ok()) {
      std::cerr << command << ": some jobs failed, see " << ladder::manifest_path(config, command).string() << "\n";
      return kPartial;
    }
    return kOk;
  } catch (const ladder::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPartial;
  }
}
