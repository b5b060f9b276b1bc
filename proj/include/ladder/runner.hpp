#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ladder/config.hpp"
#include "ladder/io.hpp"

namespace ladder {

// Subcommands understood by execute().
const std::vector<std::string>& commands();

// Thread count: explicit flag, then LADDER_THREADS, then the config, then
// the number of available processors.
int resolve_threads(std::optional<int> flag, const RunConfig& config);

struct ExecuteOptions {
  int threads = 1;
  bool resume = false;  // skip jobs the previous manifest marks ok
};

// Runs one subcommand, writing CSV tables and `<command>_manifest.json` into
// config.run.out. Job failures are recorded in the manifest rather than
// thrown; ConfigError escapes for invalid or incomplete configurations.
io::RunManifest execute(const std::string& command, const RunConfig& config, const ExecuteOptions& options,
                        std::ostream& log);

std::filesystem::path manifest_path(const RunConfig& config, const std::string& command);

}  // namespace ladder
