#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "maxstop/config.hpp"

namespace maxstop {

/// Executes one command. Artifacts go to `out_dir`, one JSON summary line per result to `out`.
/// Throws maxstop::Error on failure.
void run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);

/// Output directory: the override when given, else output.dir of the config, else ".".
std::filesystem::path output_dir(const RunConfig& cfg, const std::optional<std::filesystem::path>& override_dir);

/// Loads, runs and reports. Errors become one JSON object on `err` (and error.json in the
/// output directory when it can be written). Returns the process exit code.
int run_main(const std::filesystem::path& config_file, std::optional<Command> command,
             const std::optional<std::filesystem::path>& override_dir, std::ostream& out, std::ostream& err);

}  // namespace maxstop
