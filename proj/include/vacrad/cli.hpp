#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vacrad/config.hpp"

namespace vacrad {

inline constexpr std::string_view tool_version = "0.1.0";

/// Environment variable naming the output directory when the config leaves
/// output.directory empty.
inline constexpr const char* output_dir_env = "VACRAD_OUTPUT_DIR";

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;      ///< config, usage or domain error
inline constexpr int exit_numerical = 2;  ///< tolerance or cutoff not met

std::span<const std::string_view> subcommands();

std::filesystem::path resolve_output_directory(const RunConfig& config);

DielectricProfile make_profile(const RunConfig& config);

/// Runs one subcommand, writes its CSV artifacts and manifest.txt into the
/// output directory, and returns the exit status. Diagnostics go to `log`.
int run(std::string_view subcommand, const RunConfig& config, int workers, std::ostream& log);

}  // namespace vacrad
