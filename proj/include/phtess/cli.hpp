#pragma once

#include "phtess/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace phtess::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

/// Full command line: `phtess <simulate|limit|direct|compare|report> [flags]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// One subcommand on an already merged configuration. `report` takes its
/// manifest paths from `paths` (default: every manifest under cfg.out).
int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err,
                const std::vector<std::string>& paths = {});

std::string sha256_file(const std::filesystem::path& path);

/// `<dir>/<stem>.manifest.json` for an output `<dir>/<stem>.<ext>`.
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace phtess::cli
