#pragma once

#include "phtess/records.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace phtess {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { simulate, limit, direct, compare, report };

const char* command_name(Command c);

struct RunConfig {
  int dim = 2;
  int k = 2;
  double gamma = 1.0;
  std::string phi = "isotropic";
  SizeKind sigma = SizeKind::diameter;
  double window_radius = 20.0;
  double obs_radius = 10.0;
  long reps = 100;
  long samples = 10000;
  std::vector<double> thresholds{1.6, 0.8, 0.4, 0.2, 0.1};
  std::uint64_t seed = 0;
  std::string out = ".";
  int phi_budget = 4096;
  int workers = 1;
  // compare
  std::string sim;
  std::string xi;
  std::string descriptor = "norm_inradius";
};

/// Flat `key = value` lines; `#` starts a comment. Keys are the long flag
/// names (`window-radius` or `window_radius`).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Sets one field from its textual value. Throws ValidationError on unknown
/// keys and unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Range and consistency checks for the given subcommand.
void validate(const RunConfig& cfg, Command cmd);

/// Echo for manifests; the model spec is canonicalised.
nlohmann::ordered_json config_to_json(const RunConfig& cfg, Command cmd);

std::vector<double> parse_thresholds(const std::string& text);

}  // namespace phtess
