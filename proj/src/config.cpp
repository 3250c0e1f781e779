#include "phtess/config.hpp"

#include "phtess/directions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace phtess {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "+inf") return INFINITY;
  double x = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ValidationError("--" + key + ": not a number: '" + v + "'");
  return x;
}

long to_integer(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  long x = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ValidationError("--" + key + ": not an integer: '" + v + "'");
  return x;
}

std::uint64_t to_seed(const std::string& v) {
  const std::string t = trim(v);
  std::uint64_t x = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ValidationError("--seed: not an unsigned 64-bit integer: '" + v + "'");
  return x;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::limit: return "limit";
    case Command::direct: return "direct";
    case Command::compare: return "compare";
    case Command::report: return "report";
  }
  return "?";
}

std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real("thresholds", item));
  if (out.empty()) throw ValidationError("--thresholds: empty list");
  return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config: cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "dim") cfg.dim = static_cast<int>(to_integer(key, value));
  else if (key == "k") cfg.k = static_cast<int>(to_integer(key, value));
  else if (key == "gamma") cfg.gamma = to_real(key, value);
  else if (key == "phi") cfg.phi = trim(value);
  else if (key == "sigma") {
    try {
      cfg.sigma = parse_size_kind(trim(value));
    } catch (const std::invalid_argument&) {
      throw ValidationError("--sigma: expected vkroot, diameter or circumradius, got '" + value + "'");
    }
  } else if (key == "window-radius") cfg.window_radius = to_real(key, value);
  else if (key == "obs-radius") cfg.obs_radius = to_real(key, value);
  else if (key == "reps") cfg.reps = to_integer(key, value);
  else if (key == "samples") cfg.samples = to_integer(key, value);
  else if (key == "thresholds") cfg.thresholds = parse_thresholds(value);
  else if (key == "seed") cfg.seed = to_seed(value);
  else if (key == "out") cfg.out = trim(value);
  else if (key == "phi-budget") cfg.phi_budget = static_cast<int>(to_integer(key, value));
  else if (key == "workers") cfg.workers = static_cast<int>(to_integer(key, value));
  else if (key == "sim") cfg.sim = trim(value);
  else if (key == "xi") cfg.xi = trim(value);
  else if (key == "descriptor") cfg.descriptor = trim(value);
  else throw ValidationError("unknown setting '" + raw_key + "'");
}

void validate(const RunConfig& cfg, Command cmd) {
  std::vector<std::string> errors;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  need(cfg.dim >= 2 && cfg.dim <= 4, "--dim must be in 2..4");
  need(cfg.k >= 1 && cfg.k <= std::min(cfg.dim, 3), "--k must be in 1..min(dim, 3)");
  need(std::isfinite(cfg.gamma) && cfg.gamma > 0, "--gamma must be finite and positive");
  need(cfg.phi_budget >= 100, "--phi-budget must be >= 100");
  need(cfg.workers >= 1, "--workers must be >= 1");
  if (cfg.dim >= 2 && cfg.dim <= 4) {
    try {
      DirectionalModel::parse(cfg.phi, cfg.dim);
    } catch (const std::invalid_argument& e) {
      errors.push_back(std::string("--phi: ") + e.what());
    }
  }
  switch (cmd) {
    case Command::simulate:
      need(cfg.reps >= 1, "--reps must be >= 1");
      need(std::isfinite(cfg.window_radius) && cfg.window_radius > 0, "--window-radius must be positive");
      need(cfg.obs_radius >= 0 && cfg.obs_radius < cfg.window_radius, "--obs-radius must be in [0, window-radius)");
      break;
    case Command::limit:
    case Command::direct:
      need(cfg.samples >= 1, "--samples must be >= 1");
      break;
    case Command::compare: {
      need(!cfg.sim.empty(), "--sim is required");
      need(!cfg.xi.empty(), "--xi is required");
      bool decreasing = true, positive = true;
      for (std::size_t i = 0; i < cfg.thresholds.size(); ++i) {
        positive = positive && cfg.thresholds[i] > 0;
        if (i > 0) decreasing = decreasing && cfg.thresholds[i] < cfg.thresholds[i - 1];
      }
      need(!cfg.thresholds.empty() && decreasing, "--thresholds must be strictly decreasing");
      need(positive, "--thresholds must be positive");
      try {
        parse_descriptor(cfg.descriptor);
      } catch (const std::invalid_argument& e) {
        errors.push_back(std::string("--descriptor: ") + e.what());
      }
      break;
    }
    case Command::report:
      break;
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg, Command cmd) {
  nlohmann::ordered_json j;
  j["dim"] = cfg.dim;
  j["k"] = cfg.k;
  j["gamma"] = cfg.gamma;
  j["phi"] = DirectionalModel::parse(cfg.phi, cfg.dim).to_spec();
  j["sigma"] = size_kind_name(cfg.sigma);
  if (cmd == Command::simulate) {
    j["window_radius"] = cfg.window_radius;
    j["obs_radius"] = cfg.obs_radius;
    j["reps"] = cfg.reps;
  } else if (cmd == Command::limit || cmd == Command::direct) {
    j["samples"] = cfg.samples;
  } else if (cmd == Command::compare) {
    j["thresholds"] = cfg.thresholds;
    j["descriptor"] = cfg.descriptor;
    j["sim"] = cfg.sim;
    j["xi"] = cfg.xi;
  }
  j["seed"] = cfg.seed;
  j["phi_budget"] = cfg.phi_budget;
  return j;
}

}  // namespace phtess
