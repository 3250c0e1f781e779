#include "phtess/process.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phtess {

ProcessConfig::ProcessConfig(double gamma, DirectionalModel m) : gamma_hat(gamma), model(std::move(m)) {
  if (!(gamma_hat > 0.0) || !std::isfinite(gamma_hat))
    throw std::invalid_argument("intensity gamma must be finite and positive");
}

HyperplaneSample sample_in_ball(const ProcessConfig& cfg, double radius, std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("window radius must be positive");
  Rng rng(seed);
  HyperplaneSample s;
  s.window_radius = radius;
  s.seed = seed;
  const long n = rng.poisson(2.0 * cfg.gamma_hat * radius);
  s.hyperplanes.reserve(n);
  for (long i = 0; i < n; ++i) {
    const Vec u = sample_direction(cfg.model, rng);
    const double tau = rng.uniform(-radius, radius);
    s.hyperplanes.push_back(Hyperplane::canonical(u, tau));
  }
  return s;
}

std::vector<Hyperplane> sample_hitting_K_missing_inball(const ProcessConfig& cfg, const PolytopeK& rt,
                                                        const Flat& frame, double r, Rng& rng) {
  if (!(r > 0.0)) throw std::invalid_argument("inball radius must be positive");
  double rho = 0.0;
  for (const auto& v : rt.vertices) rho = std::max(rho, v.norm());
  std::vector<Hyperplane> out;
  const long n = rng.poisson(2.0 * cfg.gamma_hat * rho);
  for (long i = 0; i < n; ++i) {
    const Vec u = sample_direction(cfg.model, rng);
    const double tau = rng.uniform(-rho, rho);
    const double hi = support_function(rt, u);
    const double lo = -support_function(rt, -u);
    if (tau < lo || tau > hi) continue;
    if (std::abs(tau) < r * frame.local_direction(u).norm()) continue;
    out.push_back(Hyperplane::canonical(u, tau));
  }
  return out;
}

std::string GeneralPositionReport::describe() const {
  if (pass()) return "general position: pass";
  std::ostringstream os;
  os << "general position: fail (" << (translational ? "" : "translational ") << (directional ? "" : "directional")
     << ") witness {";
  for (std::size_t i = 0; i < witness.size(); ++i) os << (i ? "," : "") << witness[i];
  os << '}';
  if (!subspace_free) os << " [expected: model is not subspace-free]";
  return os.str();
}

GeneralPositionReport check_general_position(const HyperplaneSample& sample, bool subspace_free) {
  GeneralPositionReport rep;
  rep.subspace_free = subspace_free;
  std::vector<int> twit;
  rep.directional = directional_general_position(sample.hyperplanes, &rep.witness);
  rep.translational = translational_general_position(sample.hyperplanes, &twit);
  if (rep.directional) rep.witness = twit;
  return rep;
}

}  // namespace phtess
