#pragma once

#include "phtess/directions.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phtess {

struct ProcessConfig {
  double gamma_hat = 1.0;
  DirectionalModel model;

  ProcessConfig(double gamma, DirectionalModel m);
  int dim() const { return model.dim; }
};

struct HyperplaneSample {
  std::vector<Hyperplane> hyperplanes;
  double window_radius = 0.0;
  std::uint64_t seed = 0;
};

/// Restriction of the process to hyperplanes meeting the closed ball R B^d:
/// Poisson(2 gamma R) hyperplanes, u ~ phi, tau ~ U[-R, R].
HyperplaneSample sample_in_ball(const ProcessConfig& cfg, double radius, std::uint64_t seed);

/// Hyperplanes of the process that hit `rt` (a polytope in the linear
/// subspace `frame`) but miss the relatively open ball B(frame, o, r).
/// Exact: thins the process restricted to the smallest ball about o
/// containing `rt`.
std::vector<Hyperplane> sample_hitting_K_missing_inball(const ProcessConfig& cfg, const PolytopeK& rt,
                                                        const Flat& frame, double r, Rng& rng);

struct GeneralPositionReport {
  bool translational = true;
  bool directional = true;
  bool subspace_free = true;  // model class; directional failures are expected otherwise
  std::vector<int> witness;

  bool pass() const { return translational && directional; }
  std::string describe() const;
};

GeneralPositionReport check_general_position(const HyperplaneSample& sample, bool subspace_free);

}  // namespace phtess
