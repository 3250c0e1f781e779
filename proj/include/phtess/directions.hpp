#pragma once

#include "phtess/geometry.hpp"
#include "phtess/rng.hpp"

#include <string>
#include <vector>

namespace phtess {

enum class ModelKind { isotropic, vmf_mixture, atoms, small_circle, cantor };

struct VmfComponent {
  Vec mean;
  double kappa = 0.0;
  double weight = 1.0;
};

struct Atom {
  Vec u;
  double weight = 1.0;
};

/// Even law on S^{d-1}. Evenness is enforced at sampling time by a fair sign
/// flip, so the stored parameters need not be symmetric.
///
/// `cantor` (d = 2 only) puts the normal angle in [0, pi) on the Cantor
/// distribution: singular continuous, no atoms, hence subspace-free in the
/// plane without having a density.
struct DirectionalModel {
  ModelKind kind = ModelKind::isotropic;
  int dim = 2;
  std::vector<VmfComponent> vmf;
  std::vector<Atom> atoms;
  Vec axis;           // small_circle
  double height = 0;  // small_circle: <u, axis> = +-height

  bool subspace_free() const { return kind != ModelKind::atoms; }

  /// Parses `isotropic`, `vmf:[{mu:[..],kappa:..,w:..},...]`,
  /// `atoms:[{u:[..],w:..},...]`, `smallcircle:{axis:[..],c:..}`, `cantor`.
  /// Throws std::invalid_argument on malformed or inconsistent specs.
  static DirectionalModel parse(const std::string& spec, int d);
  static DirectionalModel isotropic(int d);

  /// Canonical spec string (parse(to_spec()) round-trips).
  std::string to_spec() const;
};

enum class EstimateMethod { closed_form, quadrature, monte_carlo };

struct HittingEstimate {
  double value = 0.0;
  double std_error = 0.0;
  EstimateMethod method = EstimateMethod::closed_form;
  long draws = 0;
};

inline constexpr int kQuadratureNodes = 4096;

Vec sample_direction(const DirectionalModel& model, Rng& rng);

/// Phi(K) = int h(K, u) phi(du). Closed form for atoms and (via V_1) for the
/// isotropic law in d >= 3, periodic trapezoid quadrature for isotropic d = 2
/// and small circles in d = 3, Monte Carlo with `budget` antithetic draws
/// otherwise. Throws std::invalid_argument when Monte Carlo is needed and
/// budget < 100.
HittingEstimate phi_functional(const PolytopeK& k, const DirectionalModel& model, int budget, Rng& rng);

/// Phi of the unit ball of a linear subspace: int ||u|L|| phi(du).
HittingEstimate phi_of_flat_ball(const Flat& frame, const DirectionalModel& model, int budget, Rng& rng);

}  // namespace phtess
