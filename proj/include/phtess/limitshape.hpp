#pragma once

#include "phtess/arrangement.hpp"
#include "phtess/directions.hpp"
#include "phtess/process.hpp"
#include "phtess/records.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace phtess {

/// Margin on the normalized positive-spanning coefficients.
inline constexpr double kSpanMargin = 1e-9;

struct TupleSample {
  std::vector<Vec> dirs;  // u_1 .. u_{d+1}
  int k = 0;
  bool in_Pk = false;
  Flat frame;                     // L_u, through o
  std::vector<Vec> projections;   // u_j | L_u in frame coordinates, j <= k+1
  std::vector<double> norms;      // ||u_j | L_u||
  PolytopeK simplex;              // T_k(u)
  double jacobian = 0.0;          // |det M|
  double signed_jacobian = 0.0;   // det M
};

/// L_u, the projections, the P_k verdict and, for accepted tuples, T_k(u)
/// and D_k(u). Rank deficiency is reported as in_Pk = false.
TupleSample build_tuple(std::span<const Vec> dirs, int k);

/// t_j(u, z, r) = <z, u_j> + r ||u_j|L_u|| 1{j <= k+1}.
std::vector<double> t_offsets(const TupleSample& tuple, const Vec& z, double r);

struct TupleOptions {
  int k = 1;
  SizeKind sigma = SizeKind::diameter;
  long n = 1000;  // accepted tuples to produce
  std::uint64_t seed = 0;
  int phi_budget = 4096;
  int workers = 1;
};

struct TupleCounters {
  long drawn = 0;
  long accepted = 0;
  long negative_det = 0;  // accepted tuples with det M < 0
  double acceptance() const { return drawn > 0 ? static_cast<double>(accepted) / drawn : 0.0; }
};

/// Tuples are drawn in blocks of this size; block b uses stream (seed, b).
inline constexpr long kTupleBlock = 4096;

struct XiRun {
  std::vector<XiSample> samples;
  TupleCounters counters;
};

/// Weighted samples of the limit shape law: weight D_k(u) / Sigma(T_k(u)),
/// descriptors of s_c(T_k(u)). Throws SamplerAbort when the P_k acceptance
/// rate is below 1e-4 after the first 1e5 draws.
XiRun sample_xi(const DirectionalModel& model, const TupleOptions& opt);

struct SemianalyticLaw {
  std::vector<XiSample> samples;
  std::vector<double> weights;  // D_k(u) int_0^{a/Sigma(T)} e^{-2 gamma r Phi(T)} dr
  double mass = 0.0;            // U(a): mean weight per drawn tuple
  TupleCounters counters;
};

SemianalyticLaw semianalytic_small_face_law(const DirectionalModel& model, const TupleOptions& opt,
                                            double gamma_hat, double a);

/// Reweights an existing xi run to the semianalytic law at threshold a.
std::vector<double> semianalytic_weights(std::span<const XiSample> xi, double gamma_hat, double a);

struct DirectRun {
  std::vector<FaceRecord> records;  // weight in FaceRecord::w
  TupleCounters counters;
  long zero_residual = 0;  // faces equal to r T_k(u)
};

/// The polytope r T_k(u) cut by the halfspaces H_o^- of `residual`.
PolytopeK typical_face_polytope(const TupleSample& tuple, double r, std::span<const Hyperplane> residual);

/// Typical k-face sampler: u ~ phi^{d+1} on P_k with weight
/// D_k(u) / (2 gamma Phi(B(L_u))), r ~ Exp(2 gamma Phi(B(L_u))), residual
/// hyperplanes hitting r T_k(u) but missing the inball.
DirectRun sample_typical_face_direct(const DirectionalModel& model, const TupleOptions& opt, double gamma_hat);

enum class TestFunction { zero, inball_box, gauss_bump, hit_ball };

TestFunction parse_test_function(const std::string& name);

struct Lemma33Result {
  double lhs = 0.0, lhs_se = 0.0;
  double rhs = 0.0, rhs_se = 0.0;
  double z = 0.0;
  long n = 0;
};

/// Monte Carlo check of the change of variables between (d+1)-tuples of
/// hyperplanes and (u, z, r): both sides of the integral identity for the
/// chosen test function, n draws per side.
Lemma33Result lemma33_consistency(const DirectionalModel& model, int k, double gamma_hat, TestFunction f, long n,
                                  std::uint64_t seed, int workers = 1);

}  // namespace phtess
