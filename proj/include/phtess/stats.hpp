#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace phtess {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted empirical distribution function of a scalar sample.
class WeightedECDF {
 public:
  WeightedECDF() = default;
  /// Equal weights.
  explicit WeightedECDF(std::vector<double> values);
  WeightedECDF(std::vector<double> values, std::vector<double> weights);

  /// Values already sorted ascending; skips the sort.
  static WeightedECDF presorted(std::vector<double> values, std::vector<double> weights);

  /// P(X <= x) under the normalized weights.
  double operator()(double x) const;

  double ess() const { return ess_; }
  double total_weight() const { return total_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty() || total_ <= 0.0; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  void finish();

  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;  // normalized, cumulative_[i] = F(values_[i])
  double total_ = 0.0;
  double ess_ = 0.0;
};

/// Sup distance between two weighted ECDFs. Throws StatsError when either
/// effective sample size is below `min_ess`.
double weighted_ks(const WeightedECDF& a, const WeightedECDF& b, double min_ess = 50.0);

/// Chi-square goodness of fit of the observed counts against Poisson(mean),
/// tail classes merged until every class expects >= 5. Needs >= 1000
/// observations.
double poisson_gof(std::span<const long> observations, double mean);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Percentile bootstrap. `stat` receives multinomial resampling counts over
/// the n items. Resample streams derive from `seed`.
Interval bootstrap_percentile(std::size_t n, int resamples, double level, std::uint64_t seed,
                              const std::function<double(const std::vector<double>& counts)>& stat);

/// Bootstrap interval of the weighted mean of `x`.
Interval bootstrap_weighted_mean(std::span<const double> x, std::span<const double> w, int resamples,
                                 double level, std::uint64_t seed);

/// Bootstrap interval of weighted_ks(a, b), resampling both samples.
Interval bootstrap_ks(const WeightedECDF& a, const WeightedECDF& b, int resamples, double level,
                      std::uint64_t seed);

double weighted_mean(std::span<const double> x, std::span<const double> w);

/// One scalar-descriptor sample with weights; the sweep works on these.
struct WeightedSample {
  std::vector<double> value;   // descriptor
  std::vector<double> sigma;   // size functional
  std::vector<double> weight;
  std::vector<double> simplex;  // 1 if the face is a simplex, else 0
};

/// A xi-type sample: per tuple the shape descriptor, xi weight D/Sigma(T),
/// Sigma(T) and Phi(T). The semianalytic law at threshold a reweights it.
struct XiWeights {
  std::vector<double> value;
  std::vector<double> w;
  std::vector<double> sigma;
  std::vector<double> phi;
};

/// D * (1 - exp(-2 gamma Phi a / Sigma)) / (2 gamma Phi), written through
/// the xi weight w = D / Sigma.
double semianalytic_weight(double xi_weight, double sigma, double phi, double gamma_hat, double a);

struct SweepRow {
  double a = 0.0;
  long n = 0;
  double ess = 0.0;
  double simplex_frac = 0.0;
  double simplex_frac_lo = 0.0;
  double simplex_frac_hi = 0.0;
  double ks_sim_semi = 0.0;
  double ks_sim_xi = 0.0;
  double ks_semi_xi = 0.0;
  double ks_ci_width = 0.0;
  std::string note;  // why a statistic is missing, if it is
};

struct SweepOptions {
  double gamma_hat = 1.0;
  int resamples = 1000;
  double level = 0.95;
  std::uint64_t seed = 0;
  double min_ess = 50.0;
};

/// Per threshold (in the given order): simplex fraction of the simulated
/// faces with Sigma < a and its bootstrap interval, and the three pairwise KS
/// distances between simulation, semianalytic(a) and xi. Statistics that
/// cannot be formed (too few faces) are NaN and explained in `note`.
std::vector<SweepRow> convergence_sweep(const WeightedSample& sim, const XiWeights& xi,
                                        std::span<const double> thresholds, const SweepOptions& opt);

}  // namespace phtess
