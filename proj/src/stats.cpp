#include "phtess/stats.hpp"

#include "phtess/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace phtess {

WeightedECDF::WeightedECDF(std::vector<double> values)
    : WeightedECDF(values, std::vector<double>(values.size(), 1.0)) {}

WeightedECDF::WeightedECDF(std::vector<double> values, std::vector<double> weights) {
  if (values.size() != weights.size()) throw StatsError("ecdf: values and weights differ in length");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  // ties ordered by weight so that the stored sequence, and with it every
  // bootstrap built on it, does not depend on the input order
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && weights[a] < weights[b]);
  });
  values_.reserve(order.size());
  weights_.reserve(order.size());
  for (auto i : order) {
    values_.push_back(values[i]);
    weights_.push_back(weights[i]);
  }
  finish();
}

WeightedECDF WeightedECDF::presorted(std::vector<double> values, std::vector<double> weights) {
  if (values.size() != weights.size()) throw StatsError("ecdf: values and weights differ in length");
  WeightedECDF e;
  e.values_ = std::move(values);
  e.weights_ = std::move(weights);
  e.finish();
  return e;
}

void WeightedECDF::finish() {
  double sum = 0.0, sum2 = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw StatsError("ecdf: weights must be finite and nonnegative");
    sum += w;
    sum2 += w * w;
  }
  total_ = sum;
  ess_ = sum2 > 0.0 ? sum * sum / sum2 : 0.0;
  cumulative_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    cumulative_[i] = sum > 0.0 ? acc / sum : 0.0;
  }
}

double WeightedECDF::operator()(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

double weighted_ks(const WeightedECDF& a, const WeightedECDF& b, double min_ess) {
  if (a.ess() < min_ess || b.ess() < min_ess) {
    std::ostringstream os;
    os << "weighted_ks: effective sample size too low (" << a.ess() << ", " << b.ess() << " < " << min_ess << ")";
    throw StatsError(os.str());
  }
  const auto& va = a.values();
  const auto& vb = b.values();
  const auto& wa = a.weights();
  const auto& wb = b.weights();
  const double ta = a.total_weight(), tb = b.total_weight();
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0, sup = 0.0;
  while (i < va.size() || j < vb.size()) {
    double x;
    if (j >= vb.size() || (i < va.size() && va[i] <= vb[j]))
      x = va[i];
    else
      x = vb[j];
    while (i < va.size() && va[i] == x) fa += wa[i++];
    while (j < vb.size() && vb[j] == x) fb += wb[j++];
    sup = std::max(sup, std::abs(fa / ta - fb / tb));
  }
  return std::min(sup, 1.0);
}

double poisson_gof(std::span<const long> observations, double mean) {
  const std::size_t n = observations.size();
  if (n < 1000) throw StatsError("poisson_gof: needs at least 1000 observations");
  if (!(mean >= 0.0)) throw StatsError("poisson_gof: mean must be nonnegative");
  long max_obs = 0;
  for (long x : observations) {
    if (x < 0) throw StatsError("poisson_gof: negative count");
    max_obs = std::max(max_obs, x);
  }
  if (mean == 0.0) return max_obs == 0 ? 1.0 : 0.0;

  // classes 0..top-1 plus the open class [top, inf)
  long top = std::max<long>(max_obs + 1, static_cast<long>(std::ceil(mean + 10.0 * std::sqrt(mean) + 10.0)));
  std::vector<double> observed(top + 1, 0.0), expected(top + 1, 0.0);
  for (long x : observations) observed[std::min(x, top)] += 1.0;
  double pmf = std::exp(-mean), cdf = 0.0;
  for (long i = 0; i < top; ++i) {
    expected[i] = n * pmf;
    cdf += pmf;
    pmf *= mean / (i + 1);
  }
  expected[top] = n * std::max(0.0, 1.0 - cdf);

  std::vector<double> obs_classes, exp_classes;
  double o = 0.0, e = 0.0;
  for (long i = 0; i <= top; ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= 5.0) {
      obs_classes.push_back(o);
      exp_classes.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp_classes.empty()) {
      obs_classes.push_back(o);
      exp_classes.push_back(e);
    } else {
      obs_classes.back() += o;
      exp_classes.back() += e;
    }
  }
  if (exp_classes.size() < 2) return 1.0;
  double chi2 = 0.0;
  for (std::size_t c = 0; c < exp_classes.size(); ++c) {
    const double diff = obs_classes[c] - exp_classes[c];
    chi2 += diff * diff / exp_classes[c];
  }
  const double df = static_cast<double>(exp_classes.size() - 1);
  return boost::math::gamma_q(0.5 * df, 0.5 * chi2);
}

namespace {

Interval percentile_interval(std::vector<double> stats, double level) {
  if (stats.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  std::sort(stats.begin(), stats.end());
  const double alpha = 0.5 * (1.0 - level);
  auto quantile = [&](double q) {
    const double pos = q * (stats.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, stats.size() - 1);
    return stats[lo] + (pos - lo) * (stats[hi] - stats[lo]);
  };
  return {quantile(alpha), quantile(1.0 - alpha)};
}

void multinomial_counts(Rng& rng, std::vector<double>& counts) {
  const std::size_t n = counts.size();
  std::fill(counts.begin(), counts.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) counts[rng.index(n)] += 1.0;
}

}  // namespace

Interval bootstrap_percentile(std::size_t n, int resamples, double level, std::uint64_t seed,
                              const std::function<double(const std::vector<double>& counts)>& stat) {
  if (n == 0 || resamples < 1) throw StatsError("bootstrap: empty sample");
  std::vector<double> stats;
  stats.reserve(resamples);
  std::vector<double> counts(n);
  for (int b = 0; b < resamples; ++b) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
    multinomial_counts(rng, counts);
    const double s = stat(counts);
    if (std::isfinite(s)) stats.push_back(s);
  }
  return percentile_interval(std::move(stats), level);
}

double weighted_mean(std::span<const double> x, std::span<const double> w) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += w[i] * x[i];
    den += w[i];
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

Interval bootstrap_weighted_mean(std::span<const double> x, std::span<const double> w, int resamples,
                                 double level, std::uint64_t seed) {
  if (x.size() != w.size()) throw StatsError("bootstrap: values and weights differ in length");
  std::vector<std::pair<double, double>> items(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) items[i] = {x[i], w[i]};
  std::sort(items.begin(), items.end());
  return bootstrap_percentile(items.size(), resamples, level, seed, [&](const std::vector<double>& c) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      num += c[i] * items[i].second * items[i].first;
      den += c[i] * items[i].second;
    }
    return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
  });
}

Interval bootstrap_ks(const WeightedECDF& a, const WeightedECDF& b, int resamples, double level,
                      std::uint64_t seed) {
  if (a.empty() || b.empty() || resamples < 1) throw StatsError("bootstrap: empty sample");
  std::vector<double> stats;
  stats.reserve(resamples);
  std::vector<double> ca(a.size()), cb(b.size()), wa(a.size()), wb(b.size());
  for (int r = 0; r < resamples; ++r) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
    multinomial_counts(rng, ca);
    multinomial_counts(rng, cb);
    for (std::size_t i = 0; i < ca.size(); ++i) wa[i] = a.weights()[i] * ca[i];
    for (std::size_t i = 0; i < cb.size(); ++i) wb[i] = b.weights()[i] * cb[i];
    const auto ra = WeightedECDF::presorted(a.values(), wa);
    const auto rb = WeightedECDF::presorted(b.values(), wb);
    if (ra.empty() || rb.empty()) continue;
    stats.push_back(weighted_ks(ra, rb, 0.0));
  }
  return percentile_interval(std::move(stats), level);
}

double semianalytic_weight(double xi_weight, double sigma, double phi, double gamma_hat, double a) {
  const double rate = 2.0 * gamma_hat * phi;
  const double x = rate * a / sigma;
  // xi_weight * sigma = D; -expm1(-x) = 1 - e^{-x} without cancellation
  if (!std::isfinite(x)) return xi_weight * sigma / rate;
  return xi_weight * sigma * (-std::expm1(-x)) / rate;
}

std::vector<SweepRow> convergence_sweep(const WeightedSample& sim, const XiWeights& xi,
                                        std::span<const double> thresholds, const SweepOptions& opt) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (xi.value.size() != xi.w.size() || xi.value.size() != xi.sigma.size() || xi.value.size() != xi.phi.size())
    throw StatsError("convergence_sweep: inconsistent xi sample");
  const WeightedECDF xi_ecdf(xi.value, xi.w);
  std::vector<SweepRow> rows;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const double a = thresholds[t];
    SweepRow row;
    row.a = a;
    row.simplex_frac = row.simplex_frac_lo = row.simplex_frac_hi = nan;
    row.ks_sim_semi = row.ks_sim_xi = row.ks_semi_xi = row.ks_ci_width = nan;
    std::vector<std::string> notes;

    std::vector<double> vals, ws, simp;
    for (std::size_t i = 0; i < sim.value.size(); ++i) {
      if (!(sim.sigma[i] < a)) continue;
      vals.push_back(sim.value[i]);
      ws.push_back(sim.weight[i]);
      simp.push_back(sim.simplex[i]);
    }
    row.n = static_cast<long>(vals.size());
    if (vals.empty()) {
      notes.push_back("no simulated faces below threshold");
    } else {
      const WeightedECDF probe(vals, ws);
      row.ess = probe.ess();
      row.simplex_frac = weighted_mean(simp, ws);
      const auto ci = bootstrap_weighted_mean(simp, ws, opt.resamples, opt.level, derive_seed(opt.seed, 2 * t));
      row.simplex_frac_lo = ci.lo;
      row.simplex_frac_hi = ci.hi;
    }

    std::vector<double> semi_w(xi.w.size());
    for (std::size_t i = 0; i < semi_w.size(); ++i)
      semi_w[i] = semianalytic_weight(xi.w[i], xi.sigma[i], xi.phi[i], opt.gamma_hat, a);
    const WeightedECDF semi(xi.value, semi_w);
    try {
      row.ks_semi_xi = weighted_ks(semi, xi_ecdf, opt.min_ess);
    } catch (const StatsError& e) {
      notes.push_back(e.what());
    }

    if (row.ess >= opt.min_ess) {
      const WeightedECDF sim_ecdf(vals, ws);
      try {
        row.ks_sim_semi = weighted_ks(sim_ecdf, semi, opt.min_ess);
        row.ks_sim_xi = weighted_ks(sim_ecdf, xi_ecdf, opt.min_ess);
        const auto ci = bootstrap_ks(sim_ecdf, xi_ecdf, opt.resamples, opt.level, derive_seed(opt.seed, 2 * t + 1));
        row.ks_ci_width = ci.hi - ci.lo;
      } catch (const StatsError& e) {
        notes.push_back(e.what());
      }
    } else if (!vals.empty()) {
      std::ostringstream os;
      os << "simulated ESS " << row.ess << " below " << opt.min_ess;
      notes.push_back(os.str());
    }
    for (std::size_t i = 0; i < notes.size(); ++i) row.note += (i ? "; " : "") + notes[i];
    rows.push_back(row);
  }
  return rows;
}

}  // namespace phtess
