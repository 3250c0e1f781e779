#include "phtess/limitshape.hpp"

#include "phtess/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phtess {
namespace {

template <class Item>
struct Block {
  std::vector<Item> items;
  std::vector<long> draw;
  std::vector<char> negative;
};

// Runs tuple blocks until n items are accepted. Block b always uses stream
// (seed, b) and results are taken in block order, so the output does not
// depend on the number of workers.
template <class Item, class Fill>
std::vector<Item> run_blocks(long n, std::uint64_t seed, int workers, TupleCounters& counters, Fill&& fill) {
  counters = {};
  std::vector<Item> out;
  if (n <= 0) return out;
  constexpr long kProbeDraws = 100000;
  bool probed = false;
  long next_block = 0;
  while (static_cast<long>(out.size()) < n) {
    const long remaining = n - static_cast<long>(out.size());
    long wave = std::max(1, workers);
    if (next_block > 0 && counters.accepted > 0) {
      const double per_block = static_cast<double>(counters.accepted) / next_block;
      wave = std::max(wave, static_cast<long>(std::ceil(remaining / per_block)));
    } else if (next_block > 0) {
      wave = std::max<long>(wave, 8);
    }
    wave = std::min<long>(wave, 256);

    std::vector<Block<Item>> blocks(wave);
    parallel_for(static_cast<std::size_t>(wave), workers, [&](std::size_t i) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(next_block) + i);
      fill(rng, blocks[i]);
    });
    for (auto& b : blocks) {
      long last = kTupleBlock - 1;
      for (std::size_t j = 0; j < b.items.size() && static_cast<long>(out.size()) < n; ++j) {
        out.push_back(std::move(b.items[j]));
        ++counters.accepted;
        if (b.negative[j]) ++counters.negative_det;
        last = b.draw[j];
      }
      counters.drawn += static_cast<long>(out.size()) == n ? last + 1 : kTupleBlock;
      if (!probed && counters.drawn >= kProbeDraws) {
        probed = true;
        if (counters.acceptance() < 1e-4) {
          std::ostringstream os;
          os << "P_k acceptance rate " << counters.acceptance() << " below 1e-4 after " << counters.drawn
             << " draws (" << counters.accepted << " accepted); the directional model may not be subspace-free";
          throw SamplerAbort(os.str());
        }
      }
      if (static_cast<long>(out.size()) == n) break;
    }
    next_block += wave;
  }
  return out;
}

std::vector<Vec> draw_tuple(const DirectionalModel& model, Rng& rng) {
  std::vector<Vec> dirs(model.dim + 1);
  for (auto& u : dirs) u = sample_direction(model, rng);
  return dirs;
}

Mat offset_matrix(const TupleSample& t) {
  const int d = static_cast<int>(t.dirs.size()) - 1;
  Mat m = Mat::Zero(d + 1, d + 1);
  for (int i = 0; i <= d; ++i) {
    m.row(i).head(d) = t.dirs[i].transpose();
    if (i <= t.k) m(i, d) = t.norms[i];
  }
  return m;
}

void check_dims(const DirectionalModel& model, int k) {
  if (k < 1 || k > std::min(model.dim, 3)) throw std::invalid_argument("k must satisfy 1 <= k <= min(d, 3)");
}

}  // namespace

TupleSample build_tuple(std::span<const Vec> dirs, int k) {
  TupleSample t;
  t.k = k;
  t.dirs.assign(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::invalid_argument("build_tuple: no directions");
  const int d = static_cast<int>(dirs.front().size());
  if (static_cast<int>(dirs.size()) != d + 1) throw std::invalid_argument("build_tuple: need d + 1 directions");
  if (k < 1 || k > std::min(d, 3)) throw std::invalid_argument("build_tuple: k must satisfy 1 <= k <= min(d, 3)");

  // any d of the d + 1 directions linearly independent
  for (int skip = 0; skip <= d; ++skip) {
    Mat m(d, d);
    for (int j = 0, c = 0; j <= d; ++j)
      if (j != skip) m.col(c++) = dirs[j];
    if (std::abs(m.determinant()) <= kGeomTol) return t;
  }

  Mat rest(d, d - k);
  for (int j = k + 1; j <= d; ++j) rest.col(j - k - 1) = dirs[j];
  t.frame = Flat::through_origin(orthogonal_complement(rest, d));
  for (int j = 0; j <= k; ++j) {
    const Vec y = t.frame.local_direction(dirs[j]);
    const double len = y.norm();
    if (len < 1e-12) return t;
    t.projections.push_back(y);
    t.norms.push_back(len);
  }
  if (!positively_spans(t.projections, k, kSpanMargin)) return t;

  std::vector<Halfspace> hs;
  for (int j = 0; j <= k; ++j) hs.push_back({t.projections[j] / t.norms[j], 1.0});
  t.simplex = simplex_from_halfspaces(hs, t.frame);
  t.signed_jacobian = offset_matrix(t).determinant();
  t.jacobian = std::abs(t.signed_jacobian);
  t.in_Pk = true;
  return t;
}

std::vector<double> t_offsets(const TupleSample& tuple, const Vec& z, double r) {
  std::vector<double> t;
  for (std::size_t j = 0; j < tuple.dirs.size(); ++j) {
    double v = z.dot(tuple.dirs[j]);
    if (static_cast<int>(j) <= tuple.k) v += r * tuple.norms[j];
    t.push_back(v);
  }
  return t;
}

XiRun sample_xi(const DirectionalModel& model, const TupleOptions& opt) {
  check_dims(model, opt.k);
  XiRun run;
  run.samples = run_blocks<XiSample>(opt.n, opt.seed, opt.workers, run.counters, [&](Rng& rng, Block<XiSample>& b) {
    for (long i = 0; i < kTupleBlock; ++i) {
      const auto dirs = draw_tuple(model, rng);
      const TupleSample t = build_tuple(dirs, opt.k);
      if (!t.in_Pk) continue;
      XiSample s;
      s.phiT = phi_functional(t.simplex, model, opt.phi_budget, rng).value;
      s.phiB = phi_of_flat_ball(t.frame, model, opt.phi_budget, rng).value;
      s.sigma = size_of(t.simplex, opt.sigma);
      s.w = t.jacobian / s.sigma;
      s.shape = describe_shape(t.simplex, 1.0, s.phiT);
      b.items.push_back(s);
      b.draw.push_back(i);
      b.negative.push_back(t.signed_jacobian < 0.0);
    }
  });
  return run;
}

std::vector<double> semianalytic_weights(std::span<const XiSample> xi, double gamma_hat, double a) {
  std::vector<double> w;
  w.reserve(xi.size());
  for (const auto& s : xi) w.push_back(semianalytic_weight(s.w, s.sigma, s.phiT, gamma_hat, a));
  return w;
}

SemianalyticLaw semianalytic_small_face_law(const DirectionalModel& model, const TupleOptions& opt,
                                            double gamma_hat, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("threshold a must be positive");
  if (!(gamma_hat > 0.0)) throw std::invalid_argument("intensity gamma must be positive");
  XiRun xi = sample_xi(model, opt);
  SemianalyticLaw law;
  law.weights = semianalytic_weights(xi.samples, gamma_hat, a);
  law.samples = std::move(xi.samples);
  law.counters = xi.counters;
  double sum = 0.0;
  for (double w : law.weights) sum += w;
  law.mass = law.counters.drawn > 0 ? sum / law.counters.drawn : 0.0;
  return law;
}

PolytopeK typical_face_polytope(const TupleSample& tuple, double r, std::span<const Hyperplane> residual) {
  const PolytopeK rt = tuple.simplex.scaled(r);
  std::vector<Halfspace> hs = rt.halfspaces;
  for (const auto& h : residual) {
    const Vec a = tuple.frame.local_direction(h.normal);
    const double len = a.norm();
    if (len < 1e-12) continue;
    // the closed halfspace containing o
    if (h.offset >= 0.0)
      hs.push_back({a / len, h.offset / len});
    else
      hs.push_back({-a / len, -h.offset / len});
  }
  double reach = 0.0;
  for (const auto& y : rt.local_vertices) reach = std::max(reach, y.norm());
  const auto p = halfspace_intersection(hs, tuple.frame, 2.0 * reach + 1.0);
  if (!p || p->truncated) throw GeometryError("typical face: residual clipping lost the inball");
  return *p;
}

DirectRun sample_typical_face_direct(const DirectionalModel& model, const TupleOptions& opt, double gamma_hat) {
  check_dims(model, opt.k);
  const ProcessConfig cfg(gamma_hat, model);
  struct Item {
    FaceRecord rec;
    bool zero = false;
  };
  DirectRun run;
  auto items = run_blocks<Item>(opt.n, opt.seed, opt.workers, run.counters, [&](Rng& rng, Block<Item>& b) {
    for (long i = 0; i < kTupleBlock; ++i) {
      const auto dirs = draw_tuple(model, rng);
      const TupleSample t = build_tuple(dirs, opt.k);
      if (!t.in_Pk) continue;
      const double rate = 2.0 * gamma_hat * phi_of_flat_ball(t.frame, model, opt.phi_budget, rng).value;
      const double r = rng.exponential(rate);
      const PolytopeK rt = t.simplex.scaled(r);
      const auto residual = sample_hitting_K_missing_inball(cfg, rt, t.frame, r, rng);

      const PolytopeK p = typical_face_polytope(t, r, residual);

      Item item;
      FaceRecord& rec = item.rec;
      rec.k = opt.k;
      rec.z = Vec::Zero(model.dim);
      rec.r = r;
      rec.sigma = size_of(p, opt.sigma);
      rec.fcount = p.facet_count();
      rec.vcount = p.vertex_count();
      rec.phi = phi_functional(p, model, opt.phi_budget, rng).value;
      rec.shape = describe_shape(p, r, rec.phi);
      rec.w = t.jacobian / rate;
      item.zero = residual.empty();
      b.items.push_back(std::move(item));
      b.draw.push_back(i);
      b.negative.push_back(t.signed_jacobian < 0.0);
    }
  });
  run.records.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    items[i].rec.rep = static_cast<long>(i);
    if (items[i].zero) ++run.zero_residual;
    run.records.push_back(std::move(items[i].rec));
  }
  return run;
}

TestFunction parse_test_function(const std::string& name) {
  if (name == "zero") return TestFunction::zero;
  if (name == "inball_box") return TestFunction::inball_box;
  if (name == "gauss_bump") return TestFunction::gauss_bump;
  if (name == "hit_ball") return TestFunction::hit_ball;
  throw std::invalid_argument("unknown test function '" + name + "' (expected zero|inball_box|gauss_bump|hit_ball)");
}

namespace {

struct Support {
  double tau_box;   // LHS: tau_j uniform on [-tau_box, tau_box]
  double z_radius;  // RHS: z uniform in this ball
  double r_max;     // RHS: r uniform on [0, r_max]
};

Support support_of(TestFunction f) {
  switch (f) {
    case TestFunction::gauss_bump:
      return {4.0, 2.0, 2.0};
    case TestFunction::hit_ball:
      return {1.0, 0.0, 0.0};
    default:
      return {2.0, 1.0, 1.0};
  }
}

// Incenter and inradius of the configuration H(u_j, tau_j): the signs of
// u_1..u_{k+1} are chosen so the projections positively span L_u; the
// remaining global sign ambiguity only flips r.
bool incenter_of(std::vector<Vec> dirs, std::vector<double> tau, int k, Vec& z, double& r) {
  const int d = static_cast<int>(dirs.size()) - 1;
  Mat rest(d, d - k);
  for (int j = k + 1; j <= d; ++j) rest.col(j - k - 1) = dirs[j];
  if (numerical_rank(rest) < d - k) return false;
  const Mat basis = orthogonal_complement(rest, d);
  Mat y(k, k + 1);
  for (int j = 0; j <= k; ++j) y.col(j) = basis.transpose() * dirs[j];
  for (int j = 0; j <= k; ++j) {
    Mat minor(k, k);
    for (int c = 0, col = 0; c <= k; ++c)
      if (c != j) minor.col(col++) = y.col(c);
    const double lambda = ((j % 2) ? -1.0 : 1.0) * minor.determinant();
    if (lambda < 0.0) {
      dirs[j] = -dirs[j];
      tau[j] = -tau[j];
    }
  }
  const TupleSample t = build_tuple(dirs, k);
  if (!t.in_Pk) return false;
  Vec rhs(d + 1);
  for (int j = 0; j <= d; ++j) rhs[j] = tau[j];
  const Vec sol = offset_matrix(t).partialPivLu().solve(rhs);
  z = sol.head(d);
  r = std::abs(sol[d]);
  return true;
}

double evaluate(TestFunction f, const std::vector<Vec>& dirs, const std::vector<double>& tau, int k) {
  switch (f) {
    case TestFunction::zero:
      return 0.0;
    case TestFunction::hit_ball:
      for (double t : tau)
        if (std::abs(t) > 1.0) return 0.0;
      return 1.0;
    case TestFunction::inball_box:
    case TestFunction::gauss_bump: {
      Vec z;
      double r = 0.0;
      if (!incenter_of(dirs, tau, k, z, r)) return 0.0;
      if (f == TestFunction::inball_box) return (z.norm() <= 1.0 && r <= 1.0) ? 1.0 : 0.0;
      if (z.norm() > 2.0 || r > 2.0 || std::abs(dirs[0][0]) < 0.5) return 0.0;
      double g = 1.0;
      for (double t : tau) g *= std::exp(-0.5 * t * t);
      return g;
    }
  }
  return 0.0;
}

Vec uniform_in_ball(int d, double radius, Rng& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  v.normalize();
  return v * (radius * std::pow(rng.uniform(), 1.0 / d));
}

struct Moments {
  double sum = 0.0, sum2 = 0.0;
  long n = 0;
  void add(double x) {
    sum += x;
    sum2 += x * x;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double se() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum2 / n - m * m)) / (n - 1));
  }
};

}  // namespace

Lemma33Result lemma33_consistency(const DirectionalModel& model, int k, double gamma_hat, TestFunction f, long n,
                                  std::uint64_t seed, int workers) {
  check_dims(model, k);
  if (!(gamma_hat > 0.0)) throw std::invalid_argument("intensity gamma must be positive");
  if (n < 2) throw std::invalid_argument("lemma33_consistency needs n >= 2");
  const int d = model.dim;
  const Support sup = support_of(f);
  const double g_pow = std::pow(gamma_hat, d + 1);
  const double lhs_scale = g_pow * std::pow(2.0 * sup.tau_box, d + 1);
  const double rhs_scale = std::pow(2.0, k + 1) * g_pow;
  const double z_volume = unit_ball_volume(d) * std::pow(sup.z_radius, d);

  const long blocks = (n + kTupleBlock - 1) / kTupleBlock;
  std::vector<Moments> lhs(blocks), rhs(blocks);
  parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
    const long count = std::min(kTupleBlock, n - static_cast<long>(b) * kTupleBlock);
    Rng lrng = Rng::stream(seed, 2 * b);
    Rng rrng = Rng::stream(seed, 2 * b + 1);
    std::vector<double> tau(d + 1);
    for (long i = 0; i < count; ++i) {
      const auto dirs = draw_tuple(model, lrng);
      for (auto& t : tau) t = lrng.uniform(-sup.tau_box, sup.tau_box);
      lhs[b].add(lhs_scale * evaluate(f, dirs, tau, k));
    }
    for (long i = 0; i < count; ++i) {
      const auto dirs = draw_tuple(model, rrng);
      const TupleSample t = build_tuple(dirs, k);
      if (!t.in_Pk) {
        rhs[b].add(0.0);
        continue;
      }
      if (f == TestFunction::hit_ball) {
        // (z, r) = M^{-1} w with w uniform on the cube: density D / 2^{d+1}
        Vec w(d + 1);
        for (int j = 0; j <= d; ++j) w[j] = rrng.uniform(-1.0, 1.0);
        const Vec sol = offset_matrix(t).partialPivLu().solve(w);
        if (sol[d] <= 0.0) {
          rhs[b].add(0.0);
          continue;
        }
        std::vector<double> tw(w.data(), w.data() + d + 1);
        rhs[b].add(rhs_scale * std::pow(2.0, d + 1) * evaluate(f, dirs, tw, k));
        continue;
      }
      const Vec z = uniform_in_ball(d, sup.z_radius, rrng);
      const double r = rrng.uniform(0.0, sup.r_max);
      const auto offsets = t_offsets(t, z, r);
      rhs[b].add(rhs_scale * t.jacobian * z_volume * sup.r_max * evaluate(f, dirs, offsets, k));
    }
  });
  Moments l, r;
  for (long b = 0; b < blocks; ++b) {
    l.sum += lhs[b].sum;
    l.sum2 += lhs[b].sum2;
    l.n += lhs[b].n;
    r.sum += rhs[b].sum;
    r.sum2 += rhs[b].sum2;
    r.n += rhs[b].n;
  }
  Lemma33Result res;
  res.n = n;
  res.lhs = l.mean();
  res.lhs_se = l.se();
  res.rhs = r.mean();
  res.rhs_se = r.se();
  const double se = std::hypot(res.lhs_se, res.rhs_se);
  res.z = se > 0.0 ? (res.lhs - res.rhs) / se : (res.lhs == res.rhs ? 0.0 : std::copysign(INFINITY, res.lhs - res.rhs));
  return res;
}

}  // namespace phtess
