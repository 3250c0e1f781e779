// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Optional arguments select criteria by number.

#include "phtess/arrangement.hpp"
#include "phtess/cli.hpp"
#include "phtess/limitshape.hpp"
#include "phtess/lp.hpp"
#include "phtess/parallel.hpp"
#include "phtess/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace phtess;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& x) {
    os_ << x;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// ---------------------------------------------------------------- criterion 1

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long face_count_formula(int n, int d, int k) {
  long s = 0;
  for (int i = 0; i <= k; ++i) s += binom(n - d + k, i);
  return binom(n, d - k) * s;
}

// Faces by dimension from exhaustive sign vectors: s is a face iff
// {x : sign(<u_i, x> - tau_i) = s_i for all i} is nonempty. Decided by an LP
// maximizing a slack t on the strict rows; x = x+ - x-.
std::vector<long> sign_vector_face_counts(const std::vector<Hyperplane>& hs, int d) {
  const int n = static_cast<int>(hs.size());
  std::vector<long> counts(d + 1, 0);
  std::vector<int> s(n);
  long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    long c = code;
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
      s[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
      zeros += s[i] == 0;
    }
    if (zeros > d) continue;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(2 * d + 1, 0.0);
      for (int j = 0; j < d; ++j) {
        row[j] = hs[i].normal[j];
        row[d + j] = -hs[i].normal[j];
      }
      if (s[i] == 0) {
        a.push_back(row);
        b.push_back(hs[i].offset);
        for (auto& x : row) x = -x;
        a.push_back(row);
        b.push_back(-hs[i].offset);
      } else {
        for (auto& x : row) x *= -s[i];
        row[2 * d] = 1.0;
        a.push_back(row);
        b.push_back(-s[i] * hs[i].offset);
      }
    }
    std::vector<double> cap(2 * d + 1, 0.0);
    cap[2 * d] = 1.0;
    a.push_back(cap);
    b.push_back(1.0);
    const auto res = lp::maximize(a, b, cap);
    if (res.status == lp::Status::optimal && (zeros == n || res.value > 1e-9)) ++counts[d - zeros];
  }
  return counts;
}

Outcome criterion1() {
  Rng rng(101);
  long inputs = 0, mismatches = 0, formula_mismatches = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int input = 0; input < 100; ++input) {
      const int n = 1 + input % 8;
      std::vector<Hyperplane> hs;
      do {
        hs.clear();
        for (int i = 0; i < n; ++i) {
          Vec u(d);
          for (int j = 0; j < d; ++j) u[j] = rng.normal();
          hs.push_back(Hyperplane::canonical(u, rng.uniform(-1, 1)));
        }
      } while (!translational_general_position(hs) || !directional_general_position(hs));
      ++inputs;
      const auto oracle = sign_vector_face_counts(hs, d);
      for (int k = 0; k <= d; ++k) {
        const long formula = face_count_formula(n, d, k);
        if (count_k_faces_full(hs, k) != oracle[k]) ++mismatches;
        if (formula != oracle[k]) ++formula_mismatches;
      }
    }
  }
  Detail det;
  det << inputs << " arrangements (d = 1..3, n = 1..8), " << mismatches << " count mismatches, "
      << formula_mismatches << " formula mismatches";
  return {mismatches == 0 && formula_mismatches == 0, det.str()};
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion2() {
  const std::vector<std::pair<int, int>> pairs{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}};
  long failures = 0;
  double worst = 0.0;
  Detail det;
  for (auto [d, k] : pairs) {
    const auto model = DirectionalModel::isotropic(d);
    Rng rng(derive_seed(102, d * 10 + k));
    long accepted = 0;
    while (accepted < 10000) {
      std::vector<Vec> dirs;
      for (int j = 0; j <= d; ++j) dirs.push_back(sample_direction(model, rng));
      const auto t = build_tuple(dirs, k);
      if (!t.in_Pk) continue;
      ++accepted;
      const auto ib = inball(t.simplex);
      const double err = std::max(ib.center.norm(), std::abs(ib.radius - 1.0));
      worst = std::max(worst, err);
      if (!(err <= 1e-9) || !ib.unique) ++failures;
    }
  }
  det << "5 x 10^4 tuples, " << failures << " failures, max deviation " << worst;
  return {failures == 0, det.str()};
}

// ---------------------------------------------------------------- criterion 3

// Simplex volume from the Cayley-Menger determinant of the pairwise squared
// distances, in long double.
long double cayley_menger_volume(const std::vector<Vec>& pts) {
  const int m = static_cast<int>(pts.size());  // d + 1 points
  const int d = m - 1;
  const int size = m + 1;
  std::vector<std::vector<long double>> a(size, std::vector<long double>(size, 0.0L));
  for (int i = 1; i < size; ++i) a[0][i] = a[i][0] = 1.0L;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      long double s = 0.0L;
      for (int c = 0; c < pts[i].size(); ++c) {
        const long double x = static_cast<long double>(pts[i][c]) - pts[j][c];
        s += x * x;
      }
      a[i + 1][j + 1] = s;
    }
  // Gaussian elimination with partial pivoting
  long double det = 1.0L;
  for (int c = 0; c < size; ++c) {
    int p = c;
    for (int r = c + 1; r < size; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    if (a[p][c] == 0.0L) return 0.0L;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < size; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (int q = c; q < size; ++q) a[r][q] -= f * a[c][q];
    }
  }
  long double fact = 1.0L;
  for (int i = 2; i <= d; ++i) fact *= i;
  const long double sign = (d % 2 == 0) ? -1.0L : 1.0L;  // (-1)^(d+1)
  const long double v2 = sign * det / (std::pow(2.0L, d) * fact * fact);
  return v2 > 0 ? std::sqrt(v2) : 0.0L;
}

Outcome criterion3() {
  long failures = 0, checked = 0;
  double worst = 0.0;
  for (int d : {2, 3}) {
    const auto model = DirectionalModel::isotropic(d);
    Rng rng(derive_seed(103, d));
    long accepted = 0;
    while (accepted < 1000) {
      std::vector<Vec> dirs;
      for (int j = 0; j <= d; ++j) dirs.push_back(sample_direction(model, rng));
      const auto t = build_tuple(dirs, d);
      if (!t.in_Pk) continue;
      ++accepted;
      long double fact = 1.0L;
      for (int i = 2; i <= d; ++i) fact *= i;
      const long double expect = fact * cayley_menger_volume(dirs);
      const double rel = static_cast<double>(std::fabs(t.jacobian - expect) / expect);
      worst = std::max(worst, rel);
      if (!(rel <= 1e-10)) ++failures;
      ++checked;
    }
  }
  Detail det;
  det << checked << " tuples (d = 2, 3), " << failures << " failures, max relative error " << worst;
  return {failures == 0, det.str()};
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4() {
  Outcome out;
  Detail det;
  const std::vector<std::string> models{"isotropic", "cantor"};
  const std::vector<std::string> functions{"gauss_bump", "hit_ball"};
  double worst = 0.0;
  int runs = 0;
  for (const auto& spec : models) {
    const auto model = DirectionalModel::parse(spec, 2);
    for (int k : {1, 2}) {
      for (const auto& f : functions) {
        const auto r = lemma33_consistency(model, k, 1.0, parse_test_function(f), 1000000,
                                           derive_seed(104, runs), 1);
        ++runs;
        worst = std::max(worst, std::abs(r.z));
        det << spec << "/k" << k << "/" << f << " z=" << r.z << "; ";
        if (!(std::abs(r.z) <= 3.0)) out.pass = false;
      }
    }
  }
  det << "max |z| " << worst;
  out.detail = det.str();
  return out;
}

// ---------------------------------------------------------------- criterion 5

bool hits(const Hyperplane& h, const PolytopeK& p) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& v : p.vertices) {
    const double s = h.signed_distance(v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return lo <= 0.0 && hi >= 0.0;
}

PolytopeK body(const std::vector<Halfspace>& hs, int d) {
  return *halfspace_intersection(hs, Flat::whole_space(d), 10.0);
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Outcome criterion5() {
  Outcome out;
  Detail det;
  const auto unit = [](int d, int i) {
    Vec e = Vec::Zero(d);
    e[i] = 1;
    return e;
  };
  std::vector<std::pair<std::string, PolytopeK>> bodies;
  {
    std::vector<Halfspace> sq;
    for (int i = 0; i < 2; ++i) {
      sq.push_back({unit(2, i), 0.5});
      sq.push_back({-unit(2, i), 0.5});
    }
    bodies.emplace_back("square", body(sq, 2));
    bodies.emplace_back("triangle", body({{vec({-1, 0}), 0.2}, {vec({0, -1}), 0.1},
                                          {vec({1, 1}) / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}},
                                         2));
    std::vector<Halfspace> cube;
    for (int i = 0; i < 3; ++i) {
      cube.push_back({unit(3, i), 0.4});
      cube.push_back({-unit(3, i), 0.6});
    }
    bodies.emplace_back("cube", body(cube, 3));
  }
  const int reps = 10000;
  double min_p = 1.0;
  for (double gamma : {1.0, 3.0}) {
    for (std::size_t b = 0; b < bodies.size(); ++b) {
      const auto& [name, k] = bodies[b];
      const auto model = DirectionalModel::isotropic(k.ambient_dim());
      Rng prng(1);
      const double mean = 2 * gamma * phi_functional(k, model, 4096, prng).value;
      const ProcessConfig cfg(gamma, model);
      std::vector<long> counts(reps);
      for (int i = 0; i < reps; ++i) {
        const auto s = sample_in_ball(cfg, 2.0, derive_seed(105, gamma * 1000 + b * 100000 + i));
        counts[i] = std::count_if(s.hyperplanes.begin(), s.hyperplanes.end(),
                                  [&](const Hyperplane& h) { return hits(h, k); });
      }
      const double p = poisson_gof(counts, mean);
      min_p = std::min(min_p, p);
      if (!(p > 0.001)) {
        out.pass = false;
        det << "gof " << name << " gamma " << gamma << " p=" << p << "; ";
      }
    }
  }
  det << "min hitting-count p " << min_p << "; ";

  // Empty annulus: no hyperplane hits rT while missing the open inball rB.
  // T = T_k(u) of a fixed accepted tuple; checked both on the raw process and
  // on the residual sampler.
  const double r = 0.5;
  const int annulus_reps = 100000;
  double worst_z = 0.0;
  for (auto [d, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
    const auto model = DirectionalModel::isotropic(d);
    Rng trng(derive_seed(106, d));
    TupleSample t;
    do {
      std::vector<Vec> dirs;
      for (int j = 0; j <= d; ++j) dirs.push_back(sample_direction(model, trng));
      t = build_tuple(dirs, k);
    } while (!t.in_Pk);
    const auto rt = t.simplex.scaled(r);
    Rng prng(2);
    const double excess = phi_functional(t.simplex, model, 4096, prng).value -
                          phi_of_flat_ball(t.frame, model, 4096, prng).value;
    double radius = 0.0;
    for (const auto& v : rt.vertices) radius = std::max(radius, v.norm());
    for (double gamma : {1.0, 3.0}) {
      const double p0 = std::exp(-2 * gamma * r * excess);
      const double se = std::sqrt(p0 * (1 - p0) / annulus_reps);
      const ProcessConfig cfg(gamma, model);
      long empty_raw = 0, empty_residual = 0;
      Rng rrng(derive_seed(107, d * 10 + static_cast<int>(gamma)));
      for (int i = 0; i < annulus_reps; ++i) {
        const auto s = sample_in_ball(cfg, radius * 1.01, derive_seed(108 + d, gamma * 1e7 + i));
        bool empty = true;
        for (const auto& h : s.hyperplanes) {
          const double proj = (t.frame.basis.transpose() * h.normal).norm();
          if (hits(h, rt) && std::abs(h.offset) >= r * proj) {
            empty = false;
            break;
          }
        }
        empty_raw += empty;
        empty_residual += sample_hitting_K_missing_inball(cfg, rt, t.frame, r, rrng).empty();
      }
      for (long e : {empty_raw, empty_residual}) {
        const double z = (static_cast<double>(e) / annulus_reps - p0) / se;
        worst_z = std::max(worst_z, std::abs(z));
        if (!(std::abs(z) <= 3.0)) {
          out.pass = false;
          det << "annulus d" << d << " gamma " << gamma << " z=" << z << "; ";
        }
      }
    }
  }
  det << "annulus max |z| " << worst_z;
  out.detail = det.str();
  return out;
}

// ------------------------------------------------------------ criteria 6 - 8

std::vector<FaceRecord> simulate(const DirectionalModel& model, int k, double window_radius, double obs_radius,
                                 long reps, std::uint64_t seed, EnumerationStats* stats) {
  const ProcessConfig pc(1.0, model);
  EnumerationOptions opt;
  opt.k = k;
  opt.obs_radius = obs_radius;
  opt.sigma = SizeKind::diameter;
  std::vector<std::vector<FaceRecord>> per(reps);
  std::vector<EnumerationStats> st(reps);
  parallel_for(static_cast<std::size_t>(reps), 1, [&](std::size_t i) {
    per[i] = enumerate_k_faces(sample_in_ball(pc, window_radius, derive_seed(seed, i)), model, opt, &st[i],
                               static_cast<long>(i));
  });
  std::vector<FaceRecord> all;
  for (long i = 0; i < reps; ++i) {
    stats->merge(st[i]);
    all.insert(all.end(), per[i].begin(), per[i].end());
  }
  return all;
}

WeightedECDF ecdf_of(const std::vector<FaceRecord>& recs, Descriptor d) {
  std::vector<double> v, w;
  for (const auto& r : recs) {
    v.push_back(descriptor_of(r, d));
    w.push_back(r.weight());
  }
  return WeightedECDF(std::move(v), std::move(w));
}

Outcome criterion6() {
  Outcome out;
  Detail det;
  const auto model = DirectionalModel::isotropic(2);
  for (int k : {1, 2}) {
    EnumerationStats st;
    const auto sim = simulate(model, k, 30.0, 25.0, k == 1 ? 300 : 200, derive_seed(109, k), &st);
    TupleOptions opt;
    opt.k = k;
    opt.n = 60000;
    opt.seed = derive_seed(110, k);
    const auto direct = sample_typical_face_direct(model, opt, 1.0);
    for (Descriptor d : {Descriptor::norm_inradius, Descriptor::fcount}) {
      const auto a = ecdf_of(sim, d), b = ecdf_of(direct.records, d);
      const double ks = weighted_ks(a, b, 1e4);
      det << "k" << k << " " << descriptor_name(d) << " KS=" << ks << " (ESS " << std::lround(a.ess()) << "/"
          << std::lround(b.ess()) << "); ";
      if (!(ks <= 0.05)) out.pass = false;
    }
  }
  out.detail = det.str();
  return out;
}

struct SweepCase {
  std::string label;
  std::string phi;
  int d, k;
  double window_radius, obs_radius;
  long reps;
  bool check_sim_ks;
};

const std::vector<double> kThresholds{1.6, 0.8, 0.4, 0.2, 0.1};

// Sweep criteria (i)-(iii); (iii) only when check_sim_ks.
bool sweep_checks(const SweepCase& c, std::uint64_t seed, Detail& det) {
  const auto model = DirectionalModel::parse(c.phi, c.d);
  EnumerationStats st;
  const auto recs = simulate(model, c.k, c.window_radius, c.obs_radius, c.reps, derive_seed(seed, 1), &st);
  TupleOptions opt;
  opt.k = c.k;
  opt.n = 100000;
  opt.seed = derive_seed(seed, 2);
  const auto xi = sample_xi(model, opt);

  WeightedSample sim;
  for (const auto& r : recs) {
    sim.value.push_back(r.shape.norm_inradius);
    sim.sigma.push_back(r.sigma);
    sim.weight.push_back(r.weight());
    sim.simplex.push_back(r.is_simplex() ? 1.0 : 0.0);
  }
  XiWeights xw;
  for (const auto& s : xi.samples) {
    xw.value.push_back(s.shape.norm_inradius);
    xw.w.push_back(s.w);
    xw.sigma.push_back(s.sigma);
    xw.phi.push_back(s.phiT);
  }
  SweepOptions so;
  so.seed = derive_seed(seed, 3);
  so.resamples = 400;
  const auto rows = convergence_sweep(sim, xw, kThresholds, so);

  bool pass = true;
  det << c.label << " [" << recs.size() << " faces]: ";
  // (i) simplex fraction
  const SweepRow* last_feasible = nullptr;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].n < 100) continue;
    if (last_feasible) {
      const double half = std::max(last_feasible->simplex_frac_hi - last_feasible->simplex_frac_lo,
                                   rows[t].simplex_frac_hi - rows[t].simplex_frac_lo) / 2;
      if (rows[t].simplex_frac < last_feasible->simplex_frac - 2 * half) {
        pass = false;
        det << "simplex fraction drops at a=" << rows[t].a << "; ";
      }
    }
    last_feasible = &rows[t];
  }
  if (!last_feasible || !(last_feasible->simplex_frac > 0.9)) {
    pass = false;
    det << "simplex fraction at smallest feasible a not above 0.9; ";
  }
  if (last_feasible) det << "simplex " << rows.front().simplex_frac << "->" << last_feasible->simplex_frac
                         << " (a=" << last_feasible->a << "), ";
  // (ii) semianalytic vs xi
  for (std::size_t t = 1; t < rows.size(); ++t)
    if (!(rows[t].ks_semi_xi <= rows[t - 1].ks_semi_xi + 1e-3)) {
      pass = false;
      det << "KS(semi, xi) rises at a=" << rows[t].a << "; ";
    }
  if (!(rows.back().ks_semi_xi <= 0.02)) pass = false;
  det << "KS(semi,xi) " << rows.front().ks_semi_xi << "->" << rows.back().ks_semi_xi;
  // (iii) simulation vs xi
  if (c.check_sim_ks) {
    const SweepRow* smallest = nullptr;
    for (const auto& r : rows)
      if (r.n >= 300) smallest = &r;
    if (!smallest || !(smallest->ks_sim_xi <= 0.08)) pass = false;
    if (smallest) det << ", KS(sim,xi) " << smallest->ks_sim_xi << " at a=" << smallest->a << " (n=" << smallest->n
                      << ")";
    else det << ", no threshold with 300 faces";
  }
  det << "; ";
  return pass;
}

Outcome criterion7() {
  const std::vector<SweepCase> cases{
      {"d2k1", "isotropic", 2, 1, 30.0, 25.0, 300, true},
      {"d2k2", "isotropic", 2, 2, 30.0, 25.0, 600, true},
      {"d3k2", "isotropic", 3, 2, 15.0, 12.0, 600, true},
  };
  Outcome out;
  Detail det;
  for (std::size_t i = 0; i < cases.size(); ++i) out.pass &= sweep_checks(cases[i], derive_seed(111, i), det);
  out.detail = det.str();
  return out;
}

Outcome criterion8() {
  Outcome out;
  Detail det;
  out.pass = sweep_checks({"smallcircle d3k2", "smallcircle:{axis:[0,0,1],c:0.5}", 3, 2, 15.0, 12.0, 600, false},
                          112, det);
  out.detail = det.str();
  return out;
}

// ---------------------------------------------------------------- criterion 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion9() {
  const fs::path root = fs::temp_directory_path() / "phtess_acceptance_repro";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> runs{
      {"simulate", "--dim", "2", "--k", "2", "--window-radius", "15", "--obs-radius", "10", "--reps", "40"},
      {"simulate", "--dim", "3", "--k", "2", "--window-radius", "8", "--obs-radius", "6", "--reps", "8",
       "--phi", "vmf:[{mu:[0,0,1],kappa:2,w:1}]"},
      {"limit", "--dim", "3", "--k", "2", "--samples", "20000"},
      {"direct", "--dim", "2", "--k", "2", "--samples", "10000"},
  };
  Outcome out;
  Detail det;
  long bytes = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::map<std::string, std::string> reference;
    for (const char* workers : {"1", "4", "8"}) {
      const fs::path dir = root / std::to_string(r) / workers;
      std::vector<std::string> args{"phtess"};
      args.insert(args.end(), runs[r].begin(), runs[r].end());
      for (const char* extra : {"--seed", "2024", "--workers", workers, "--out"}) args.emplace_back(extra);
      args.push_back(dir.string());
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream sink;
      if (cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink) != 0) {
        out.pass = false;
        det << runs[r][0] << " failed at " << workers << " workers; ";
        continue;
      }
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".jsonl") continue;
        const auto name = e.path().filename().string();
        const auto content = slurp(e.path());
        if (!reference.count(name)) {
          reference[name] = content;
          bytes += static_cast<long>(content.size());
        } else if (reference[name] != content) {
          out.pass = false;
          det << runs[r][0] << " " << name << " differs at " << workers << " workers; ";
        }
      }
    }
  }
  fs::remove_all(root);
  det << runs.size() << " runs, " << bytes << " bytes compared at 1/4/8 workers";
  out.detail = det.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"arrangement face counts vs sign-vector oracle", criterion1},
      {"T_k(u) has inball (o, 1, unique)", criterion2},
      {"D_d = d! Delta", criterion3},
      {"change of variables z-scores", criterion4},
      {"Poisson hitting counts and empty annulus", criterion5},
      {"direct sampler vs arrangement typical faces", criterion6},
      {"small-face sweep (isotropic)", criterion7},
      {"small-face sweep (small circle)", criterion8},
      {"byte-identical output across worker counts", criterion9},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " -- " << o.detail
              << " [" << std::fixed << std::setprecision(1) << secs << " s]" << std::defaultfloat << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
