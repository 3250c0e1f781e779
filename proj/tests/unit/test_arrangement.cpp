#include "doctest.h"
#include "helpers.hpp"
#include "phtess/arrangement.hpp"
#include "phtess/lp.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace phtess;
using testutil::vec;

namespace {

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

std::vector<Hyperplane> random_arrangement(Rng& rng, int n, int d, double spread = 1.0) {
  std::vector<Hyperplane> hs;
  for (int i = 0; i < n; ++i) {
    Vec u(d);
    for (int j = 0; j < d; ++j) u[j] = rng.normal();
    hs.push_back(Hyperplane::canonical(u, rng.uniform(-spread, spread)));
  }
  return hs;
}

// Faces by dimension, from exhaustive sign vectors: a sign vector s is a face
// iff {x : sign(<u_i, x> - tau_i) = s_i} is nonempty, decided by an LP with a
// slack t on the strict rows. Free x is split as x+ - x-.
std::vector<long> sign_vector_face_counts(const std::vector<Hyperplane>& hs, int d) {
  const int n = static_cast<int>(hs.size());
  std::vector<long> counts(d + 1, 0);
  std::vector<int> s(n, -1);
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
    // variables: x+ (d), x- (d), t
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
        // s (<u,x> - tau) >= t  <=>  -s <u,x> + t <= -s tau
        for (auto& x : row) x *= -s[i];
        row[2 * d] = 1.0;
        a.push_back(row);
        b.push_back(-s[i] * hs[i].offset);
      }
    }
    std::vector<double> t_cap(2 * d + 1, 0.0);
    t_cap[2 * d] = 1.0;
    a.push_back(t_cap);
    b.push_back(1.0);
    std::vector<double> obj(2 * d + 1, 0.0);
    obj[2 * d] = 1.0;
    const auto res = lp::maximize(a, b, obj);
    const bool strict_rows = zeros < n;
    if (res.status == lp::Status::optimal && (!strict_rows || res.value > 1e-9)) ++counts[d - zeros];
  }
  return counts;
}

HyperplaneSample as_sample(std::vector<Hyperplane> hs, double radius) {
  HyperplaneSample s;
  s.hyperplanes = std::move(hs);
  s.window_radius = radius;
  return s;
}

int edge_count(const PolytopeK& p) {
  int e = 0;
  for (int i = 0; i < p.vertex_count(); ++i)
    for (int j = i + 1; j < p.vertex_count(); ++j) {
      int common = 0;
      for (int a : p.incidence[i])
        for (int b : p.incidence[j]) common += a == b;
      e += common >= p.dim() - 1;
    }
  return e;
}

std::vector<long> admitted_counts(double gamma, double radius, double obs, int reps, std::uint64_t seed) {
  const auto model = DirectionalModel::isotropic(2);
  const ProcessConfig cfg(gamma, model);
  EnumerationOptions opt;
  opt.k = 2;
  opt.obs_radius = obs;
  opt.phi_budget = 4096;
  std::vector<long> counts;
  for (int i = 0; i < reps; ++i) {
    EnumerationStats st;
    enumerate_k_faces(sample_in_ball(cfg, radius, derive_seed(seed, i)), model, opt, &st, i);
    counts.push_back(st.admitted);
  }
  return counts;
}

}  // namespace

TEST_CASE("three lines in general position") {
  const std::vector<Hyperplane> hs{Hyperplane::canonical(vec({1, 0}), 0), Hyperplane::canonical(vec({0, 1}), 0),
                                   Hyperplane::canonical(vec({1, 1}), 1)};
  CHECK(count_k_faces_full(hs, 0) == 3);
  CHECK(count_k_faces_full(hs, 1) == 9);
  CHECK(count_k_faces_full(hs, 2) == 7);
  const auto oracle = sign_vector_face_counts(hs, 2);
  CHECK(oracle == std::vector<long>{3, 9, 7});
  // the single bounded cell is the triangle
  const auto cells = window_faces(hs, 2, 10.0);
  REQUIRE(cells.size() == 1);
  CHECK(volume_k(cells[0].polytope) == doctest::Approx(0.5));
  CHECK(window_faces(hs, 1, 10.0).size() == 3);
  CHECK_THROWS_AS(count_k_faces_full(std::vector<Hyperplane>{}, 1), std::invalid_argument);
}

TEST_CASE("full face counts match the formula and the sign-vector oracle") {
  Rng rng(31);
  for (int d : {2, 3}) {
    for (int n = d; n <= 7; ++n) {
      for (int rep = 0; rep < 2; ++rep) {
        const auto hs = random_arrangement(rng, n, d);
        REQUIRE(translational_general_position(hs));
        const auto oracle = sign_vector_face_counts(hs, d);
        for (int k = 0; k <= d; ++k) {
          CAPTURE(d);
          CAPTURE(n);
          CAPTURE(k);
          CHECK(count_k_faces_full(hs, k) == face_count_formula(n, d, k));
          CHECK(oracle[k] == face_count_formula(n, d, k));
        }
      }
    }
  }
}

TEST_CASE("bounded face counts in a huge window") {
  Rng rng(32);
  for (int n = 3; n <= 8; ++n) {
    const auto hs = random_arrangement(rng, n, 2);
    CHECK(window_faces(hs, 2, 1e4).size() == static_cast<std::size_t>(binom(n - 1, 2)));
    CHECK(window_faces(hs, 1, 1e4).size() == static_cast<std::size_t>(n * (n - 2)));
  }
  for (int n = 4; n <= 8; ++n) {
    const auto hs = random_arrangement(rng, n, 3);
    CHECK(window_faces(hs, 3, 1e4).size() == static_cast<std::size_t>(binom(n - 1, 3)));
  }
}

TEST_CASE("each face is emitted once") {
  Rng rng(33);
  for (int d : {2, 3}) {
    for (int k = 1; k <= d; ++k) {
      const auto hs = random_arrangement(rng, 8, d);
      std::set<std::string> seen;
      for (const auto& f : window_faces(hs, k, 1e3)) {
        std::vector<std::vector<long long>> keys;
        for (const auto& v : f.polytope.vertices) {
          std::vector<long long> key;
          for (int j = 0; j < d; ++j) key.push_back(std::llround(v[j] * 1e7));
          keys.push_back(key);
        }
        std::sort(keys.begin(), keys.end());
        std::ostringstream os;
        for (const auto& key : keys)
          for (auto x : key) os << x << ',';
        CHECK(seen.insert(os.str()).second);
      }
      CHECK(!seen.empty());
    }
  }
}

TEST_CASE("Euler relation on bounded 3-cells") {
  const ProcessConfig cfg(2.0, DirectionalModel::isotropic(3));
  long cells = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = sample_in_ball(cfg, 4.0, derive_seed(34, rep));
    for (const auto& f : window_faces(s.hyperplanes, 3, 4.0)) {
      const auto& p = f.polytope;
      CHECK(p.vertex_count() - edge_count(p) + p.facet_count() == 2);
      CHECK(f.defining.empty());
      ++cells;
    }
  }
  CHECK(cells > 20);
}

TEST_CASE("enumeration preconditions and record structure") {
  const auto iso3 = DirectionalModel::isotropic(3);
  EnumerationOptions opt;
  opt.k = 2;
  opt.obs_radius = 3.0;
  // two parallel planes plus generic ones
  std::vector<Hyperplane> hs{Hyperplane::canonical(vec({0, 0, 1}), 0.5), Hyperplane::canonical(vec({0, 0, 1}), -0.5),
                             Hyperplane::canonical(vec({1, 0.2, 0.1}), 0.3),
                             Hyperplane::canonical(vec({0.1, 1, 0.3}), -0.2)};
  EnumerationStats st;
  CHECK(enumerate_k_faces(as_sample(hs, 5.0), iso3, opt, &st).empty());
  CHECK(st.rejected_samples == 1);
  CHECK_FALSE(st.general_position_report.empty());

  opt.obs_radius = 6.0;
  CHECK_THROWS_AS(enumerate_k_faces(as_sample(hs, 5.0), iso3, opt), std::invalid_argument);

  Rng rng(35);
  const auto iso5 = DirectionalModel::isotropic(5);
  EnumerationOptions o5;
  o5.k = 4;
  o5.obs_radius = 1.0;
  try {
    enumerate_k_faces(as_sample(random_arrangement(rng, 8, 5), 2.0), iso5, o5);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "unsupported: induced-arrangement dimension exceeds 3");
  }

  const auto iso2 = DirectionalModel::isotropic(2);
  const ProcessConfig cfg(1.0, iso2);
  EnumerationOptions o1;
  o1.k = 1;
  o1.obs_radius = 4.0;
  long total = 0;
  for (int rep = 0; rep < 5; ++rep) {
    for (const auto& r : enumerate_k_faces(sample_in_ball(cfg, 8.0, derive_seed(36, rep)), iso2, o1, nullptr, rep)) {
      CHECK(r.defining.size() == 1);
      CHECK(r.rep == rep);
      CHECK(r.fcount == 2);
      CHECK(r.is_simplex());
      ++total;
    }
  }
  CHECK(total > 20);
}

TEST_CASE("admitted records have empty inballs") {
  for (int d : {2, 3}) {
    const auto model = DirectionalModel::isotropic(d);
    const ProcessConfig cfg(d == 2 ? 1.0 : 2.0, model);
    for (int k = 1; k <= d; ++k) {
      EnumerationOptions opt;
      opt.k = k;
      opt.obs_radius = d == 2 ? 5.0 : 2.5;
      long seen = 0;
      for (int rep = 0; rep < 3; ++rep) {
        const auto s = sample_in_ball(cfg, d == 2 ? 10.0 : 5.0, derive_seed(37 + d, rep));
        for (const auto& r : enumerate_k_faces(s, model, opt, nullptr, rep)) {
          CHECK(r.z.norm() <= opt.obs_radius);
          CHECK(r.r > 0);
          CHECK(r.sigma > 0);
          CHECK(r.fcount >= k + 1);
          CHECK_FALSE(r.truncated);
          std::vector<Hyperplane> carriers;
          for (int i : r.defining) carriers.push_back(s.hyperplanes[i]);
          const auto flat = Flat::intersection(carriers, d);
          REQUIRE(flat);
          for (int i = 0; i < static_cast<int>(s.hyperplanes.size()); ++i) {
            if (std::find(r.defining.begin(), r.defining.end(), i) != r.defining.end()) continue;
            const auto& h = s.hyperplanes[i];
            const double along = flat->local_direction(h.normal).norm();
            if (along < 1e-12) continue;
            CHECK(std::abs(h.signed_distance(r.z)) / along >= r.r * (1 - 1e-9));
          }
          ++seen;
        }
      }
      CHECK(seen > 10);
    }
  }
}

TEST_CASE("size functionals") {
  const auto sq = testutil::box(vec({0, 0}), vec({1, 1}));
  CHECK(size_of(sq, SizeKind::vkroot) == doctest::Approx(1.0));
  CHECK(size_of(sq, SizeKind::diameter) == doctest::Approx(std::sqrt(2.0)));
  CHECK(size_of(sq, SizeKind::circumradius) == doctest::Approx(std::sqrt(0.5)));
  Rng rng(40);
  for (int k : {1, 2, 3}) {
    const auto p = k == 1 ? testutil::segment(vec({0.2}), vec({1.7})) : testutil::random_body(rng, k);
    for (auto kind : {SizeKind::vkroot, SizeKind::diameter, SizeKind::circumradius}) {
      CHECK(size_of(p.scaled(2.5), kind) == doctest::Approx(2.5 * size_of(p, kind)).epsilon(1e-9));
      CHECK(size_of(p.translated(Vec::Constant(k, 0.7)), kind) == doctest::Approx(size_of(p, kind)).epsilon(1e-9));
      CHECK(size_of(p, kind) > 0);
    }
  }
}

TEST_CASE("shape normalisation") {
  const auto iso = DirectionalModel::isotropic(2);
  Rng rng(41);
  const auto seg = testutil::segment(vec({-2, 0}), vec({2, 0}));
  const auto s = shape_of(seg, iso, 4096, rng);
  CHECK(s.norm_inradius == doctest::Approx(M_PI / 2).epsilon(1e-6));
  CHECK(s.norm_diameter == doctest::Approx(M_PI).epsilon(1e-6));
  CHECK(s.vertex_count == 2);

  const auto model = DirectionalModel::parse("vmf:[{mu:[1,0],kappa:2,w:1}]", 2);
  for (int t = 0; t < 20; ++t) {
    const auto p = testutil::random_body(rng, 2);
    const auto a = shape_of(p, iso, 4096, rng);
    const auto b = shape_of(p.translated(vec({rng.uniform(-5, 5), rng.uniform(-5, 5)})), iso, 4096, rng);
    const auto c = shape_of(p.scaled(3.0), iso, 4096, rng);
    CHECK(a.norm_inradius == doctest::Approx(b.norm_inradius).epsilon(1e-6));
    CHECK(a.norm_volume == doctest::Approx(c.norm_volume).epsilon(1e-6));
    CHECK(a.norm_diameter == doctest::Approx(c.norm_diameter).epsilon(1e-6));
    CHECK(a.vertex_count == c.vertex_count);
    // Monte Carlo Phi: agreement within the estimator noise
    const auto m1 = shape_of(p, model, 100000, rng), m2 = shape_of(p.scaled(3.0), model, 100000, rng);
    CHECK(m1.norm_inradius == doctest::Approx(m2.norm_inradius).epsilon(0.02));
  }
  // the unit square has a segment of incenters
  CHECK_THROWS_AS(shape_of(testutil::box(vec({0, 0}), vec({2, 1})), iso, 4096, rng), DiscardedTies);
}

TEST_CASE("face intensity estimate") {
  std::vector<long> zeros(30, 0);
  const auto z = estimate_face_intensity(zeros, 1.0, 200, 1);
  CHECK(z.value == 0.0);
  CHECK(z.lo == 0.0);
  CHECK(z.hi == 0.0);
  CHECK_THROWS(estimate_face_intensity(std::vector<long>(29, 1), 1.0));

  // an empty window yields no faces at all
  const auto iso = DirectionalModel::isotropic(2);
  EnumerationOptions opt;
  opt.k = 2;
  opt.obs_radius = 0.0005;
  EnumerationStats st;
  for (int i = 0; i < 30; ++i)
    enumerate_k_faces(sample_in_ball(ProcessConfig(1.0, iso), 0.001, derive_seed(42, i)), iso, opt, &st, i);
  CHECK(st.admitted == 0);

  const double radius = 12.0, obs = 6.0, vol = M_PI * obs * obs;
  const auto one = estimate_face_intensity(admitted_counts(1.0, radius, obs, 40, 43), vol, 1000, 1);
  const auto two = estimate_face_intensity(admitted_counts(2.0, radius, obs, 40, 44), vol, 1000, 2);
  CHECK(one.lo <= one.value);
  CHECK(one.value <= one.hi);
  // scaling x -> x / 2 maps intensity 1 to intensity 2
  CHECK(4 * one.lo <= two.hi);
  CHECK(two.lo <= 4 * one.hi);

  const auto small = estimate_face_intensity(admitted_counts(1.0, 20.0, 6.0, 40, 45), M_PI * 36.0, 1000, 3);
  const auto large = estimate_face_intensity(admitted_counts(1.0, 20.0, 10.0, 40, 46), M_PI * 100.0, 1000, 4);
  CHECK(small.lo <= large.hi);
  CHECK(large.lo <= small.hi);
}

TEST_CASE("empirical conditional shape law") {
  const auto iso = DirectionalModel::isotropic(2);
  const ProcessConfig cfg(1.0, iso);
  EnumerationOptions opt;
  opt.k = 2;
  opt.obs_radius = 10.0;
  std::vector<FaceRecord> recs;
  for (int rep = 0; rep < 16; ++rep) {
    auto r = enumerate_k_faces(sample_in_ball(cfg, 20.0, derive_seed(47, rep)), iso, opt, nullptr, rep);
    recs.insert(recs.end(), r.begin(), r.end());
  }
  REQUIRE(recs.size() > 1000);
  const auto all = empirical_conditional_shape_law(recs, INFINITY, Descriptor::norm_inradius);
  CHECK(all.count == static_cast<long>(recs.size()));
  double min_sigma = INFINITY;
  for (const auto& r : recs) min_sigma = std::min(min_sigma, r.sigma);
  CHECK_THROWS_AS(empirical_conditional_shape_law(recs, min_sigma, Descriptor::norm_inradius), StatsError);
  CHECK_THROWS_WITH_AS(empirical_conditional_shape_law(recs, min_sigma * 0.5, Descriptor::fcount),
                       doctest::Contains("insufficient records"), StatsError);

  std::vector<double> sig;
  for (const auto& r : recs) sig.push_back(r.sigma);
  std::sort(sig.begin(), sig.end());
  const double a1 = sig[sig.size() / 10], a2 = sig[sig.size() / 2];
  const auto l1 = empirical_conditional_shape_law(recs, a1, Descriptor::fcount);
  const auto l2 = empirical_conditional_shape_law(recs, a2, Descriptor::fcount);
  const double se = std::sqrt(l1.simplex_fraction * (1 - l1.simplex_fraction) / l1.count +
                              l2.simplex_fraction * (1 - l2.simplex_fraction) / l2.count);
  CHECK(l1.simplex_fraction >= l2.simplex_fraction - 2 * se);
  CHECK(all.simplex_fraction <= l2.simplex_fraction + 2 * se);
}
