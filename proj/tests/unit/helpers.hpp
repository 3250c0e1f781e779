#pragma once

#include "phtess/geometry.hpp"
#include "phtess/rng.hpp"

#include <cmath>
#include <vector>

namespace testutil {

using phtess::Flat;
using phtess::Halfspace;
using phtess::Mat;
using phtess::PolytopeK;
using phtess::Vec;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline PolytopeK full_polytope(const std::vector<Halfspace>& hs, int d, double bound = 100.0) {
  auto p = phtess::halfspace_intersection(hs, Flat::whole_space(d), bound);
  if (!p) throw std::runtime_error("empty test polytope");
  return *p;
}

inline PolytopeK box(const Vec& lo, const Vec& hi) {
  std::vector<Halfspace> hs;
  const int d = static_cast<int>(lo.size());
  for (int i = 0; i < d; ++i) {
    hs.push_back({phtess::unit_vector(d, i), hi[i]});
    hs.push_back({-phtess::unit_vector(d, i), -lo[i]});
  }
  return full_polytope(hs, d);
}

// conv{a, b} as a 1-polytope carried by the line through them.
inline PolytopeK segment(const Vec& a, const Vec& b) {
  const int d = static_cast<int>(a.size());
  const Vec dir = (b - a).normalized();
  Mat basis(d, 1);
  basis.col(0) = dir;
  Flat f;
  f.basis = basis;
  f.base = a - a.dot(dir) * dir;
  Vec p(1), m(1);
  p << 1;
  m << -1;
  std::vector<Halfspace> hs{{p, b.dot(dir)}, {m, -a.dot(dir)}};
  return *phtess::halfspace_intersection(hs, f, 1e3);
}

inline PolytopeK triangle2d() {
  return full_polytope({{vec({-1, 0}), 0}, {vec({0, -1}), 0}, {vec({1, 1}) / std::sqrt(2.0), 1 / std::sqrt(2.0)}}, 2);
}

// Random polytope containing the origin, dimension k (as a full-dim body).
inline PolytopeK random_body(phtess::Rng& rng, int k, int m = 6) {
  std::vector<Halfspace> hs;
  for (int i = 0; i < m + k + 1; ++i) {
    Vec n(k);
    for (int j = 0; j < k; ++j) n[j] = rng.normal();
    n.normalize();
    hs.push_back({n, rng.uniform(0.3, 1.5)});
  }
  auto p = phtess::halfspace_intersection(hs, Flat::whole_space(k), 50.0);
  if (!p || p->truncated) return random_body(rng, k, m);
  return *p;
}

}  // namespace testutil
