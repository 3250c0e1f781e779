#include "phtess/geometry.hpp"

#include "phtess/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <sstream>

namespace phtess {
namespace {

// Gaussian elimination with partial pivoting; false when a pivot falls
// below `pivot_tol`.
bool solve_small(Mat a, Vec b, Vec& x, double pivot_tol = 1e-12) {
  const int n = static_cast<int>(a.rows());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < pivot_tol) return false;
    if (piv != col) {
      a.row(piv).swap(a.row(col));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      a.row(r).tail(n - col) -= f * a.row(col).tail(n - col);
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return true;
}

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Indices of planar points in counter-clockwise order around their centroid.
std::vector<int> angular_order(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> ang(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ang[i] = std::atan2(pts[i].y() - c.y(), pts[i].x() - c.x());
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
  return order;
}

double polygon_area(const std::vector<Eigen::Vector2d>& pts) {
  if (pts.size() < 3) return 0.0;
  const auto order = angular_order(pts);
  double twice = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& p = pts[order[i]];
    const auto& q = pts[order[(i + 1) % order.size()]];
    twice += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * std::abs(twice);
}

double polygon_perimeter(const std::vector<Eigen::Vector2d>& pts) {
  if (pts.size() < 2) return 0.0;
  if (pts.size() == 2) return 2.0 * (pts[0] - pts[1]).norm();
  const auto order = angular_order(pts);
  double per = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i)
    per += (pts[order[i]] - pts[order[(i + 1) % order.size()]]).norm();
  return per;
}

std::vector<Eigen::Vector2d> as_planar(const std::vector<Vec>& pts) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.emplace_back(p[0], p[1]);
  return out;
}

// Vertices of the given 3-polytope facet, expressed in an orthonormal frame of
// the facet plane.
std::vector<Eigen::Vector2d> facet_polygon(const PolytopeK& p, int facet) {
  const Vec& n = p.halfspaces[facet].normal;
  Mat frame(3, 1);
  frame.col(0) = n;
  const Mat tangent = orthogonal_complement(frame, 3);
  std::vector<Eigen::Vector2d> pts;
  for (std::size_t v = 0; v < p.local_vertices.size(); ++v) {
    const auto& inc = p.incidence[v];
    if (std::find(inc.begin(), inc.end(), facet) == inc.end()) continue;
    const Vec y = tangent.transpose() * p.local_vertices[v];
    pts.emplace_back(y[0], y[1]);
  }
  return pts;
}

Vec centroid(const std::vector<Vec>& pts) {
  Vec c = Vec::Zero(pts.front().size());
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

struct LocalBall {
  Vec center;
  double radius2 = -1.0;
};

LocalBall ball_through(const std::vector<Vec>& support, int k) {
  LocalBall b;
  if (support.empty()) {
    b.center = Vec::Zero(k);
    return b;
  }
  const Vec& p0 = support.front();
  const int m = static_cast<int>(support.size()) - 1;
  if (m == 0) {
    b.center = p0;
    b.radius2 = 0.0;
    return b;
  }
  Mat g(m, m);
  Vec rhs(m);
  for (int i = 0; i < m; ++i) {
    const Vec ai = support[i + 1] - p0;
    rhs[i] = 0.5 * ai.squaredNorm();
    for (int j = 0; j < m; ++j) g(i, j) = ai.dot(support[j + 1] - p0);
  }
  Vec alpha;
  if (!solve_small(g, rhs, alpha, 1e-14)) {
    // affinely dependent support: the farthest pair spans the ball
    double best = -1.0;
    for (std::size_t i = 0; i < support.size(); ++i)
      for (std::size_t j = i + 1; j < support.size(); ++j) {
        const double d2 = (support[i] - support[j]).squaredNorm();
        if (d2 > best) {
          best = d2;
          b.center = 0.5 * (support[i] + support[j]);
          b.radius2 = 0.25 * d2;
        }
      }
    return b;
  }
  b.center = p0;
  for (int i = 0; i < m; ++i) b.center += alpha[i] * (support[i + 1] - p0);
  b.radius2 = (b.center - p0).squaredNorm();
  return b;
}

bool inside(const LocalBall& b, const Vec& p) {
  if (b.radius2 < 0.0) return false;
  return (p - b.center).squaredNorm() <= b.radius2 * (1.0 + 1e-12) + 1e-24;
}

LocalBall welzl(const std::vector<Vec>& pts, int n, std::vector<Vec>& support, int k) {
  if (n == 0 || static_cast<int>(support.size()) == k + 1) return ball_through(support, k);
  const Vec& p = pts[n - 1];
  LocalBall b = welzl(pts, n - 1, support, k);
  if (inside(b, p)) return b;
  support.push_back(p);
  b = welzl(pts, n - 1, support, k);
  support.pop_back();
  return b;
}

double determinant(const Mat& m) { return m.rows() == 0 ? 1.0 : m.determinant(); }

}  // namespace

// ---------------------------------------------------------------------------

Hyperplane Hyperplane::canonical(Vec normal, double offset) {
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw GeometryError("hyperplane with zero normal");
  normal /= len;
  offset /= len;
  for (int i = 0; i < normal.size(); ++i) {
    if (std::abs(normal[i]) > 1e-12) {
      if (normal[i] < 0.0) {
        normal = -normal;
        offset = -offset;
      }
      break;
    }
  }
  return {normal, offset};
}

Flat Flat::whole_space(int d) { return {Vec::Zero(d), Mat::Identity(d, d)}; }

Flat Flat::through_origin(const Mat& orthonormal_basis) {
  return {Vec::Zero(orthonormal_basis.rows()), orthonormal_basis};
}

std::optional<Flat> Flat::intersection(std::span<const Hyperplane> hyperplanes, int d) {
  const int m = static_cast<int>(hyperplanes.size());
  if (m == 0) return whole_space(d);
  if (m > d) return std::nullopt;
  Mat nt(d, m);
  Vec tau(m);
  for (int i = 0; i < m; ++i) {
    nt.col(i) = hyperplanes[i].normal;
    tau[i] = hyperplanes[i].offset;
  }
  const Mat gram = nt.transpose() * nt;
  if (std::abs(determinant(gram)) < kGeomTol * kGeomTol) return std::nullopt;
  Vec coef;
  if (!solve_small(gram, tau, coef, 1e-14)) return std::nullopt;
  Flat f;
  f.base = nt * coef;
  f.basis = orthogonal_complement(nt, d);
  return f;
}

PolytopeK PolytopeK::scaled(double factor) const {
  PolytopeK out = *this;
  out.carrier.base *= factor;
  for (auto& h : out.halfspaces) h.offset *= factor;
  for (auto& v : out.local_vertices) v *= factor;
  for (auto& v : out.vertices) v *= factor;
  return out;
}

PolytopeK PolytopeK::translated(const Vec& t) const {
  PolytopeK out = *this;
  const Vec shift = carrier.basis.transpose() * t;
  out.carrier.base = carrier.base + t - carrier.basis * shift;
  for (auto& h : out.halfspaces) h.offset += h.normal.dot(shift);
  for (auto& v : out.local_vertices) v += shift;
  for (auto& v : out.vertices) v += t;
  return out;
}

double support_function(const PolytopeK& p, const Vec& u) {
  if (p.empty()) throw GeometryError("degenerate input: empty polytope");
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : p.vertices) h = std::max(h, v.dot(u));
  return h;
}

// ---------------------------------------------------------------------------

namespace detail {

VertexEnumerator::VertexEnumerator(int k, double bound) : k_(k) {
  if (k < 1 || k > 3) throw GeometryError("unsupported dimension: vertex enumeration needs 1 <= k <= 3");
  if (!(bound > 0.0)) throw GeometryError("bounding cube must have positive half-width");
  for (int i = 0; i < k; ++i) {
    constraints_.push_back({unit_vector(k, i), bound});
    constraints_.push_back({-unit_vector(k, i), bound});
  }
  for (int mask = 0; mask < (1 << k); ++mask) {
    Vec v(k);
    std::vector<int> tight;
    for (int i = 0; i < k; ++i) {
      const bool low = (mask >> i) & 1;
      v[i] = low ? -bound : bound;
      tight.push_back(2 * i + (low ? 1 : 0));
    }
    vertices_.push_back(v);
    tight_.push_back(std::move(tight));
  }
}

bool VertexEnumerator::clip(const Vec& normal, double offset) {
  if (vertices_.empty()) return false;
  const int id = static_cast<int>(constraints_.size());
  constraints_.push_back({normal, offset});

  const std::size_t n = vertices_.size();
  std::vector<double> slack(n);
  bool any_out = false, any_in = false;
  for (std::size_t i = 0; i < n; ++i) {
    slack[i] = offset - normal.dot(vertices_[i]);
    if (slack[i] < -kGeomTol) any_out = true;
    if (slack[i] > kGeomTol) any_in = true;
  }
  if (!any_out) {
    for (std::size_t i = 0; i < n; ++i)
      if (slack[i] <= kGeomTol) tight_[i].push_back(id);
    return true;
  }
  if (!any_in) {
    vertices_.clear();
    tight_.clear();
    return false;
  }

  std::vector<Vec> next;
  std::vector<std::vector<int>> next_tight;
  for (std::size_t a = 0; a < n; ++a) {
    if (slack[a] <= kGeomTol) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (slack[b] >= -kGeomTol) continue;
      std::vector<int> common = sorted_intersection(tight_[a], tight_[b]);
      if (static_cast<int>(common.size()) < k_ - 1) continue;
      bool adjacent = true;
      for (std::size_t c = 0; c < n && adjacent; ++c) {
        if (c == a || c == b) continue;
        if (std::includes(tight_[c].begin(), tight_[c].end(), common.begin(), common.end())) adjacent = false;
      }
      if (!adjacent) continue;
      const double t = slack[a] / (slack[a] - slack[b]);
      next.push_back(vertices_[a] + t * (vertices_[b] - vertices_[a]));
      common.push_back(id);
      next_tight.push_back(std::move(common));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (slack[i] < -kGeomTol) continue;
    if (slack[i] <= kGeomTol) tight_[i].push_back(id);
    next.push_back(vertices_[i]);
    next_tight.push_back(std::move(tight_[i]));
  }
  vertices_ = std::move(next);
  tight_ = std::move(next_tight);
  if (static_cast<int>(vertices_.size()) < k_ + 1) {
    vertices_.clear();
    tight_.clear();
    return false;
  }
  return true;
}

PolytopeK VertexEnumerator::build(const Flat& carrier) const {
  PolytopeK p;
  p.carrier = carrier;
  if (vertices_.empty()) return p;
  std::vector<int> uses(constraints_.size(), 0);
  for (const auto& t : tight_)
    for (int id : t) ++uses[id];
  const int need = std::max(k_, 1);
  std::vector<int> facet_of(constraints_.size(), -1);
  for (std::size_t id = 0; id < constraints_.size(); ++id) {
    if (uses[id] < need) continue;
    facet_of[id] = static_cast<int>(p.halfspaces.size());
    p.halfspaces.push_back({constraints_[id].normal, constraints_[id].offset});
    if (static_cast<int>(id) < 2 * k_) p.truncated = true;
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    std::vector<int> inc;
    for (int id : tight_[v])
      if (facet_of[id] >= 0) inc.push_back(facet_of[id]);
    p.local_vertices.push_back(vertices_[v]);
    p.vertices.push_back(carrier.to_ambient(vertices_[v]));
    p.incidence.push_back(std::move(inc));
  }
  return p;
}

}  // namespace detail

std::optional<PolytopeK> halfspace_intersection(std::span<const Halfspace> halfspaces,
                                                const Flat& carrier, double bound) {
  const int k = carrier.dim();
  if (k < 1 || k > 3) throw GeometryError("unsupported dimension: halfspace intersection needs 1 <= k <= 3");
  detail::VertexEnumerator ve(k, bound);
  for (const auto& h : halfspaces) {
    if (h.normal.size() != k) throw GeometryError("halfspace normal not in carrier coordinates");
    const double len = h.normal.norm();
    if (len < 1e-14) {
      if (h.offset < 0.0) return std::nullopt;
      continue;
    }
    if (!ve.clip(h.normal / len, h.offset / len)) return std::nullopt;
  }
  return ve.build(carrier);
}

PolytopeK simplex_from_halfspaces(std::span<const Halfspace> halfspaces, const Flat& carrier) {
  const int k = carrier.dim();
  if (static_cast<int>(halfspaces.size()) != k + 1)
    throw GeometryError("simplex needs exactly k + 1 halfspaces");
  PolytopeK p;
  p.carrier = carrier;
  for (const auto& h : halfspaces) {
    const double len = h.normal.norm();
    p.halfspaces.push_back({h.normal / len, h.offset / len});
  }
  for (int skip = 0; skip <= k; ++skip) {
    Mat a(k, k);
    Vec b(k);
    std::vector<int> inc;
    for (int j = 0, row = 0; j <= k; ++j) {
      if (j == skip) continue;
      a.row(row) = p.halfspaces[j].normal.transpose();
      b[row] = p.halfspaces[j].offset;
      inc.push_back(j);
      ++row;
    }
    Vec y;
    if (!solve_small(a, b, y, 1e-14)) throw GeometryError("degenerate input: simplex facets not in general position");
    p.local_vertices.push_back(y);
    p.vertices.push_back(carrier.to_ambient(y));
    p.incidence.push_back(std::move(inc));
  }
  return p;
}

Inball inball(const PolytopeK& p) {
  if (p.empty()) throw GeometryError("degenerate input: empty polytope");
  if (p.truncated) throw GeometryError("inball: polytope is unbounded or truncated by the bounding box");
  const int k = p.dim();
  const int m = p.facet_count();
  if (m < k + 1) throw GeometryError("inball: polytope is unbounded (fewer than k + 1 facets)");

  double scale = 1.0;
  for (const auto& h : p.halfspaces) scale = std::max(scale, std::abs(h.offset));
  const double feas_tol = kGeomTol * scale;

  struct Candidate {
    Vec z;
    double r;
  };
  std::vector<Candidate> candidates;
  double best = -std::numeric_limits<double>::infinity();
  for_each_subset(m, k + 1, [&](const int* idx) {
    Mat a(k + 1, k + 1);
    Vec b(k + 1);
    for (int i = 0; i <= k; ++i) {
      a.row(i).head(k) = p.halfspaces[idx[i]].normal.transpose();
      a(i, k) = 1.0;
      b[i] = p.halfspaces[idx[i]].offset;
    }
    Vec sol;
    if (!solve_small(a, b, sol, 1e-12)) return;
    const Vec z = sol.head(k);
    const double r = sol[k];
    if (r < -feas_tol) return;
    for (const auto& h : p.halfspaces)
      if (h.normal.dot(z) + r > h.offset + feas_tol) return;
    candidates.push_back({z, r});
    best = std::max(best, r);
  });
  if (candidates.empty()) {
    std::ostringstream msg;
    msg << "inball: LP numerically singular (no feasible basis among " << m << " facets, k = " << k << ")";
    throw GeometryError(msg.str());
  }

  const Candidate* pick = nullptr;
  auto lex_less = [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i] - kGeomTol) return true;
      if (a[i] > b[i] + kGeomTol) return false;
    }
    return false;
  };
  for (const auto& c : candidates) {
    if (c.r < best - feas_tol) continue;
    if (!pick || lex_less(c.z, pick->z)) pick = &c;
  }

  std::vector<Vec> touching;
  for (const auto& h : p.halfspaces)
    if (std::abs(h.offset - h.normal.dot(pick->z) - pick->r) <= feas_tol) touching.push_back(h.normal);

  Inball out;
  out.local_center = pick->z;
  out.center = p.carrier.to_ambient(pick->z);
  out.radius = std::max(pick->r, 0.0);
  out.unique = positively_spans(touching, k, 1e-12);
  return out;
}

Ball circumball(const PolytopeK& p) {
  if (p.empty()) throw GeometryError("degenerate input: empty polytope");
  const int k = p.dim();
  std::vector<Vec> pts = p.local_vertices;
  const Vec c = centroid(pts);
  // far points first: they fix the ball early and keep the recursion shallow
  std::sort(pts.begin(), pts.end(),
            [&](const Vec& a, const Vec& b) { return (a - c).squaredNorm() < (b - c).squaredNorm(); });
  std::vector<Vec> support;
  const LocalBall b = welzl(pts, static_cast<int>(pts.size()), support, k);
  return {p.carrier.to_ambient(b.center), std::sqrt(std::max(b.radius2, 0.0))};
}

double volume_k(const PolytopeK& p) {
  if (p.empty()) return 0.0;
  const int k = p.dim();
  if (k == 1) {
    double lo = p.local_vertices.front()[0], hi = lo;
    for (const auto& v : p.local_vertices) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    return hi - lo;
  }
  if (k == 2) return polygon_area(as_planar(p.local_vertices));
  if (k == 3) {
    const Vec c = centroid(p.local_vertices);
    double vol = 0.0;
    for (int f = 0; f < p.facet_count(); ++f) {
      const double h = p.halfspaces[f].offset - p.halfspaces[f].normal.dot(c);
      vol += h * polygon_area(facet_polygon(p, f)) / 3.0;
    }
    return vol;
  }
  throw GeometryError("unsupported dimension");
}

double diameter(const PolytopeK& p) {
  double best = 0.0;
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
      best = std::max(best, (p.vertices[i] - p.vertices[j]).squaredNorm());
  return std::sqrt(best);
}

double intrinsic_volume_1(const PolytopeK& p) {
  if (p.empty()) return 0.0;
  const int k = p.dim();
  if (k == 1) return volume_k(p);
  if (k == 2) return 0.5 * polygon_perimeter(as_planar(p.local_vertices));
  if (k == 3) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.local_vertices.size(); ++i)
      for (std::size_t j = i + 1; j < p.local_vertices.size(); ++j) {
        const auto common = sorted_intersection(p.incidence[i], p.incidence[j]);
        if (common.size() < 2) continue;
        const double cosang = std::clamp(
            p.halfspaces[common[0]].normal.dot(p.halfspaces[common[1]].normal), -1.0, 1.0);
        sum += (p.local_vertices[i] - p.local_vertices[j]).norm() * std::acos(cosang);
      }
    return sum / (2.0 * M_PI);
  }
  throw GeometryError("unsupported dimension");
}

// ---------------------------------------------------------------------------

bool positively_spans(std::span<const Vec> vectors, int dim, double margin) {
  const int m = static_cast<int>(vectors.size());
  if (m < dim + 1) return false;
  Eigen::MatrixXd v(dim, m);
  for (int j = 0; j < m; ++j) v.col(j) = vectors[j].head(dim);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > kGeomTol) ++rank;
  if (rank < dim) return false;

  if (m == dim + 1) {
    // one-dimensional kernel: cofactor expansion gives the null vector
    std::vector<double> lambda(m);
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
      Mat minor(dim, dim);
      for (int c = 0, col = 0; c < m; ++c) {
        if (c == j) continue;
        minor.col(col++) = v.col(c);
      }
      lambda[j] = ((j % 2) ? -1.0 : 1.0) * determinant(minor);
      sum += lambda[j];
    }
    if (std::abs(sum) < 1e-300) return false;
    for (double l : lambda)
      if (l / sum < margin) return false;
    return true;
  }

  // maximize s subject to sum (s + mu_i) n_i = 0, sum (s + mu_i) = 1
  const int nvar = m + 1;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int r = 0; r < dim; ++r) {
    std::vector<double> row(nvar);
    row[0] = v.row(r).sum();
    for (int j = 0; j < m; ++j) row[j + 1] = v(r, j);
    a.push_back(row);
    for (auto& x : row) x = -x;
    a.push_back(row);
    b.push_back(0.0);
    b.push_back(0.0);
  }
  std::vector<double> norm_row(nvar, 1.0);
  norm_row[0] = m;
  a.push_back(norm_row);
  b.push_back(1.0);
  for (auto& x : norm_row) x = -x;
  a.push_back(norm_row);
  b.push_back(-1.0);
  std::vector<double> c(nvar, 0.0);
  c[0] = 1.0;
  const auto res = lp::maximize(a, b, c);
  return res.status == lp::Status::optimal && res.value >= margin;
}

bool translational_general_position(std::span<const Hyperplane> hyperplanes, std::vector<int>* witness) {
  const int n = static_cast<int>(hyperplanes.size());
  if (n == 0) return true;
  const int d = hyperplanes.front().dim();
  bool ok = true;
  for (int m = 2; m <= std::min(n, d + 1) && ok; ++m) {
    for_each_subset(n, m, [&](const int* idx) {
      if (!ok) return;
      Mat normals(m, d), augmented(m, d + 1);
      for (int i = 0; i < m; ++i) {
        normals.row(i) = hyperplanes[idx[i]].normal.transpose();
        augmented.row(i).head(d) = hyperplanes[idx[i]].normal.transpose();
        augmented(i, d) = hyperplanes[idx[i]].offset;
      }
      // fast path: independent normals never violate for m <= d; for m = d + 1
      // a nonzero augmented determinant means no common point
      if (m <= d) {
        if (m == d && std::abs(determinant(normals)) > kGeomTol) return;
        if (m < d && numerical_rank(normals) == m) return;
      } else if (std::abs(determinant(augmented)) > kGeomTol) {
        return;
      }
      const int rank_n = numerical_rank(normals);
      const int rank_a = numerical_rank(augmented);
      if (rank_a == rank_n && rank_n <= m - 1) {
        ok = false;
        if (witness) witness->assign(idx, idx + m);
      }
    });
  }
  return ok;
}

bool directional_general_position(std::span<const Hyperplane> hyperplanes, std::vector<int>* witness) {
  const int n = static_cast<int>(hyperplanes.size());
  if (n == 0) return true;
  const int d = hyperplanes.front().dim();
  const int m = std::min(n, d);
  bool ok = true;
  for_each_subset(n, m, [&](const int* idx) {
    if (!ok) return;
    Mat normals(m, d);
    for (int i = 0; i < m; ++i) normals.row(i) = hyperplanes[idx[i]].normal.transpose();
    const bool independent =
        (m == d && std::abs(determinant(normals)) > kGeomTol) || numerical_rank(normals) == m;
    if (!independent) {
      ok = false;
      if (witness) witness->assign(idx, idx + m);
    }
  });
  return ok;
}

}  // namespace phtess
