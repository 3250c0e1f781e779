#include "phtess/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace phtess {
namespace {

// A (k-1)-flat {y : <n, y> = beta} in carrier coordinates.
struct LocalFlat {
  Vec n;
  double beta = 0.0;
};

// Fixed direction used to pick the lowest vertex of each cell; any direction
// not orthogonal to an edge works, irrational coordinates make ties
// practically impossible.
Vec generic_direction(int k) {
  static const double c[3] = {0.8506508083520399, 0.4253254041760200, 0.3090169943749474};
  Vec v(k);
  for (int i = 0; i < k; ++i) v[i] = c[i];
  return v.normalized();
}

std::vector<LocalFlat> restrict_to(const Flat& flat, std::span<const Hyperplane> hyperplanes,
                                   const std::vector<int>& skip) {
  std::vector<LocalFlat> out;
  for (int i = 0; i < static_cast<int>(hyperplanes.size()); ++i) {
    if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
    const Vec a = flat.local_direction(hyperplanes[i].normal);
    const double len = a.norm();
    if (len < 1e-12) continue;  // parallel to the flat: excluded by general position
    out.push_back({a / len, (hyperplanes[i].offset - hyperplanes[i].normal.dot(flat.base)) / len});
  }
  return out;
}

// Vertex of the flats listed in `s`; false if they are not independent.
bool flat_vertex(const std::vector<LocalFlat>& flats, const int* s, int k, Mat& a, Vec& y) {
  a.resize(k, k);
  Vec b(k);
  for (int j = 0; j < k; ++j) {
    a.row(j) = flats[s[j]].n.transpose();
    b[j] = flats[s[j]].beta;
  }
  if (std::abs(a.determinant()) < 1e-12) return false;
  y = a.partialPivLu().solve(b);
  return true;
}

// Cells of the arrangement of `flats` inside the disk of radius rho of the
// carrier. Each bounded cell is generated once, from its lowest vertex in the
// generic direction.
void cells_in_flat(const Flat& carrier, double rho, const std::vector<LocalFlat>& flats,
                   const std::vector<int>& defining, std::vector<WindowFace>& out) {
  const int k = carrier.dim();
  const int m = static_cast<int>(flats.size());
  if (m < k + 1) return;
  const Vec c = generic_direction(k);
  std::vector<std::pair<double, int>> others;
  for_each_subset(m, k, [&](const int* s) {
    Mat a;
    Vec v;
    if (!flat_vertex(flats, s, k, a, v)) return;
    if (v.norm() >= rho) return;
    const Mat inv = a.inverse();

    detail::VertexEnumerator ve(k, rho);
    for (int j = 0; j < k; ++j) {
      // moving along column j of A^{-1} increases <n_{s_j}, y> only
      const double sign = c.dot(inv.col(j)) > 0.0 ? 1.0 : -1.0;
      if (!ve.clip(-sign * flats[s[j]].n, -sign * flats[s[j]].beta)) return;
    }
    others.clear();
    for (int i = 0, next = 0; i < m; ++i) {
      if (next < k && s[next] == i) {
        ++next;
        continue;
      }
      const double g = flats[i].n.dot(v) - flats[i].beta;
      if (std::abs(g) < 1e-12) return;  // vertex on a further flat: not in general position
      others.push_back({std::abs(g), g > 0.0 ? i + 1 : -(i + 1)});
    }
    std::sort(others.begin(), others.end());
    for (const auto& [dist, signed_index] : others) {
      double reach = 0.0;
      for (const auto& w : ve.vertices()) reach = std::max(reach, (w - v).norm());
      if (dist > reach) break;  // this and all later flats miss the cell
      const int i = std::abs(signed_index) - 1;
      const double sign = signed_index > 0 ? 1.0 : -1.0;
      if (!ve.clip(-sign * flats[i].n, -sign * flats[i].beta)) return;
    }
    PolytopeK p = ve.build(carrier);
    if (p.empty() || p.truncated) return;
    for (const auto& y : p.local_vertices)
      if (y.norm() >= rho) return;
    out.push_back({std::move(p), defining});
  });
}

}  // namespace

double size_of(const PolytopeK& p, SizeKind kind) {
  switch (kind) {
    case SizeKind::vkroot:
      return std::pow(volume_k(p), 1.0 / p.dim());
    case SizeKind::diameter:
      return diameter(p);
    case SizeKind::circumradius:
      return circumball(p).radius;
  }
  return 0.0;
}

ShapeDescriptor describe_shape(const PolytopeK& p, double inradius, double phi) {
  ShapeDescriptor s;
  s.norm_inradius = inradius / phi;
  s.norm_volume = std::pow(volume_k(p), 1.0 / p.dim()) / phi;
  s.norm_diameter = diameter(p) / phi;
  s.vertex_count = p.vertex_count();
  return s;
}

ShapeDescriptor shape_of(const PolytopeK& p, const DirectionalModel& model, int budget, Rng& rng) {
  const Inball ib = inball(p);
  if (!ib.unique) throw DiscardedTies();
  return describe_shape(p, ib.radius, phi_functional(p, model, budget, rng).value);
}

std::vector<WindowFace> window_faces(std::span<const Hyperplane> hyperplanes, int k, double window_radius) {
  if (hyperplanes.empty()) return {};
  const int d = hyperplanes.front().dim();
  if (k < 1 || k > d) throw std::invalid_argument("face dimension k must satisfy 1 <= k <= d");
  if (k > 3) throw std::invalid_argument("unsupported: induced-arrangement dimension exceeds 3");
  std::vector<WindowFace> out;
  const int n = static_cast<int>(hyperplanes.size());
  for_each_subset(n, d - k, [&](const int* idx) {
    std::vector<int> defining(idx, idx + (d - k));
    std::vector<Hyperplane> carriers;
    for (int i : defining) carriers.push_back(hyperplanes[i]);
    const auto flat = Flat::intersection(carriers, d);
    if (!flat) return;
    const double base = flat->base.norm();
    if (base >= window_radius) return;
    const double rho = std::sqrt(window_radius * window_radius - base * base);
    std::vector<LocalFlat> flats;
    for (auto& f : restrict_to(*flat, hyperplanes, defining))
      if (std::abs(f.beta) < rho) flats.push_back(f);
    cells_in_flat(*flat, rho, flats, defining, out);
  });
  return out;
}

long count_k_faces_full(std::span<const Hyperplane> hyperplanes, int k) {
  const int n = static_cast<int>(hyperplanes.size());
  if (n == 0) throw std::invalid_argument("count_k_faces_full needs at least one hyperplane");
  const int d = hyperplanes.front().dim();
  if (k < 0 || k > d) throw std::invalid_argument("face dimension k must satisfy 0 <= k <= d");
  if (k > 3) throw std::invalid_argument("unsupported: induced-arrangement dimension exceeds 3");
  long total = 0;
  for_each_subset(n, d - k, [&](const int* idx) {
    std::vector<int> defining(idx, idx + (d - k));
    std::vector<Hyperplane> carriers;
    for (int i : defining) carriers.push_back(hyperplanes[i]);
    const auto flat = Flat::intersection(carriers, d);
    if (!flat) return;
    if (k == 0) {
      ++total;
      return;
    }
    std::vector<LocalFlat> flats = restrict_to(*flat, hyperplanes, defining);
    const int m = static_cast<int>(flats.size());

    // a box containing every intersection of <= k flats meets every cell
    double extent = 1.0;
    for (int j = 1; j <= std::min(k, m); ++j) {
      for_each_subset(m, j, [&](const int* s) {
        Mat nt(k, j);
        Vec b(j);
        for (int i = 0; i < j; ++i) {
          nt.col(i) = flats[s[i]].n;
          b[i] = flats[s[i]].beta;
        }
        const Mat g = nt.transpose() * nt;
        if (std::abs(g.determinant()) < 1e-18) return;
        const Vec p = nt * g.partialPivLu().solve(b);
        extent = std::max(extent, p.lpNorm<Eigen::Infinity>());
      });
    }
    const double box = 2.0 * extent + 1.0;
    for (int i = 0; i < k; ++i) {
      flats.push_back({unit_vector(k, i), box});
      flats.push_back({-unit_vector(k, i), box});
    }

    // count lowest vertices of the cells of (arrangement + box) inside the box
    const Vec c = generic_direction(k);
    const int all = static_cast<int>(flats.size());
    for_each_subset(all, k, [&](const int* s) {
      Mat a;
      Vec v;
      if (!flat_vertex(flats, s, k, a, v)) return;
      if (v.lpNorm<Eigen::Infinity>() > box * (1.0 + 1e-12)) return;
      const Mat inv = a.inverse();
      for (int j = 0; j < k; ++j) {
        if (s[j] < m) continue;
        // the lowest cell must lie on the inner side of each box face at v
        if (c.dot(inv.col(j)) > 0.0) return;
      }
      ++total;
    });
  });
  return total;
}

void EnumerationStats::merge(const EnumerationStats& o) {
  cells += o.cells;
  admitted += o.admitted;
  discarded_ties += o.discarded_ties;
  rejected_samples += o.rejected_samples;
  if (general_position_report.empty()) general_position_report = o.general_position_report;
}

std::vector<FaceRecord> enumerate_k_faces(const HyperplaneSample& sample, const DirectionalModel& model,
                                          const EnumerationOptions& opt, EnumerationStats* stats, long rep) {
  EnumerationStats local;
  EnumerationStats& st = stats ? *stats : local;
  const int d = model.dim;
  if (opt.k < 1 || opt.k > d) throw std::invalid_argument("face dimension k must satisfy 1 <= k <= d");
  if (opt.k > 3) throw std::invalid_argument("unsupported: induced-arrangement dimension exceeds 3");
  if (!(opt.obs_radius < sample.window_radius))
    throw std::invalid_argument("observation radius must be smaller than the window radius");
  if (opt.require_general_position) {
    const auto report = check_general_position(sample, model.subspace_free());
    if (!report.pass()) {
      ++st.rejected_samples;
      if (st.general_position_report.empty()) st.general_position_report = report.describe();
      return {};
    }
  }

  std::vector<FaceRecord> records;
  Rng rng = Rng::stream(sample.seed, 0xfacefaceULL);
  for (auto& face : window_faces(sample.hyperplanes, opt.k, sample.window_radius)) {
    ++st.cells;
    const PolytopeK& p = face.polytope;
    const Inball ib = inball(p);
    if (ib.center.norm() > opt.obs_radius) continue;
    if (!ib.unique) {
      ++st.discarded_ties;
      continue;
    }
    FaceRecord rec;
    rec.rep = rep;
    rec.k = opt.k;
    rec.z = ib.center;
    rec.r = ib.radius;
    rec.sigma = size_of(p, opt.sigma);
    rec.fcount = p.facet_count();
    rec.vcount = p.vertex_count();
    rec.phi = phi_functional(p, model, opt.phi_budget, rng).value;
    rec.shape = describe_shape(p, ib.radius, rec.phi);
    rec.defining = std::move(face.defining);
    records.push_back(std::move(rec));
    ++st.admitted;
  }
  return records;
}

IntensityEstimate estimate_face_intensity(std::span<const long> admitted_per_rep, double obs_volume,
                                          int resamples, std::uint64_t seed) {
  if (admitted_per_rep.size() < 30) throw std::invalid_argument("face intensity needs at least 30 replicates");
  if (!(obs_volume > 0.0)) throw std::invalid_argument("observation volume must be positive");
  std::vector<double> x(admitted_per_rep.begin(), admitted_per_rep.end());
  std::vector<double> w(x.size(), 1.0);
  IntensityEstimate e;
  e.value = weighted_mean(x, w) / obs_volume;
  if (e.value == 0.0) return e;
  const auto ci = bootstrap_weighted_mean(x, w, resamples, 0.95, seed);
  e.lo = ci.lo / obs_volume;
  e.hi = ci.hi / obs_volume;
  return e;
}

ConditionalShapeLaw empirical_conditional_shape_law(std::span<const FaceRecord> records, double a,
                                                    Descriptor descriptor, long min_records) {
  std::vector<double> vals, ws;
  double simplex = 0.0, total = 0.0;
  for (const auto& r : records) {
    if (!(r.sigma < a)) continue;
    vals.push_back(descriptor_of(r, descriptor));
    ws.push_back(r.weight());
    total += r.weight();
    if (r.is_simplex()) simplex += r.weight();
  }
  if (static_cast<long>(vals.size()) < min_records) {
    std::ostringstream os;
    os << "insufficient records: " << vals.size() << " below threshold " << a << " (need " << min_records << ")";
    throw StatsError(os.str());
  }
  ConditionalShapeLaw law;
  law.ecdf = WeightedECDF(std::move(vals), std::move(ws));
  law.simplex_fraction = total > 0.0 ? simplex / total : 0.0;
  law.count = static_cast<long>(law.ecdf.size());
  return law;
}

}  // namespace phtess
