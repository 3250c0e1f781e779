#pragma once

#include "phtess/linalg.hpp"

#include <optional>
#include <span>
#include <vector>

namespace phtess {

/// H(u, tau) = {x : <x, u> = tau} with unit normal u.
struct Hyperplane {
  Vec normal;
  double offset = 0.0;

  /// Normalizes and picks the representative whose first nonzero normal
  /// coordinate is positive.
  static Hyperplane canonical(Vec normal, double offset);

  double signed_distance(const Vec& x) const { return x.dot(normal) - offset; }
  int dim() const { return static_cast<int>(normal.size()); }
};

/// Affine k-flat: base + span(basis). `base` is the minimum-norm point and the
/// basis columns are orthonormal.
struct Flat {
  Vec base;
  Mat basis;  // d x k

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient_dim() const { return static_cast<int>(base.size()); }
  Vec to_local(const Vec& x) const { return basis.transpose() * (x - base); }
  Vec to_ambient(const Vec& y) const { return base + basis * y; }
  Vec local_direction(const Vec& u) const { return basis.transpose() * u; }

  static Flat whole_space(int d);
  static Flat through_origin(const Mat& orthonormal_basis);
  /// Intersection of hyperplanes whose normals are linearly independent;
  /// nullopt when they are not (rank test at kGeomTol).
  static std::optional<Flat> intersection(std::span<const Hyperplane> hyperplanes, int d);
};

/// {y : <normal, y> <= offset} in carrier coordinates, unit normal.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// A k-polytope carried by a k-flat, stored in both H- and V-form.
struct PolytopeK {
  Flat carrier;
  std::vector<Halfspace> halfspaces;     // non-redundant facets, local coordinates
  std::vector<Vec> local_vertices;
  std::vector<Vec> vertices;             // ambient coordinates
  std::vector<std::vector<int>> incidence;  // per vertex: tight facet indices
  bool truncated = false;                // some facet comes from the bounding box

  int dim() const { return carrier.dim(); }
  int ambient_dim() const { return carrier.ambient_dim(); }
  int facet_count() const { return static_cast<int>(halfspaces.size()); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  bool empty() const { return vertices.empty(); }

  /// Image under x -> factor * x (factor > 0).
  PolytopeK scaled(double factor) const;
  PolytopeK translated(const Vec& t) const;
};

struct Inball {
  Vec center;        // ambient
  Vec local_center;  // carrier coordinates
  double radius = 0.0;
  bool unique = false;
};

struct Ball {
  Vec center;  // ambient
  double radius = 0.0;
};

double support_function(const PolytopeK& p, const Vec& u);

/// Intersection of `halfspaces` (carrier coordinates) with the cube of
/// half-width `bound` around the carrier origin, k <= 3. Returns nullopt for
/// an empty (or lower-dimensional) intersection. `truncated` is set when a
/// cube face survives as a facet.
std::optional<PolytopeK> halfspace_intersection(std::span<const Halfspace> halfspaces,
                                                const Flat& carrier, double bound);

/// The simplex bounded by exactly k + 1 halfspaces whose normals positively
/// span the carrier. Vertices are solved for directly, no bounding box.
PolytopeK simplex_from_halfspaces(std::span<const Halfspace> halfspaces, const Flat& carrier);

/// Chebyshev center: max r s.t. <z, n_i> + r <= b_i. Ties are broken towards
/// the lexicographically smallest center (carrier coordinates).
Inball inball(const PolytopeK& p);

/// Smallest enclosing ball of the vertex set.
Ball circumball(const PolytopeK& p);

double volume_k(const PolytopeK& p);
double diameter(const PolytopeK& p);

/// First intrinsic volume V_1 (k <= 3): length, half perimeter, or the
/// edge-length / exterior-angle sum.
double intrinsic_volume_1(const PolytopeK& p);

/// True iff the vectors (dimension `dim`) positively span R^dim: full rank and
/// some combination with all coefficients >= margin (coefficients summing to
/// one) vanishes.
bool positively_spans(std::span<const Vec> vectors, int dim, double margin = kGeomTol);

/// No k-flat lies in more than d - k of the hyperplanes. On failure the
/// offending subset is written to `witness`.
bool translational_general_position(std::span<const Hyperplane> hyperplanes,
                                    std::vector<int>* witness = nullptr);

/// Every d of the normals are linearly independent.
bool directional_general_position(std::span<const Hyperplane> hyperplanes,
                                  std::vector<int>* witness = nullptr);

namespace detail {

/// Incremental vertex enumeration (double description with combinatorial
/// adjacency) for bounded polytopes in dimension k <= 3. Constraint ids
/// 0 .. 2k-1 are the bounding cube faces.
class VertexEnumerator {
 public:
  VertexEnumerator(int k, double bound);

  /// Adds <normal, y> <= offset. Returns false once the polytope is empty or
  /// has collapsed to lower dimension.
  bool clip(const Vec& normal, double offset);

  int dim() const { return k_; }
  bool empty() const { return vertices_.empty(); }
  const std::vector<Vec>& vertices() const { return vertices_; }

  /// Non-redundant constraints with their incidence; polytope in `carrier`.
  PolytopeK build(const Flat& carrier) const;

 private:
  struct Constraint {
    Vec normal;
    double offset;
  };
  int k_;
  std::vector<Constraint> constraints_;
  std::vector<Vec> vertices_;
  std::vector<std::vector<int>> tight_;
};

}  // namespace detail

}  // namespace phtess
