#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace phtess {

// Small dense types. Dimensions never exceed d + 1 = 5, so everything lives
// on the stack.
inline constexpr int kMaxDim = 5;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Absolute tolerance for determinants, ranks and incidence tests on
/// unit-normalized data.
inline constexpr double kGeomTol = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a sampler gives up (e.g. tuple acceptance far too low).
class SamplerAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Vec unit_vector(int dim, int axis) {
  Vec e = Vec::Zero(dim);
  e[axis] = 1.0;
  return e;
}

/// Numerical rank by singular values above `tol`.
int numerical_rank(const Mat& m, double tol = kGeomTol);

/// Orthonormal basis (as columns) of the orthogonal complement of the column
/// span of `cols` in R^d. `cols` must have full column rank.
Mat orthogonal_complement(const Mat& cols, int d);

/// Volume of the unit n-ball.
double unit_ball_volume(int n);

/// Calls fn(indices) for every sorted k-subset of {0, ..., n-1}.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  int idx[16];
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const int*>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace phtess
