#include "phtess/linalg.hpp"

#include <cmath>

namespace phtess {

int numerical_rank(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++rank;
  return rank;
}

Mat orthogonal_complement(const Mat& cols, int d) {
  const int m = static_cast<int>(cols.cols());
  if (m == 0) return Mat::Identity(d, d);
  Eigen::HouseholderQR<Mat> qr(cols);
  Mat q = qr.householderQ();
  return q.rightCols(d - m);
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace phtess
