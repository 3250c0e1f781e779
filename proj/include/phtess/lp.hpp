#pragma once

#include <vector>

namespace phtess::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// Dense two-phase simplex with Bland's rule:
///   maximize c'x  subject to  A x <= b,  x >= 0.
/// Meant for the handful-of-variables problems in this library.
Result maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                const std::vector<double>& c);

}  // namespace phtess::lp
