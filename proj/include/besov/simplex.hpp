#pragma once

// Dense two-phase simplex for small standard-form LPs:
//   maximize c^T x  subject to  A x = b,  x >= 0.
// Bland's rule throughout, so it terminates on degenerate problems. Meant for
// the handful-of-rows problems in discrete Chebyshev fitting.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace besov {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded } status = Status::infeasible;
  double value = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd x;
};

namespace detail {

// Tableau rows 0..m-1 are constraints, row m is the objective (reduced costs,
// to be minimized). Last column is the right-hand side.
inline bool simplex_iterate(Eigen::MatrixXd& T, std::vector<int>& basis, int ncols, double eps) {
  const int m = static_cast<int>(basis.size());
  const int rhs = static_cast<int>(T.cols()) - 1;
  for (int iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j)
      if (T(m, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) return true;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > eps) {
        const double ratio = T(i, rhs) / T(i, enter);
        if (ratio < best - 1e-14 || (std::fabs(ratio - best) <= 1e-14 && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= m; ++i)
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    basis[leave] = enter;
  }
  throw std::runtime_error("simplex iteration limit reached");
}

}  // namespace detail

inline LpResult simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                            double eps = 1e-11) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  // columns: n structural, m artificial, rhs
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  for (int i = 0; i < m; ++i) {
    const double s = b(i) < 0 ? -1.0 : 1.0;
    T.row(i).head(n) = s * A.row(i);
    T(i, n + i) = 1.0;
    T(i, n + m) = s * b(i);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  // phase 1: minimize sum of artificials
  for (int i = 0; i < m; ++i) T.row(m) -= T.row(i);
  for (int i = 0; i < m; ++i) T(m, n + i) = 0.0;
  detail::simplex_iterate(T, basis, n + m, eps);
  LpResult res;
  if (-T(m, n + m) > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) return res;
  // drive remaining artificials out of the basis where possible
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (int j = 0; j < n; ++j)
      if (std::fabs(T(i, j)) > eps) {
        T.row(i) /= T(i, j);
        for (int r = 0; r <= m; ++r)
          if (r != i && T(r, j) != 0.0) T.row(r) -= T(r, j) * T.row(i);
        basis[i] = j;
        break;
      }
  }
  // phase 2 on structural columns only (artificials blocked)
  T.row(m).setZero();
  T.row(m).head(n) = -c.transpose();
  for (int i = 0; i < m; ++i)
    if (basis[i] < n && T(m, basis[i]) != 0.0) T.row(m) -= T(m, basis[i]) * T.row(i);
  if (!detail::simplex_iterate(T, basis, n, eps)) {
    res.status = LpResult::Status::unbounded;
    return res;
  }
  res.status = LpResult::Status::optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x(basis[i]) = T(i, n + m);
  res.value = c.dot(res.x);
  return res;
}

}  // namespace besov
