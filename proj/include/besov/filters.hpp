#pragma once

// Daubechies orthonormal filters by spectral factorization.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "besov/error.hpp"

namespace besov {

struct FilterPair {
  int m = 0;
  std::vector<double> low;   // h, sum = sqrt(2)
  std::vector<double> high;  // g_k = (-1)^k h_{L-1-k}
  int length() const { return static_cast<int>(low.size()); }
};

namespace detail {

inline double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Roots of P(y) = sum_{k<m} C(m-1+k, k) y^k, polished by Newton steps.
inline std::vector<std::complex<double>> daubechies_poly_roots(int m) {
  const int deg = m - 1;
  std::vector<double> c(m);
  for (int k = 0; k < m; ++k) c[k] = binom(m - 1 + k, k);
  if (deg == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  for (auto& y : roots) {
    for (int it = 0; it < 8; ++it) {
      std::complex<double> pv = c[deg], dv = 0;
      for (int k = deg - 1; k >= 0; --k) {
        dv = dv * y + pv;
        pv = pv * y + c[k];
      }
      if (std::abs(dv) == 0.0) break;
      y -= pv / dv;
    }
  }
  return roots;
}

}  // namespace detail

/// Orthonormal Daubechies filter pair with m vanishing moments (length 2m).
inline FilterPair daubechies_filters(int m) {
  require(m >= 1 && m <= 10, "Daubechies filters are provided for 1 <= m <= 10");
  // polynomial coefficients in z, ascending powers
  std::vector<std::complex<double>> poly{1.0};
  auto mul_linear = [&](std::complex<double> a, std::complex<double> b) {  // times (a + b z)
    std::vector<std::complex<double>> out(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += a * poly[i];
      out[i + 1] += b * poly[i];
    }
    poly.swap(out);
  };
  for (int i = 0; i < m; ++i) mul_linear(1.0, 1.0);
  for (const auto& y : detail::daubechies_poly_roots(m)) {
    // (2 - z - 1/z)/4 = y  <=>  z^2 - (2 - 4y) z + 1 = 0
    const std::complex<double> b = 2.0 - 4.0 * y;
    const std::complex<double> disc = std::sqrt(b * b - 4.0);
    std::complex<double> z = (b + disc) / 2.0;
    if (std::abs(z) > 1.0) z = (b - disc) / 2.0;
    mul_linear(-z, 1.0);
  }
  FilterPair f;
  f.m = m;
  const int L = 2 * m;
  f.low.resize(L);
  double s = 0;
  for (int k = 0; k < L; ++k) s += poly[k].real();
  for (int k = 0; k < L; ++k) f.low[k] = poly[L - 1 - k].real() * std::sqrt(2.0) / s;
  f.high.resize(L);
  for (int k = 0; k < L; ++k) f.high[k] = ((k % 2) ? -1.0 : 1.0) * f.low[L - 1 - k];
  return f;
}

}  // namespace besov
