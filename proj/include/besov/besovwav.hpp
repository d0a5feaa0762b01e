#pragma once

// Wavelet-side Besov quasi-norms, the adaptivity scale, and the
// coarse/boundary/interior split of the adaptivity quasi-norm.

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "besov/bounds.hpp"
#include "besov/error.hpp"
#include "besov/wavelet.hpp"

namespace besov {

/// Neumaier compensated sum.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

/// Sum with its per-level breakdown.
struct QuasiNorm {
  double coarse = 0;   // L_p (or L_tau) norm of the coarse projection
  double detail = 0;   // (sum over levels)^{1/exponent}
  double total = 0;    // coarse + detail
  double exponent = 0;  // p for Besov, tau for the adaptivity scale
  std::vector<int> levels;
  std::vector<double> per_level;  // level sums before the outer root
};

/// L_r norm of the coarse projection over its full support; r may be < 1.
inline double coarse_norm(const WaveletCoeffs& c, double r) {
  WaveletCoeffs only = c.zeros_like();
  only.coarse = c.coarse;
  long lo = 0, count = 0;
  const std::vector<double> v = synthesize_padded(only, lo, count);
  if (std::isinf(r)) {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  KahanSum s;
  for (double x : v)
    if (x != 0.0) s += std::pow(std::fabs(x), r);
  return std::pow(s.value() * c.grid.cell_volume(), 1.0 / r);
}

namespace detail {

// level sums of weight(j) * |coefficient renormalized to p|^r
template <class W>
std::vector<double> level_power_sums(const WaveletCoeffs& c, double p, double r, W&& weight) {
  std::vector<double> out;
  for (int j = c.j0; j < c.J; ++j) {
    const double conv = std::pow(c.cube_volume(j), 1.0 / p - 1.0 / c.p_norm);
    const double w = weight(j);
    KahanSum s;
    for (const auto& t : c.level(j).types)
      for (double v : t)
        if (v != 0.0) s += std::pow(std::fabs(v * conv), r);
    out.push_back(w * s.value());
  }
  return out;
}

inline QuasiNorm assemble(const WaveletCoeffs& c, double coarse, std::vector<double> per_level, double r) {
  QuasiNorm q;
  q.coarse = coarse;
  q.exponent = r;
  KahanSum s;
  for (double v : per_level) s += v;
  q.detail = std::pow(s.value(), 1.0 / r);
  q.total = q.coarse + q.detail;
  for (int j = c.j0; j < c.J; ++j) q.levels.push_back(j);
  q.per_level = std::move(per_level);
  return q;
}

}  // namespace detail

/// B^s_p(L_p) quasi-norm: ||P0 g||_p + (sum |I|^{-sp/d} |<g, eta_{I,p'}>|^p)^{1/p}.
/// Valid for sigma_p < s < m.
inline QuasiNorm besov_quasinorm_wavelet(const WaveletCoeffs& c, double s, double p) {
  require(p > 0 && std::isfinite(p), "Besov quasi-norm needs 0 < p < inf");
  require(s > sigma_p(c.d(), p), "Besov quasi-norm needs s > sigma_p");
  require(s < c.m, "Besov quasi-norm needs s below the wavelet order m");
  const int d = c.d();
  auto lv = detail::level_power_sums(c, p, p, [&](int j) { return std::pow(c.cube_volume(j), -s * p / d); });
  return detail::assemble(c, coarse_norm(c, p), std::move(lv), p);
}

/// Adaptivity-scale quasi-norm ||P0 g||_tau + (sum |<g, eta_{I,p'}>|^tau)^{1/tau},
/// 1/tau = sigma/d + 1/p. Independent of the stored renormalization.
inline QuasiNorm adaptivity_quasinorm(const WaveletCoeffs& c, double sigma, double p) {
  require(sigma > 0 && sigma < c.m, "adaptivity quasi-norm needs 0 < sigma < m");
  const double tau = tau_from_sigma(sigma, c.d(), p);
  auto lv = detail::level_power_sums(c, p, tau, [](int) { return 1.0; });
  return detail::assemble(c, coarse_norm(c, tau), std::move(lv), tau);
}

struct SplitReport {
  double sigma = 0;
  double tau = 0;
  double coarse = 0;
  double boundary = 0;
  double interior = 0;
  double dropped = 0;  // indices whose expanded ball misses the domain
  double total = 0;    // full adaptivity quasi-norm
  std::vector<int> levels;
  std::vector<double> boundary_per_level;  // tau-power sums
  std::vector<double> interior_per_level;

  nlohmann::json to_json() const {
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t i = 0; i < levels.size(); ++i)
      per.push_back({{"j", levels[i]}, {"boundary", boundary_per_level[i]}, {"interior", interior_per_level[i]}});
    return {{"sigma", sigma}, {"tau", tau},          {"coarse", coarse}, {"boundary", boundary},
            {"interior", interior}, {"dropped", dropped}, {"total", total},   {"per_level", per}};
  }
};

/// Adaptivity quasi-norm split into coarse, boundary and interior wavelets.
inline SplitReport split_norm_contributions(const WaveletCoeffs& c, const DomainSpec& dom, double sigma, double p,
                                            double cc) {
  const Classification cl = classify(c, dom, cc);
  const QuasiNorm full = adaptivity_quasinorm(c, sigma, p);
  SplitReport r;
  r.sigma = sigma;
  r.tau = full.exponent;
  r.coarse = full.coarse;
  r.total = full.total;
  const double tau = r.tau;
  KahanSum bnd, intr, drop;
  for (int j = c.j0; j < c.J; ++j) {
    const double conv = std::pow(c.cube_volume(j), 1.0 / p - 1.0 / c.p_norm);
    const Band& b = c.level(j);
    const auto& idx = cl.band_index[static_cast<std::size_t>(j - c.j0)];
    KahanSum lb, li;
    for (const auto& t : b.types)
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0.0) continue;
        const double v = std::pow(std::fabs(t[i] * conv), tau);
        if (idx[i] < 0)
          drop += v;
        else if (idx[i] > cl.c0)
          li += v;
        else
          lb += v;
      }
    r.levels.push_back(j);
    r.boundary_per_level.push_back(lb.value());
    r.interior_per_level.push_back(li.value());
    bnd += lb.value();
    intr += li.value();
  }
  r.boundary = std::pow(bnd.value(), 1.0 / tau);
  r.interior = std::pow(intr.value(), 1.0 / tau);
  r.dropped = std::pow(drop.value(), 1.0 / tau);
  return r;
}

/// Least-squares slope of log2(values) against level, skipping non-positive values.
inline double level_log2_slope(const std::vector<int>& levels, const std::vector<double>& values, int jmin, int jmax) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < jmin || levels[i] > jmax || !(values[i] > 0)) continue;
    const double x = levels[i], y = std::log2(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  require(n >= 2, "slope fit needs at least two positive levels");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace besov
