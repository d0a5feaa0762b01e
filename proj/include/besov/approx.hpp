#pragma once

// Best n-term and uniform wavelet approximation, and decay-rate fits.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "besov/error.hpp"
#include "besov/grid.hpp"
#include "besov/wavelet.hpp"

namespace besov {

struct DetailIndex {
  int j = 0;
  long k1 = 0;
  long k2 = 0;
  int e = 1;
  friend bool operator<(const DetailIndex& a, const DetailIndex& b) {
    return std::tie(a.j, a.k1, a.k2, a.e) < std::tie(b.j, b.k1, b.k2, b.e);
  }
  friend bool operator==(const DetailIndex& a, const DetailIndex& b) {
    return std::tie(a.j, a.k1, a.k2, a.e) == std::tie(b.j, b.k1, b.k2, b.e);
  }
};

/// Where approximation errors are measured: the domain mask or the whole grid cube.
enum class ErrorRegion { domain, cube };

/// Details ranked by |<g, eta_{I,p'}>| descending, ties by (j, k1, k2, e).
/// Zero coefficients are ranked last.
inline std::vector<DetailIndex> rank_details(const WaveletCoeffs& c, double p) {
  struct Item {
    double mag;
    DetailIndex idx;
  };
  std::vector<Item> items;
  items.reserve(c.detail_count());
  std::vector<double> conv;
  for (int j = c.j0; j < c.J; ++j) conv.push_back(std::pow(c.cube_volume(j), 1.0 / p - 1.0 / c.p_norm));
  c.for_each_detail([&](int j, int e, long k1, long k2, double v) {
    items.push_back({std::fabs(v * conv[static_cast<std::size_t>(j - c.j0)]), {j, k1, k2, e}});
  });
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.mag != b.mag) return a.mag > b.mag;
    return a.idx < b.idx;
  });
  std::vector<DetailIndex> out(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) out[i] = items[i].idx;
  return out;
}

namespace detail {

inline double residual_norm(const WaveletCoeffs& discarded, double p, ErrorRegion region) {
  const std::vector<double> r = synthesize_samples(discarded);
  if (region == ErrorRegion::cube) {
    std::vector<std::uint8_t> all(r.size(), 1);
    return masked_norm(discarded.grid, all, r, p);
  }
  const GridFunction proto(discarded.grid, *discarded.domain, std::vector<double>(discarded.grid.size(), 0.0));
  return masked_norm(discarded.grid, proto.mask(), r, p);
}

}  // namespace detail

struct NTermResult {
  std::size_t n = 0;
  double error = 0;
  std::vector<DetailIndex> selected;
};

/// Keeps the coarse part and the n largest details; error is the L_p norm of the
/// discarded part over the chosen region.
inline NTermResult best_n_term(const WaveletCoeffs& c, std::size_t n, double p,
                               ErrorRegion region = ErrorRegion::domain) {
  require(p > 0, "error exponent must be positive");
  const std::vector<DetailIndex> order = rank_details(c, p);
  NTermResult r;
  r.n = std::min(n, order.size());
  r.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r.n));
  WaveletCoeffs discarded = c;
  for (auto& t : discarded.coarse.types) std::fill(t.begin(), t.end(), 0.0);
  for (const auto& i : r.selected) discarded.at(i.j, i.e, i.k1, i.k2) = 0.0;
  r.error = detail::residual_norm(discarded, p, region);
  return r;
}

/// Errors of best n-term approximation for several budgets from one ranking.
inline std::vector<double> best_n_term_errors(const WaveletCoeffs& c, const std::vector<std::size_t>& budgets, double p,
                                              ErrorRegion region = ErrorRegion::domain) {
  const std::vector<DetailIndex> order = rank_details(c, p);
  std::vector<double> out;
  out.reserve(budgets.size());
  for (std::size_t n : budgets) {
    WaveletCoeffs discarded = c;
    for (auto& t : discarded.coarse.types) std::fill(t.begin(), t.end(), 0.0);
    const std::size_t nn = std::min(n, order.size());
    for (std::size_t i = 0; i < nn; ++i) discarded.at(order[i].j, order[i].e, order[i].k1, order[i].k2) = 0.0;
    out.push_back(detail::residual_norm(discarded, p, region));
  }
  return out;
}

struct UniformResult {
  std::size_t kept = 0;
  double error = 0;
};

/// Keeps every detail with j < J_cut.
inline UniformResult uniform_truncation(const WaveletCoeffs& c, int J_cut, double p,
                                        ErrorRegion region = ErrorRegion::domain) {
  require(J_cut >= c.j0 && J_cut <= c.J, "uniform truncation needs j0 <= J_cut <= J");
  WaveletCoeffs discarded = c;
  for (auto& t : discarded.coarse.types) std::fill(t.begin(), t.end(), 0.0);
  UniformResult r;
  for (int j = c.j0; j < c.J; ++j) {
    if (j < J_cut) {
      for (auto& t : discarded.level(j).types) {
        r.kept += t.size();
        std::fill(t.begin(), t.end(), 0.0);
      }
    }
  }
  r.error = detail::residual_norm(discarded, p, region);
  return r;
}

struct SlopeWindow {
  double n_lo = 0;
  double n_hi = 0;
};

/// Least-squares slope of -log(error) against log(n) over n_lo <= n <= n_hi.
inline double decay_slope(const std::vector<double>& n, const std::vector<double>& err, SlopeWindow w) {
  require(n.size() == err.size(), "budget and error lists differ in length");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < w.n_lo || n[i] > w.n_hi) continue;
    if (!(err[i] > 0)) throw PreconditionError("zero error in slope window: representation is exact, slope undefined");
    require(n[i] > 0, "budgets in the slope window must be positive");
    const double x = std::log(n[i]), y = -std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  require(cnt >= 4, "slope fit needs at least 4 points in the window");
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

/// Middle two decades (in log n) of the points whose error is above floor * max error.
/// Spans shorter than two decades use the whole range.
inline SlopeWindow default_window(const std::vector<double>& n, const std::vector<double>& err, double floor = 1e-10) {
  double emax = 0;
  for (double e : err) emax = std::max(emax, e);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] > 0 && err[i] > floor * emax) {
      lo = std::min(lo, n[i]);
      hi = std::max(hi, n[i]);
    }
  require(hi > 0, "no usable points for a slope window");
  const double a = std::log10(lo), b = std::log10(hi);
  if (b - a <= 2.0) return {lo, hi};
  const double mid = 0.5 * (a + b);
  return {std::pow(10.0, mid - 1.0) * (1 - 1e-12), std::pow(10.0, mid + 1.0) * (1 + 1e-12)};
}

struct ApproxCurve {
  std::vector<double> budgets;
  std::vector<double> errors;
  double slope = std::numeric_limits<double>::quiet_NaN();
  SlopeWindow window;

  void fit() {
    window = default_window(budgets, errors);
    slope = decay_slope(budgets, errors, window);
  }
  nlohmann::json to_json() const {
    return {{"budgets", budgets}, {"errors", errors}, {"slope", slope}, {"window", {window.n_lo, window.n_hi}}};
  }
};

/// Powers of two 1, 2, 4, ... up to and including total.
inline std::vector<std::size_t> dyadic_budgets(std::size_t total) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n < total; n *= 2) out.push_back(n);
  out.push_back(total);
  return out;
}

struct NTermStudy {
  ApproxCurve adaptive;
  ApproxCurve uniform;
  std::vector<double> adaptive_at_uniform;  // best n-term error at each uniform budget
  bool adaptive_dominates = true;
};

/// Adaptive and uniform curves for one coefficient set.
inline NTermStudy nterm_study(const WaveletCoeffs& c, double p, ErrorRegion region = ErrorRegion::domain) {
  NTermStudy st;
  std::size_t nonzero = 0;
  c.for_each_detail([&](int, int, long, long, double v) { nonzero += v != 0.0; });
  const auto budgets = dyadic_budgets(std::max<std::size_t>(nonzero, 1));
  const auto errs = best_n_term_errors(c, budgets, p, region);
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    st.adaptive.budgets.push_back(static_cast<double>(budgets[i]));
    st.adaptive.errors.push_back(errs[i]);
  }
  std::vector<std::size_t> ub;
  for (int jc = c.j0 + 1; jc <= c.J; ++jc) {
    const UniformResult u = uniform_truncation(c, jc, p, region);
    st.uniform.budgets.push_back(static_cast<double>(u.kept));
    st.uniform.errors.push_back(u.error);
    ub.push_back(u.kept);
  }
  st.adaptive_at_uniform = best_n_term_errors(c, ub, p, region);
  for (std::size_t i = 0; i < ub.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, st.uniform.errors.front());
    if (st.adaptive_at_uniform[i] > st.uniform.errors[i] + tol) st.adaptive_dominates = false;
  }
  return st;
}

}  // namespace besov
