#pragma once

// Tensor-product Daubechies transform on dyadic grids with zero extension.
//
// The finest samples, scaled by h^{d/2}, are taken as scaling coefficients at
// level J. Each analysis step is the full l2(Z) filter bank, so the index range
// grows by about L/2 per level and the transform is exactly orthogonal: no
// boundary wavelets, no periodization.
//
// Detail coefficients are stored paired against the p'-renormalized wavelets,
// i.e. the stored value is |I|^{1/p - 1/2} times the L2 coefficient.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "besov/domain.hpp"
#include "besov/error.hpp"
#include "besov/filters.hpp"
#include "besov/grid.hpp"

namespace besov {

inline long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

/// Coefficients of one level: shifts lo .. lo+count-1 in every axis.
/// `types[e-1]` holds type e (bit 0: wavelet along x1, bit 1: along x2),
/// row-major with k1 fastest. The coarse band uses types[0] for the scaling part.
struct Band {
  long lo = 0;
  long count = 0;
  std::vector<std::vector<double>> types;

  std::size_t flat(long k1, long k2) const {
    return static_cast<std::size_t>((k2 - lo) * count + (k1 - lo));
  }
  bool has(long k) const { return k >= lo && k < lo + count; }
};

struct WaveletCoeffs {
  int m = 3;
  int j0 = 2;
  int J = 0;
  double p_norm = 2.0;
  GridSpec grid;
  std::shared_ptr<const DomainSpec> domain;
  Band coarse;                // level j0 scaling coefficients (L2-normalized)
  std::vector<Band> details;  // details[j - j0], j = j0 .. J-1

  int d() const { return grid.d; }
  int num_types() const { return d() == 1 ? 1 : 3; }
  int filter_length() const { return 2 * m; }
  const Band& level(int j) const { return details.at(static_cast<std::size_t>(j - j0)); }
  Band& level(int j) { return details.at(static_cast<std::size_t>(j - j0)); }

  /// |I| = (side 2^-j)^d
  double cube_volume(int j) const { return std::pow(grid.box.side * std::ldexp(1.0, -j), d()); }

  /// Stored value / L2 coefficient at level j under p_norm.
  double storage_factor(int j) const { return storage_factor(j, p_norm); }
  double storage_factor(int j, double p) const { return std::pow(cube_volume(j), 1.0 / p - 0.5); }

  double& at(int j, int e, long k1, long k2 = 0) {
    Band& b = level(j);
    require(e >= 1 && e <= num_types() && b.has(k1) && (d() == 1 || b.has(k2)), "wavelet index out of range");
    return b.types[static_cast<std::size_t>(e - 1)][b.flat(k1, d() == 1 ? b.lo : k2)];
  }
  double at(int j, int e, long k1, long k2 = 0) const {
    const Band& b = level(j);
    require(e >= 1 && e <= num_types() && b.has(k1) && (d() == 1 || b.has(k2)), "wavelet index out of range");
    return b.types[static_cast<std::size_t>(e - 1)][b.flat(k1, d() == 1 ? b.lo : k2)];
  }

  std::size_t detail_count() const {
    std::size_t n = 0;
    for (const auto& b : details)
      for (const auto& t : b.types) n += t.size();
    return n;
  }

  /// Same coefficients stored against a different renormalization exponent.
  WaveletCoeffs renormalized(double p) const {
    require(p > 0, "renormalization exponent must be positive");
    WaveletCoeffs out = *this;
    out.p_norm = p;
    for (int j = j0; j < J; ++j) {
      const double f = std::pow(cube_volume(j), 1.0 / p - 1.0 / p_norm);
      for (auto& t : out.level(j).types)
        for (double& v : t) v *= f;
    }
    return out;
  }

  /// Zeroes all coefficients, keeping the index structure.
  WaveletCoeffs zeros_like() const {
    WaveletCoeffs out = *this;
    for (auto& t : out.coarse.types) std::fill(t.begin(), t.end(), 0.0);
    for (auto& b : out.details)
      for (auto& t : b.types) std::fill(t.begin(), t.end(), 0.0);
    return out;
  }

  /// Visits every detail: f(j, e, k1, k2, stored value).
  template <class F>
  void for_each_detail(F&& f) const {
    for (int j = j0; j < J; ++j) {
      const Band& b = level(j);
      const long n2 = d() == 1 ? 1 : b.count;
      for (int e = 1; e <= num_types(); ++e) {
        const auto& t = b.types[static_cast<std::size_t>(e - 1)];
        for (long i2 = 0; i2 < n2; ++i2)
          for (long i1 = 0; i1 < b.count; ++i1)
            f(j, e, b.lo + i1, d() == 1 ? 0L : b.lo + i2, t[static_cast<std::size_t>(i2 * b.count + i1)]);
      }
    }
  }

  /// Physical center of the support of the level-j function with shift k along one axis.
  double support_center(int j, long k, int axis) const {
    const double Lm1 = filter_length() - 1;
    const double scale = std::ldexp(1.0, J - j);
    const double idx = scale * (static_cast<double>(k) + Lm1 / 2.0) - Lm1 / 2.0;
    return grid.box.lo[axis] + grid.h() * (idx + 0.5);
  }
  Point support_center(int j, long k1, long k2) const {
    return {support_center(j, k1, 0), d() == 1 ? 0.0 : support_center(j, k2, 1)};
  }
};

namespace detail {

// One analysis step along a line: x over [lo, lo+n) at stride xs.
inline void analyze_line(const double* x, std::ptrdiff_t xs, long n, const FilterPair& f, long klo, long kn,
                         double* a, double* dd, std::ptrdiff_t os, long lo) {
  const int L = f.length();
  for (long i = 0; i < kn; ++i) {
    const long k = klo + i;
    double sa = 0, sd = 0;
    for (int t = 0; t < L; ++t) {
      const long idx = 2 * k + t - lo;
      if (idx < 0 || idx >= n) continue;
      const double v = x[idx * xs];
      sa += f.low[t] * v;
      sd += f.high[t] * v;
    }
    a[i * os] = sa;
    dd[i * os] = sd;
  }
}

// One synthesis step along a line: coefficient range [klo, klo+kn), output range [olo, olo+on).
inline void synthesize_line(const double* a, const double* dd, std::ptrdiff_t is, long kn, const FilterPair& f,
                            long klo, double* x, std::ptrdiff_t xs, long olo, long on) {
  const int L = f.length();
  for (long i = 0; i < on; ++i) x[i * xs] = 0.0;
  for (long i = 0; i < kn; ++i) {
    const double va = a ? a[i * is] : 0.0;
    const double vd = dd ? dd[i * is] : 0.0;
    if (va == 0.0 && vd == 0.0) continue;
    const long k = klo + i;
    for (int t = 0; t < L; ++t) {
      const long idx = 2 * k + t - olo;
      if (idx < 0 || idx >= on) continue;
      x[idx * xs] += f.low[t] * va + f.high[t] * vd;
    }
  }
}

struct Range {
  long lo = 0;
  long count = 0;
  long hi() const { return lo + count; }
};

inline Range coarser_range(Range r, int L) {
  const long klo = ceil_div(r.lo - L + 1, 2);
  const long khi = floor_div(r.hi() - 1, 2);
  return {klo, khi - klo + 1};
}

// 2-D (or 1-D) analysis step: input square array over range r.
// Returns the coarse part and fills the three (or one) detail types.
inline std::vector<double> analyze_step(const std::vector<double>& in, Range r, int d, const FilterPair& f, Range out,
                                        std::vector<std::vector<double>>& det) {
  const long n = r.count, k = out.count;
  if (d == 1) {
    std::vector<double> a(k), dd(k);
    analyze_line(in.data(), 1, n, f, out.lo, k, a.data(), dd.data(), 1, r.lo);
    det.assign(1, std::move(dd));
    return a;
  }
  // rows: along x1 for each x2
  std::vector<double> L1(static_cast<std::size_t>(n * k)), H1(static_cast<std::size_t>(n * k));
  for (long i2 = 0; i2 < n; ++i2)
    analyze_line(in.data() + i2 * n, 1, n, f, out.lo, k, L1.data() + i2 * k, H1.data() + i2 * k, 1, r.lo);
  std::vector<double> LL(static_cast<std::size_t>(k * k)), LH(LL.size()), HL(LL.size()), HH(LL.size());
  for (long i1 = 0; i1 < k; ++i1) {
    analyze_line(L1.data() + i1, k, n, f, out.lo, k, LL.data() + i1, LH.data() + i1, k, r.lo);
    analyze_line(H1.data() + i1, k, n, f, out.lo, k, HL.data() + i1, HH.data() + i1, k, r.lo);
  }
  det.resize(3);
  det[0] = std::move(HL);  // e = 1: wavelet along x1
  det[1] = std::move(LH);  // e = 2: wavelet along x2
  det[2] = std::move(HH);
  return LL;
}

// Embeds an array over range src into the larger range dst (zeros elsewhere).
inline std::vector<double> embed(const std::vector<double>& v, Range src, Range dst, int d) {
  if (src.lo == dst.lo && src.count == dst.count) return v;
  const long off = src.lo - dst.lo;
  if (d == 1) {
    std::vector<double> out(static_cast<std::size_t>(dst.count), 0.0);
    for (long i = 0; i < src.count; ++i) out[static_cast<std::size_t>(i + off)] = v[static_cast<std::size_t>(i)];
    return out;
  }
  std::vector<double> out(static_cast<std::size_t>(dst.count * dst.count), 0.0);
  for (long i2 = 0; i2 < src.count; ++i2)
    for (long i1 = 0; i1 < src.count; ++i1)
      out[static_cast<std::size_t>((i2 + off) * dst.count + i1 + off)] = v[static_cast<std::size_t>(i2 * src.count + i1)];
  return out;
}

// Synthesis step: coarse over ra, details over rd. Output covers the full support.
inline std::vector<double> synthesize_step(const std::vector<double>& a, Range ra,
                                           const std::vector<std::vector<double>>* det, Range rd, int d,
                                           const FilterPair& f, Range& out_range) {
  Range u = ra;
  if (det) {
    const long lo = std::min(ra.lo, rd.lo), hi = std::max(ra.hi(), rd.hi());
    u = {lo, hi - lo};
  }
  const int L = f.length();
  out_range = {2 * u.lo, 2 * u.count + L - 2};
  const long k = u.count, n = out_range.count;
  const std::vector<double> A = embed(a, ra, u, d);
  if (d == 1) {
    std::vector<double> D = det ? embed((*det)[0], rd, u, d) : std::vector<double>(static_cast<std::size_t>(k), 0.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    synthesize_line(A.data(), D.data(), 1, k, f, u.lo, x.data(), 1, out_range.lo, n);
    return x;
  }
  std::vector<double> zero;
  auto get = [&](int e) -> std::vector<double> {
    if (!det) return std::vector<double>(static_cast<std::size_t>(k * k), 0.0);
    return embed((*det)[static_cast<std::size_t>(e - 1)], rd, u, d);
  };
  const std::vector<double> HL = get(1), LH = get(2), HH = get(3);
  // columns first (undo the column pass), giving L1 and H1 over (x2: n, x1: k)
  std::vector<double> L1(static_cast<std::size_t>(n * k)), H1(L1.size());
  for (long i1 = 0; i1 < k; ++i1) {
    synthesize_line(A.data() + i1, LH.data() + i1, k, k, f, u.lo, L1.data() + i1, k, out_range.lo, n);
    synthesize_line(HL.data() + i1, HH.data() + i1, k, k, f, u.lo, H1.data() + i1, k, out_range.lo, n);
  }
  std::vector<double> x(static_cast<std::size_t>(n * n));
  for (long i2 = 0; i2 < n; ++i2)
    synthesize_line(L1.data() + i2 * k, H1.data() + i2 * k, 1, k, f, u.lo, x.data() + i2 * n, 1, out_range.lo, n);
  return x;
}

}  // namespace detail

/// Multilevel analysis down to level j0; details stored against p'-renormalized wavelets.
inline WaveletCoeffs analyze(const GridFunction& g, int m, int j0, double p_norm) {
  const GridSpec& s = g.spec();
  require(j0 >= 0, "coarsest level must be non-negative");
  require(j0 < s.J, "coarsest level j0 must be below the grid level J");
  require(p_norm > 0, "renormalization exponent must be positive");
  const FilterPair f = daubechies_filters(m);
  WaveletCoeffs c;
  c.m = m;
  c.j0 = j0;
  c.J = s.J;
  c.p_norm = p_norm;
  c.grid = s;
  c.domain = std::make_shared<const DomainSpec>(g.domain());
  c.details.resize(static_cast<std::size_t>(s.J - j0));

  const double scale = std::pow(s.h(), s.d / 2.0);
  std::vector<double> cur(g.samples());
  for (double& v : cur) v *= scale;
  detail::Range r{0, static_cast<long>(s.n())};
  for (int j = s.J - 1; j >= j0; --j) {
    const detail::Range out = detail::coarser_range(r, f.length());
    Band& b = c.level(j);
    b.lo = out.lo;
    b.count = out.count;
    cur = detail::analyze_step(cur, r, s.d, f, out, b.types);
    const double fac = c.storage_factor(j);
    for (auto& t : b.types)
      for (double& v : t) v *= fac;
    r = out;
  }
  c.coarse.lo = r.lo;
  c.coarse.count = r.count;
  c.coarse.types.assign(1, std::move(cur));
  return c;
}

/// Inverse transform over the full support of all coefficients. Returns the
/// finest-level sample values (not h-scaled) and their index range.
inline std::vector<double> synthesize_padded(const WaveletCoeffs& c, long& lo, long& count) {
  const FilterPair f = daubechies_filters(c.m);
  std::vector<double> cur = c.coarse.types.at(0);
  detail::Range r{c.coarse.lo, c.coarse.count};
  for (int j = c.j0; j < c.J; ++j) {
    const Band& b = c.level(j);
    std::vector<std::vector<double>> det = b.types;
    const double fac = 1.0 / c.storage_factor(j);
    for (auto& t : det)
      for (double& v : t) v *= fac;
    detail::Range out;
    cur = detail::synthesize_step(cur, r, &det, {b.lo, b.count}, c.d(), f, out);
    r = out;
  }
  const double inv = 1.0 / std::pow(c.grid.h(), c.d() / 2.0);
  for (double& v : cur) v *= inv;
  lo = r.lo;
  count = r.count;
  return cur;
}

/// Finest-level samples on the grid cube (no domain mask applied).
inline std::vector<double> synthesize_samples(const WaveletCoeffs& c) {
  long lo = 0, count = 0;
  const std::vector<double> full = synthesize_padded(c, lo, count);
  const long n = static_cast<long>(c.grid.n());
  if (c.d() == 1) {
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (long i = 0; i < n; ++i)
      if (i - lo >= 0 && i - lo < count) out[static_cast<std::size_t>(i)] = full[static_cast<std::size_t>(i - lo)];
    return out;
  }
  std::vector<double> out(static_cast<std::size_t>(n * n), 0.0);
  for (long i2 = 0; i2 < n; ++i2) {
    const long r2 = i2 - lo;
    if (r2 < 0 || r2 >= count) continue;
    for (long i1 = 0; i1 < n; ++i1) {
      const long r1 = i1 - lo;
      if (r1 < 0 || r1 >= count) continue;
      out[static_cast<std::size_t>(i2 * n + i1)] = full[static_cast<std::size_t>(r2 * count + r1)];
    }
  }
  return out;
}

/// Inverse transform restricted to the grid; values outside the domain are zeroed.
inline GridFunction synthesize(const WaveletCoeffs& c) {
  return GridFunction(c.grid, *c.domain, synthesize_samples(c));
}

/// Coefficient set with the index structure of an analysis of a grid of this shape, all zero.
inline WaveletCoeffs empty_coeffs(const GridSpec& spec, const DomainSpec& dom, int m, int j0, double p_norm) {
  return analyze(GridFunction(spec, dom, std::vector<double>(spec.size(), 0.0)), m, j0, p_norm).zeros_like();
}

// ---------------------------------------------------------------------------
// boundary / interior classification

enum class WaveletClass : std::uint8_t { boundary, interior };

struct BandLabel {
  int j = 0;
  int n = 0;
  WaveletClass cls = WaveletClass::boundary;
};

/// Labels per level and shift; band -1 marks indices whose expanded ball misses the domain.
struct Classification {
  double c = 2.0;
  double diam_q = 0;  // diameter of the reference support cube, in units of 2^-j side
  int c0 = 0;
  int j0 = 0;
  std::vector<Band> bands;  // index ranges only, matching the details
  std::vector<std::vector<int>> band_index;

  std::optional<BandLabel> label(int j, long k1, long k2 = 0) const {
    const Band& b = bands.at(static_cast<std::size_t>(j - j0));
    const int n = band_index[static_cast<std::size_t>(j - j0)][b.flat(k1, k2)];
    if (n < 0) return std::nullopt;
    return BandLabel{j, n, n > c0 ? WaveletClass::interior : WaveletClass::boundary};
  }
};

/// Splits indices into distance bands n*2^-j <= dist(center, boundary) < (n+1)*2^-j
/// (lengths scaled by the cube side). Indices whose c-expanded support ball
/// misses the domain are dropped; retained centers outside the domain get band 0.
inline Classification classify(const WaveletCoeffs& coeffs, const DomainSpec& dom, double c) {
  require(c > 1, "classification constant c must exceed 1");
  require(dom.fits_in(coeffs.grid.box), "domain does not match the coefficient grid");
  const int d = coeffs.d();
  Classification out;
  out.c = c;
  out.j0 = coeffs.j0;
  out.diam_q = (2.0 * coeffs.m - 1.0) * std::sqrt(static_cast<double>(d));
  out.c0 = static_cast<int>(std::ceil(c * out.diam_q / 2.0 - 1e-12));
  for (int j = coeffs.j0; j < coeffs.J; ++j) {
    const Band& b = coeffs.level(j);
    Band lb;
    lb.lo = b.lo;
    lb.count = b.count;
    const double unit = coeffs.grid.box.side * std::ldexp(1.0, -j);
    const double radius_c = c * 0.5 * unit * out.diam_q;
    const long n2 = d == 1 ? 1 : b.count;
    std::vector<int> idx(static_cast<std::size_t>(b.count * n2), -1);
    for (long i2 = 0; i2 < n2; ++i2)
      for (long i1 = 0; i1 < b.count; ++i1) {
        const Point x = coeffs.support_center(j, b.lo + i1, d == 1 ? 0 : b.lo + i2);
        const double sd = dom.signed_distance(x);
        if (sd <= -radius_c) continue;
        idx[static_cast<std::size_t>(i2 * b.count + i1)] = sd > 0 ? static_cast<int>(std::floor(sd / unit)) : 0;
      }
    out.bands.push_back(std::move(lb));
    out.band_index.push_back(std::move(idx));
  }
  return out;
}

/// Diagnostic dump: j,k1,k2,e,n_band,class,value. Dropped indices get n_band -1 and class "dropped".
inline void write_coeff_csv(const WaveletCoeffs& c, const Classification& cl, std::ostream& os) {
  os << "j,k1,k2,e,n_band,class,value\n";
  c.for_each_detail([&](int j, int e, long k1, long k2, double v) {
    const auto lab = cl.label(j, k1, k2);
    const char* cls = !lab ? "dropped" : lab->cls == WaveletClass::interior ? "interior" : "boundary";
    os << fmt::format("{},{},{},{},{},{},{:.17g}\n", j, k1, k2, e, lab ? lab->n : -1, cls, v);
  });
}

}  // namespace besov
