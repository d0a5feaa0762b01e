#pragma once

// Direct smoothness functionals on sampled fields: Hoelder and locally
// weighted Hoelder semi-norms, moduli of smoothness, the modulus form of the
// Besov semi-norm, the Gagliardo semi-norm, and local polynomial (Whitney)
// errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "besov/domain.hpp"
#include "besov/error.hpp"
#include "besov/grid.hpp"
#include "besov/simplex.hpp"

namespace besov {

struct HolderParams {
  int ell = 0;
  double alpha = 1.0;
  double gamma = 0.0;  // weighted variant only
};

using Region = std::variant<Ball, Cube>;

inline constexpr std::uint64_t kDefaultPairSeed = 0x5eed5eedULL;

/// Partial derivatives of order ell by centered differences with step h.
/// Points whose stencil leaves the domain are flagged invalid.
class DerivativeFields {
 public:
  DerivativeFields(const GridFunction& g, int ell) : spec_(g.spec()), ell_(ell) {
    require(ell >= 0 && ell <= 2, "derivative order must be 0, 1 or 2");
    const int d = spec_.d;
    const long n = static_cast<long>(spec_.n());
    const long n2 = d == 1 ? 1 : n;
    const double h = spec_.h();
    auto in = [&](long i1, long i2) {
      return i1 >= 0 && i1 < n && i2 >= 0 && i2 < n2 && g.inside(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2));
    };
    auto val = [&](long i1, long i2) { return g.at(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2)); };
    // multi-indices nu with |nu| = ell, as offsets to combine
    std::vector<std::array<int, 2>> nus;
    if (d == 1)
      nus.push_back({ell, 0});
    else
      for (int a = ell; a >= 0; --a) nus.push_back({a, ell - a});
    fields_.assign(nus.size(), std::vector<double>(spec_.size(), 0.0));
    valid_.assign(spec_.size(), 0);
    for (long i2 = 0; i2 < n2; ++i2)
      for (long i1 = 0; i1 < n; ++i1) {
        if (!in(i1, i2)) continue;
        // stencil: every offset in [-1,1]^d needed by the highest order
        bool ok = true;
        const int reach = ell == 0 ? 0 : 1;
        for (int o2 = -(d == 2 ? reach : 0); o2 <= (d == 2 ? reach : 0) && ok; ++o2)
          for (int o1 = -reach; o1 <= reach && ok; ++o1) ok = in(i1 + o1, i2 + o2);
        if (!ok) continue;
        const std::size_t idx = spec_.index(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2));
        valid_[idx] = 1;
        for (std::size_t q = 0; q < nus.size(); ++q) {
          const int a = nus[q][0], b = nus[q][1];
          double v = 0;
          if (ell == 0) {
            v = val(i1, i2);
          } else if (ell == 1) {
            v = a == 1 ? (val(i1 + 1, i2) - val(i1 - 1, i2)) / (2 * h) : (val(i1, i2 + 1) - val(i1, i2 - 1)) / (2 * h);
          } else if (a == 2) {
            v = (val(i1 + 1, i2) - 2 * val(i1, i2) + val(i1 - 1, i2)) / (h * h);
          } else if (b == 2) {
            v = (val(i1, i2 + 1) - 2 * val(i1, i2) + val(i1, i2 - 1)) / (h * h);
          } else {
            v = (val(i1 + 1, i2 + 1) - val(i1 + 1, i2 - 1) - val(i1 - 1, i2 + 1) + val(i1 - 1, i2 - 1)) / (4 * h * h);
          }
          fields_[q][idx] = v;
        }
      }
  }

  const GridSpec& spec() const { return spec_; }
  int order() const { return ell_; }
  std::size_t count() const { return fields_.size(); }
  const std::vector<double>& field(std::size_t q) const { return fields_[q]; }
  bool valid(std::size_t idx) const { return valid_[idx] != 0; }
  const std::vector<std::uint8_t>& valid_mask() const { return valid_; }

 private:
  GridSpec spec_;
  int ell_;
  std::vector<std::vector<double>> fields_;
  std::vector<std::uint8_t> valid_;
};

namespace detail {

struct RegionPoints {
  std::vector<long> i1, i2;
  std::vector<std::size_t> idx;
};

inline bool region_contains(const Region& K, const Point& x, int d) {
  if (const Ball* b = std::get_if<Ball>(&K)) {
    const double dx = x[0] - b->center[0], dy = d == 2 ? x[1] - b->center[1] : 0.0;
    return dx * dx + dy * dy <= b->radius * b->radius * (1 + 1e-12);
  }
  return std::get<Cube>(K).contains(x, 1e-12);
}

inline double region_width(const Region& K) {
  if (const Ball* b = std::get_if<Ball>(&K)) return 2 * b->radius;
  return std::get<Cube>(K).side;
}

// grid index bounds of a region's bounding box
inline void region_bounds(const Region& K, const GridSpec& s, long& a1, long& b1, long& a2, long& b2) {
  double lo1, hi1, lo2, hi2;
  if (const Ball* b = std::get_if<Ball>(&K)) {
    lo1 = b->center[0] - b->radius;
    hi1 = b->center[0] + b->radius;
    lo2 = b->center[1] - b->radius;
    hi2 = b->center[1] + b->radius;
  } else {
    const Cube& c = std::get<Cube>(K);
    lo1 = c.lo[0];
    hi1 = c.lo[0] + c.side;
    lo2 = c.lo[1];
    hi2 = c.lo[1] + c.side;
  }
  const double h = s.h();
  const long n = static_cast<long>(s.n());
  a1 = std::max(0L, static_cast<long>(std::floor((lo1 - s.box.lo[0]) / h - 0.5)));
  b1 = std::min(n - 1, static_cast<long>(std::ceil((hi1 - s.box.lo[0]) / h - 0.5)));
  if (s.d == 1) {
    a2 = b2 = 0;
    return;
  }
  a2 = std::max(0L, static_cast<long>(std::floor((lo2 - s.box.lo[1]) / h - 0.5)));
  b2 = std::min(n - 1, static_cast<long>(std::ceil((hi2 - s.box.lo[1]) / h - 0.5)));
}

inline RegionPoints collect(const Region& K, const GridSpec& s, const std::vector<std::uint8_t>& ok) {
  RegionPoints rp;
  long a1, b1, a2, b2;
  region_bounds(K, s, a1, b1, a2, b2);
  for (long i2 = a2; i2 <= b2; ++i2)
    for (long i1 = a1; i1 <= b1; ++i1) {
      const Point x = s.point(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2));
      if (!region_contains(K, x, s.d)) continue;
      const std::size_t idx = s.index(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2));
      if (!ok[idx]) continue;
      rp.i1.push_back(i1);
      rp.i2.push_back(i2);
      rp.idx.push_back(idx);
    }
  return rp;
}

}  // namespace detail

/// Hoelder semi-norm sum_{|nu|=ell} sup |D^nu g(x) - D^nu g(y)| / |x-y|^alpha over grid points in K.
///
/// Up to 512 points: all pairs. Above: every point paired with its neighbours at
/// dyadic offsets 1, 2, 4, ... along the axes and diagonals, plus 4096 random pairs
/// drawn with the given seed.
class HolderEvaluator {
 public:
  HolderEvaluator(const GridFunction& g, int ell) : g_(&g), fields_(g, ell) {}

  const DerivativeFields& fields() const { return fields_; }

  double evaluate(const Region& K, double alpha, std::uint64_t seed = kDefaultPairSeed) const {
    require(alpha > 0 && alpha <= 1, "Hoelder exponent must lie in (0, 1]");
    const GridSpec& s = fields_.spec();
    const double h = s.h();
    require(detail::region_width(K) >= 8 * h * (1 - 1e-12), "region is not resolved by the grid (need >= 8 points across)");
    if (const Ball* b = std::get_if<Ball>(&K))
      require(g_->domain().signed_distance(b->center) >= b->radius * (1 - 1e-9), "ball must lie in the domain");
    const detail::RegionPoints rp = detail::collect(K, s, fields_.valid_mask());
    const std::size_t np = rp.idx.size();
    if (np < 2) return 0.0;
    double total = 0;
    for (std::size_t q = 0; q < fields_.count(); ++q) {
      const std::vector<double>& F = fields_.field(q);
      double best = 0;
      auto pair = [&](std::size_t a, std::size_t b) {
        const double dx = static_cast<double>(rp.i1[a] - rp.i1[b]) * h;
        const double dy = static_cast<double>(rp.i2[a] - rp.i2[b]) * h;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist == 0) return;
        const double v = std::fabs(F[rp.idx[a]] - F[rp.idx[b]]) / std::pow(dist, alpha);
        best = std::max(best, v);
      };
      if (np <= 512) {
        for (std::size_t a = 0; a < np; ++a)
          for (std::size_t b = a + 1; b < np; ++b) pair(a, b);
      } else {
        // lookup from grid index to region-local index
        long a1, b1, a2, b2;
        detail::region_bounds(K, s, a1, b1, a2, b2);
        const long w = b1 - a1 + 1, ht = b2 - a2 + 1;
        std::vector<long> local(static_cast<std::size_t>(w * ht), -1);
        for (std::size_t a = 0; a < np; ++a)
          local[static_cast<std::size_t>((rp.i2[a] - a2) * w + (rp.i1[a] - a1))] = static_cast<long>(a);
        const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
        const int ndir = s.d == 1 ? 1 : 4;
        for (std::size_t a = 0; a < np; ++a)
          for (int dd = 0; dd < ndir; ++dd)
            for (long step = 1; step < std::max(w, ht); step *= 2) {
              const long j1 = rp.i1[a] + step * dirs[dd][0] - a1, j2 = rp.i2[a] + step * dirs[dd][1] - a2;
              if (j1 < 0 || j1 >= w || j2 < 0 || j2 >= ht) break;
              const long b = local[static_cast<std::size_t>(j2 * w + j1)];
              if (b >= 0) pair(a, static_cast<std::size_t>(b));
            }
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, np - 1);
        for (int r = 0; r < 4096; ++r) pair(pick(rng), pick(rng));
      }
      total += best;
    }
    return total;
  }

 private:
  const GridFunction* g_;
  DerivativeFields fields_;
};

inline double hoelder_seminorm(const GridFunction& g, const Region& K, const HolderParams& prm,
                               std::uint64_t seed = kDefaultPairSeed) {
  return HolderEvaluator(g, prm.ell).evaluate(K, prm.alpha, seed);
}

struct WeightedHolderResult {
  double value = 0;
  Ball argmax;
  std::size_t balls = 0;
  std::uint64_t seed = kDefaultPairSeed;
};

/// sup over the ball family K(c) of delta_K^gamma |g|_{C^{ell,alpha}(K)}.
/// Ball radii side*2^-j for j in [jmin, jmax]; jmax defaults to J-2, the finest
/// level with 8 grid points across a ball.
inline WeightedHolderResult weighted_hoelder_seminorm(const GridFunction& g, const DomainSpec& dom,
                                                      const HolderParams& prm, double c, int jmin = 1, int jmax = -1,
                                                      std::uint64_t seed = kDefaultPairSeed) {
  require(prm.gamma >= 0, "weight exponent must be non-negative");
  if (jmax < 0) jmax = g.spec().J - 2;
  const std::vector<Ball> family = ball_family(dom, c, jmin, jmax);
  if (family.empty()) throw PreconditionError("ball family is empty for this domain and level range");
  const HolderEvaluator ev(g, prm.ell);
  WeightedHolderResult r;
  r.seed = seed;
  for (const Ball& b : family) {
    if (2 * b.radius < 8 * g.spec().h() * (1 - 1e-12)) continue;
    const double v = std::pow(b.delta, prm.gamma) * ev.evaluate(b, prm.alpha, seed);
    ++r.balls;
    if (v > r.value) {
      r.value = v;
      r.argmax = b;
    }
  }
  if (r.balls == 0) throw PreconditionError("no ball of the family is resolved by the grid");
  return r;
}

// ---------------------------------------------------------------------------
// moduli of smoothness

/// Direction set: the axes and, in d = 2, both diagonals (opposite directions
/// give the same norms). `all_directions` adds the rays (1,2),(2,1),(1,-2),(2,-1).
inline std::vector<std::array<int, 2>> modulus_directions(int d, bool all_directions = false) {
  if (d == 1) return {{1, 0}};
  std::vector<std::array<int, 2>> v{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  if (all_directions)
    for (auto dd : std::vector<std::array<int, 2>>{{1, 2}, {2, 1}, {1, -2}, {2, -1}}) v.push_back(dd);
  return v;
}

/// ||Delta_h^r g||_{L_p} over points whose whole stencil lies in the domain,
/// for one lattice step h = k * h_grid * dir.
inline double difference_norm(const GridFunction& g, int r, std::array<int, 2> dir, long k, double p) {
  const GridSpec& s = g.spec();
  const long n = static_cast<long>(s.n());
  const long n2 = s.d == 1 ? 1 : n;
  std::vector<double> binom(static_cast<std::size_t>(r + 1));
  binom[0] = 1;
  for (int i = 1; i <= r; ++i) binom[static_cast<std::size_t>(i)] = binom[static_cast<std::size_t>(i - 1)] * (r - i + 1) / i;
  const long s1 = dir[0] * k, s2 = dir[1] * k;
  double acc = 0;
  for (long i2 = 0; i2 < n2; ++i2) {
    const long e2 = i2 + r * s2;
    if (e2 < 0 || e2 >= n2) continue;
    for (long i1 = 0; i1 < n; ++i1) {
      const long e1 = i1 + r * s1;
      if (e1 < 0 || e1 >= n) continue;
      double v = 0;
      bool ok = true;
      for (int i = 0; i <= r; ++i) {
        const std::size_t idx = s.index(static_cast<std::size_t>(i1 + i * s1), static_cast<std::size_t>(i2 + i * s2));
        if (!g.mask()[idx]) {
          ok = false;
          break;
        }
        v += (((r - i) % 2) ? -1.0 : 1.0) * binom[static_cast<std::size_t>(i)] * g[idx];
      }
      if (!ok) continue;
      if (std::isinf(p))
        acc = std::max(acc, std::fabs(v));
      else if (v != 0.0)
        acc += std::pow(std::fabs(v), p);
    }
  }
  return std::isinf(p) ? acc : std::pow(acc * s.cell_volume(), 1.0 / p);
}

/// Modulus as a function of the step length: entry i holds the max over
/// directions of the difference norm for steps of length <= lengths[i].
struct ModulusProfile {
  std::vector<double> lengths;  // physical |h|, ascending
  std::vector<double> values;   // running max, so non-decreasing

  double at(double t) const {
    double v = 0;
    for (std::size_t i = 0; i < lengths.size() && lengths[i] <= t * (1 + 1e-12); ++i) v = values[i];
    return v;
  }
};

inline ModulusProfile modulus_profile(const GridFunction& g, int r, double t_max, double p, bool all_directions = false) {
  require(r >= 1, "difference order must be at least 1");
  require(p > 0, "integrability must be positive");
  const GridSpec& s = g.spec();
  const double h = s.h();
  require(t_max >= h * (1 - 1e-12), "step t must be at least the grid step");
  struct Step {
    double len;
    std::array<int, 2> dir;
    long k;
  };
  std::vector<Step> steps;
  for (auto dir : modulus_directions(s.d, all_directions)) {
    const double unit = h * std::hypot(dir[0], dir[1]);
    for (long k = 1; k * unit <= t_max * (1 + 1e-12) && k * std::max(std::abs(dir[0]), std::abs(dir[1])) * r < static_cast<long>(s.n()); ++k)
      steps.push_back({k * unit, dir, k});
  }
  std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.len < b.len; });
  ModulusProfile prof;
  double run = 0;
  for (const Step& st : steps) {
    run = std::max(run, difference_norm(g, r, st.dir, st.k, p));
    if (!prof.lengths.empty() && prof.lengths.back() == st.len)
      prof.values.back() = run;
    else {
      prof.lengths.push_back(st.len);
      prof.values.push_back(run);
    }
  }
  return prof;
}

/// omega_r(g, t)_p: sup over lattice steps |h| <= t in the direction set.
inline double modulus_of_smoothness(const GridFunction& g, int r, double t, double p, bool all_directions = false) {
  require(t >= g.spec().h() * (1 - 1e-12), "step t is smaller than the grid step");
  return modulus_profile(g, r, t, p, all_directions).at(t);
}

/// [sum_j (2^{js} omega_r(g, 2^-j)_p)^q]^{1/q} for j = 0..J-r with 2^-j >= h; sup when q = inf.
inline double besov_seminorm_modulus(const GridFunction& g, double s, double p, double q, int r) {
  require(s > 0, "smoothness must be positive");
  require(r >= static_cast<int>(std::floor(s)) + 1, "difference order r must be at least floor(s)+1");
  require(q > 0, "fine index must be positive");
  const int J = g.spec().J;
  const double h = g.spec().h();
  const ModulusProfile prof = modulus_profile(g, r, std::max(1.0, h), p);
  double acc = 0;
  for (int j = 0; j <= J - r; ++j) {
    const double t = std::ldexp(1.0, -j);
    if (t < h * (1 - 1e-12)) continue;
    const double v = std::pow(2.0, j * s) * prof.at(t);
    if (std::isinf(q))
      acc = std::max(acc, v);
    else
      acc += std::pow(v, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

/// Gagliardo semi-norm by a double midpoint sum over grid points (diagonal excluded).
inline double sobolev_fractional_seminorm(const GridFunction& g, double s, double p) {
  require(s > 0 && s < 2 && s != 1.0, "fractional smoothness must lie in (0,1) or (1,2)");
  require(p >= 1 && std::isfinite(p), "integrability must lie in [1, inf)");
  require(g.spec().size() <= 64 * 64, "grid too large for the O(N^2) double sum (limit 64^2 points)");
  const int ell = static_cast<int>(std::floor(s));
  const double beta = s - ell;
  const DerivativeFields df(g, ell);
  const GridSpec& sp = g.spec();
  std::vector<std::size_t> pts;
  for (std::size_t i = 0; i < sp.size(); ++i)
    if (df.valid(i)) pts.push_back(i);
  const std::size_t n = sp.n();
  const double h = sp.h();
  const double expo = sp.d + beta * p;
  double acc = 0;
  for (std::size_t q = 0; q < df.count(); ++q) {
    const auto& F = df.field(q);
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const double dx = (static_cast<double>(pts[a] % n) - static_cast<double>(pts[b] % n)) * h;
        const double dy = (static_cast<double>(pts[a] / n) - static_cast<double>(pts[b] / n)) * h;
        const double diff = std::fabs(F[pts[a]] - F[pts[b]]);
        if (diff == 0) continue;
        acc += 2.0 * std::pow(diff, p) / std::pow(std::sqrt(dx * dx + dy * dy), expo);
      }
  }
  return std::pow(acc * sp.cell_volume() * sp.cell_volume(), 1.0 / p);
}

// ---------------------------------------------------------------------------
// local polynomial approximation

/// inf over polynomials P of total degree <= k of ||g - P||_{L_p(Q)} over grid points in Q and
/// the domain. p = 2 by least squares, p = inf by a discrete Chebyshev LP.
inline double whitney_error(const GridFunction& g, const Cube& Q, int k, double p) {
  require(k >= 0 && k <= 4, "polynomial degree must lie in [0, 4]");
  require(p == 2.0 || std::isinf(p), "Whitney error is provided for p = 2 and p = inf");
  const GridSpec& s = g.spec();
  require(Q.d == s.d, "cube and grid dimensions differ");
  const detail::RegionPoints rp = detail::collect(Region(Q), s, g.mask());
  require(Q.side >= 4 * s.h() * (1 - 1e-12), "cube is not resolved by the grid");
  std::vector<std::array<int, 2>> mono;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= (s.d == 2 ? k - a : 0); ++b) mono.push_back({a, b});
  const std::size_t N = rp.idx.size(), M = mono.size();
  if (N < M + (std::isinf(p) ? 1 : 0)) throw PreconditionError("too few grid points in the cube for the polynomial fit");
  const double c1 = Q.lo[0] + Q.side / 2, c2 = Q.lo[1] + Q.side / 2, sc = 2.0 / Q.side;
  Eigen::MatrixXd V(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
  Eigen::VectorXd y(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) {
    const Point x = s.point(static_cast<std::size_t>(rp.i1[i]), static_cast<std::size_t>(rp.i2[i]));
    const double u = (x[0] - c1) * sc, v = s.d == 2 ? (x[1] - c2) * sc : 0.0;
    for (std::size_t m = 0; m < M; ++m)
      V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = std::pow(u, mono[m][0]) * std::pow(v, mono[m][1]);
    y(static_cast<Eigen::Index>(i)) = g[rp.idx[i]];
  }
  if (p == 2.0) {
    const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd res = y - V * coef;
    return std::sqrt(res.squaredNorm() * s.cell_volume());
  }
  // dual of min_a max_i |y_i - (V a)_i|:
  //   max y^T (u - v)  s.t.  V^T (u - v) = 0,  1^T (u + v) = 1,  u, v >= 0
  const Eigen::Index n = static_cast<Eigen::Index>(N), mm = static_cast<Eigen::Index>(M);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(mm + 1, 2 * n);
  A.block(0, 0, mm, n) = V.transpose();
  A.block(0, n, mm, n) = -V.transpose();
  A.row(mm).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mm + 1);
  b(mm) = 1.0;
  Eigen::VectorXd c(2 * n);
  c.head(n) = y;
  c.tail(n) = -y;
  const LpResult lp = simplex_max(A, b, c);
  if (lp.status != LpResult::Status::optimal) throw std::runtime_error("Chebyshev fit LP did not converge");
  return std::max(0.0, lp.value);
}

}  // namespace besov
