#pragma once

// Invariant suites shared by the command-line tool and the acceptance run.
// Every check carries its measured value and the limit it was held to.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "besov/approx.hpp"
#include "besov/besovwav.hpp"
#include "besov/bounds.hpp"
#include "besov/models.hpp"
#include "besov/seminorms.hpp"
#include "besov/wavelet.hpp"

namespace besov {

struct Check {
  std::string name;
  bool passed = false;
  bool hard = true;
  double value = std::numeric_limits<double>::quiet_NaN();
  double limit = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0;

  bool passed() const {
    for (const auto& c : checks)
      if (c.hard && !c.passed) return false;
    return true;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  void add(std::string name, bool ok, double value, double limit, std::string detail = {}, bool hard = true) {
    checks.push_back({std::move(name), ok, hard, value, limit, std::move(detail)});
  }
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json j{{"name", c.name}, {"passed", c.passed}, {"hard", c.hard}, {"detail", c.detail}};
      j["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
      j["limit"] = std::isfinite(c.limit) ? nlohmann::json(c.limit) : nlohmann::json(nullptr);
      arr.push_back(std::move(j));
    }
    return {{"suite", suite}, {"passed", passed()}, {"checks", arr}};
  }
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// All table formulas are affine in u = 1/q, so two exact samples on one side of
// a breakpoint give the one-sided limit exactly: f(u_b) = 2 f(u_b + d) - f(u_b + 2d).
inline std::optional<Rational> one_sided_limit(const std::function<BoundResult(Exponent)>& f, Rational u_b,
                                               Rational du) {
  const auto q_at = [](Rational u) { return Exponent(Rational(1) / u); };
  const BoundResult a = f(q_at(u_b + du)), b = f(q_at(u_b + du + du));
  if (!a || !b || !a.exact || !b.exact || a.line != b.line) return std::nullopt;
  return Rational(2) * *a.exact - *b.exact;
}

struct Continuity {
  double worst = 0;
  int points = 0;
  std::string where;
};

inline void continuity_at(Continuity& acc, const std::function<BoundResult(Exponent)>& f, Rational q_b, const std::string& label) {
  const Rational u_b = Rational(1) / q_b;
  const Rational du(1, 1000000);
  const auto left = one_sided_limit(f, u_b, du);    // q slightly below q_b
  const auto right = one_sided_limit(f, u_b, -du);  // q slightly above q_b
  const BoundResult at = f(Exponent(q_b));
  if (!left || !right || !at || !at.exact) {
    acc.worst = std::numeric_limits<double>::infinity();
    acc.where = label + " undefined near breakpoint";
    return;
  }
  const double d = std::max(std::fabs((*left - *right).to_double()), std::fabs((*left - *at.exact).to_double()));
  if (d > acc.worst) {
    acc.worst = d;
    acc.where = label;
  }
  ++acc.points;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// tables

inline SuiteReport verify_tables(std::uint64_t seed = kDefaultPairSeed) {
  detail::Stopwatch sw;
  SuiteReport rep;
  rep.suite = "tables";
  const double tol = 1e-12;

  {
    // closed forms
    bool ok = true;
    std::string bad;
    auto expect = [&](const BoundResult& r, Rational v, const char* what) {
      if (!r.valid || !r.exact || *r.exact != v) {
        ok = false;
        bad += std::string(what) + " ";
      }
    };
    expect(s_star(Rational(2)), Rational(3, 2), "s*(2)");
    expect(s_star(Rational(4)), Rational(5, 4), "s*(4)");
    expect(sigma_bar_lipschitz(Rational(2), Exponent(3)), Rational(3, 2), "lip(2,3)");
    expect(sigma_bar_polygonal(Rational(6, 5), Exponent(8)), Rational(7, 4), "poly(1.2,8)");
    expect(sigma_bar_polygonal(Rational(3), Exponent::infinity()), Rational(3, 2), "poly(3,inf)");
    const double ph = p_harmonic_smoothness(2.0).value;
    if (std::fabs(ph - 2.0) > tol) {
      ok = false;
      bad += "p-harmonic(2) ";
    }
    rep.add("closed-form values", ok, ok ? 0.0 : 1.0, 0.0, bad);
  }

  {
    // sigma* branches meet at gamma = (ell+alpha)/d + 1/p
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const int ell = static_cast<int>(U(rng) * 3);
      const double alpha = 1e-3 + U(rng) * (1 - 1e-3);
      const int d = 2 + static_cast<int>(U(rng) * 3);
      const double p = 1.01 + U(rng) * 9;
      const double gb = (ell + alpha) / d + 1.0 / p;
      const BoundResult at = sigma_star(ell, alpha, gb, d, p);
      const BoundResult below = sigma_star(ell, alpha, std::nextafter(gb, 0.0), d, p);
      const double branch2 = static_cast<double>(d) / (d - 1) * (ell + alpha + 1.0 / p - gb);
      worst = std::max({worst, std::fabs(at.value - (ell + alpha)), std::fabs(below.value - (ell + alpha)),
                        std::fabs(branch2 - (ell + alpha))});
    }
    rep.add("sigma* branch agreement (100 draws)", worst <= tol, worst, tol);
  }

  {
    detail::Continuity lip4, poly4, lipthr;
    for (long k = 81; k <= 120; ++k) {  // p = k/60 in (4/3, 2]
      const Rational p(k, 60);
      detail::continuity_at(lip4, [&](Exponent q) { return sigma_bar_lipschitz(p, q); }, Rational(4),
                            "lipschitz p=" + p.str());
      detail::continuity_at(poly4, [&](Exponent q) { return sigma_bar_polygonal(p, q); }, Rational(4),
                            "polygonal p=" + p.str());
      if (p < Rational(2)) {
        const Rational thr = Rational(1) / (Rational(1) / p - Rational(1, 2));
        detail::continuity_at(lipthr, [&](Exponent q) { return sigma_bar_lipschitz(p, q); }, thr,
                              "lipschitz p=" + p.str() + " q=" + thr.str());
      }
    }
    rep.add("lipschitz continuous at q=4, p in (4/3,2]", lip4.worst <= tol, lip4.worst, tol, lip4.where);
    rep.add("polygonal continuous at q=4, p in (4/3,2]", poly4.worst <= tol, poly4.worst, tol, poly4.where);
    rep.add("lipschitz continuous at q=(1/p-1/2)^-1, p in (4/3,2)", lipthr.worst <= tol, lipthr.worst, tol,
            lipthr.where);
  }

  {
    detail::Continuity lip, poly;
    for (long k = 1; k <= 60; ++k) {  // p = 2 + k/20
      const Rational p = Rational(2) + Rational(k, 20);
      detail::continuity_at(lip, [&](Exponent q) { return sigma_bar_lipschitz(p, q); }, Rational(2) * p,
                            "lipschitz p=" + p.str());
      detail::continuity_at(poly, [&](Exponent q) { return sigma_bar_polygonal(p, q); }, Rational(2) * p,
                            "polygonal p=" + p.str());
    }
    rep.add("lipschitz continuous at q=2p, p>2", lip.worst <= tol, lip.worst, tol, lip.where);
    rep.add("polygonal continuous at q=2p, p>2", poly.worst <= tol, poly.worst, tol, poly.where);
  }

  {
    // polygonal >= lipschitz; strictly where the polygonal theorem gains
    int compared = 0, strict_expected = 0;
    double worst_dom = 0, worst_strict = std::numeric_limits<double>::infinity();
    std::string where_dom, where_strict;
    for (const Rational& p : rational_range(Rational(21, 20), Rational(5), Rational(1, 60))) {
      std::vector<Exponent> qs{Exponent::infinity(), conjugate(p), Exponent(3), Exponent(4), Exponent(5),
                               Exponent(Rational(2) * p), Exponent(8), Exponent(20), Exponent(100)};
      for (const Exponent& q : qs) {
        const BoundResult a = sigma_bar_lipschitz(p, q), b = sigma_bar_polygonal(p, q);
        if (!a || !b) continue;
        ++compared;
        const double gap = b.value - a.value;
        if (-gap > worst_dom) {
          worst_dom = -gap;
          where_dom = "p=" + p.str() + " q=" + q.str();
        }
        const Rational four_thirds(4, 3);
        bool strict = p < four_thirds || (p == four_thirds && q > Exponent(4));
        if (p > four_thirds && p < Rational(2)) strict = q > detail::lipschitz_q_threshold(p);
        if (strict) {
          ++strict_expected;
          if (gap < worst_strict) {
            worst_strict = gap;
            where_strict = "p=" + p.str() + " q=" + q.str();
          }
        }
      }
    }
    rep.add("polygonal >= lipschitz", worst_dom <= tol && compared > 100, worst_dom, tol,
            fmt::format("{} pairs compared; worst at {}", compared, where_dom.empty() ? "-" : where_dom));
    rep.add("polygonal > lipschitz where the polygonal bound gains", worst_strict > tol && strict_expected > 10,
            worst_strict, tol, fmt::format("{} pairs; smallest gain at {}", strict_expected, where_strict));
  }
  rep.seconds = sw.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// wavelet core

inline SuiteReport verify_wavelet_core(int J = 9, std::uint64_t seed = kDefaultPairSeed) {
  detail::Stopwatch sw;
  SuiteReport rep;
  rep.suite = "wavelet-core";
  const double tol = 1e-10;
  const DomainSpec dom = unit_square();
  const GridSpec spec = grid_for(dom, J);
  const int j0 = 2;

  for (int m = 1; m <= 3; ++m) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(m));
    std::normal_distribution<double> N;
    std::vector<double> v(spec.size());
    for (double& x : v) x = N(rng);
    const GridFunction g(spec, dom, v);
    const WaveletCoeffs c = analyze(g, m, j0, 2.0);
    const std::vector<double> back = synthesize_samples(c);
    double err = 0, vmax = 0;
    for (std::size_t i = 0; i < back.size(); ++i) {
      err = std::max(err, std::fabs(back[i] - g[i]));
      vmax = std::max(vmax, std::fabs(g[i]));
    }
    rep.add(fmt::format("perfect reconstruction m={}", m), err / vmax <= tol, err / vmax, tol);

    KahanSum energy;
    for (double x : c.coarse.types[0]) energy += x * x;
    c.for_each_detail([&](int j, int, long, long, double x) {
      const double l2 = x / c.storage_factor(j);
      energy += l2 * l2;
    });
    const double ref = std::pow(g.norm(2.0), 2);
    const double pe = std::fabs(energy.value() - ref) / ref;
    rep.add(fmt::format("Parseval m={}", m), pe <= tol, pe, tol);

    // degree m-1 polynomial: details supported inside the cube vanish
    const GridFunction poly = GridFunction::sample(spec, dom, [m](const Point& x) {
      double s = 0.3;
      for (int a = 0; a < m; ++a)
        for (int b = 0; a + b < m; ++b) s += std::pow(x[0] - 0.4, a) * std::pow(x[1] - 0.6, b) / (1 + a + 2 * b);
      return s;
    });
    const WaveletCoeffs cp = analyze(poly, m, j0, 2.0);
    const long n = static_cast<long>(spec.n());
    const int L = 2 * m;
    double worst = 0;
    std::size_t inside = 0;
    cp.for_each_detail([&](int j, int, long k1, long k2, double x) {
      const long s = 1L << (J - j);
      auto in = [&](long k) { return s * k >= 0 && s * (k + L - 1) <= n - 1; };
      if (!in(k1) || !in(k2)) return;
      ++inside;
      worst = std::max(worst, std::fabs(x / cp.storage_factor(j)));
    });
    rep.add(fmt::format("vanishing moments m={}", m), worst <= tol && inside > 0, worst, tol,
            fmt::format("{} details away from padding", inside));
  }

  // a single p'-paired wavelet: synthesize, re-analyze, and measure it on the adaptivity scale
  for (int m : {1, 2, 3}) {
    for (double p : {2.0, 4.0}) {
      WaveletCoeffs c = empty_coeffs(spec, dom, m, j0, p);
      const int j = 5;
      const long k = c.level(j).lo + c.level(j).count / 2;
      c.at(j, 3, k, k) = 1.0;
      const WaveletCoeffs back = analyze(GridFunction(spec, dom, synthesize_samples(c)), m, j0, p);
      for (double sigma : {0.5, 1.0, 1.5}) {
        if (sigma >= m) continue;
        const double q = adaptivity_quasinorm(back, sigma, p).total;
        rep.add(fmt::format("single wavelet quasi-norm m={} p={} sigma={}", m, p, sigma), std::fabs(q - 1) <= tol,
                std::fabs(q - 1), tol);
      }
    }
  }
  rep.seconds = sw.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// seminorm oracles

struct OracleCase {
  std::string name;
  std::function<double(const Point&)> f;
  int ell;
  double alpha;
};

inline std::vector<OracleCase> oracle_suite() {
  return {
      {"x1^2", [](const Point& x) { return x[0] * x[0]; }, 1, 1.0},
      {"x1*x2", [](const Point& x) { return x[0] * x[1]; }, 0, 1.0},
      {"sin(3x1+2x2)", [](const Point& x) { return std::sin(3 * x[0] + 2 * x[1]); }, 1, 1.0},
      {"sin(3x1+2x2) a=1/2", [](const Point& x) { return std::sin(3 * x[0] + 2 * x[1]); }, 1, 0.5},
      {"|x-x0|^1.5", [](const Point& x) { return std::pow(std::hypot(x[0] - 0.3, x[1] - 0.4), 1.5); }, 1, 0.5},
      {"|x-x0|^0.6", [](const Point& x) { return std::pow(std::hypot(x[0] - 0.3, x[1] - 0.4), 0.6); }, 0, 0.6},
      {"|x1-1/2|^0.7", [](const Point& x) { return std::pow(std::fabs(x[0] - 0.5), 0.7); }, 0, 0.7},
      {"bump", [](const Point& x) { return smooth_bump_value(Ball{{0.5, 0.5}, 0.4, 0}, x); }, 1, 1.0},
  };
}

/// Largest ratio |g|_{B^{ell+alpha}_inf(L_inf)(Q)} / |g|_{C^{ell,alpha}(Q)} over the oracle suite.
struct HolderBesovComparison {
  double max_ratio = 0;
  std::string argmax;
  int cases = 0;
};

inline HolderBesovComparison compare_hoelder_besov(int J, std::uint64_t seed) {
  HolderBesovComparison out;
  const std::vector<Cube> cubes{{2, {0, 0}, 1}, {2, {0.25, 0.25}, 0.5}, {2, {0.1, 0.3}, 0.25}};
  for (const auto& oc : oracle_suite())
    for (const Cube& Q : cubes) {
      const DomainSpec dom = cube_domain(2, Q.lo, Q.side);
      const GridFunction g = GridFunction::sample(grid_for(dom, J), dom, oc.f);
      const double s = oc.ell + oc.alpha;
      const double B = besov_seminorm_modulus(g, s, INFINITY, INFINITY, static_cast<int>(std::floor(s)) + 1);
      const double H = hoelder_seminorm(g, Q, {oc.ell, oc.alpha, 0}, seed);
      ++out.cases;
      if (H <= 0) continue;
      if (B / H > out.max_ratio) {
        out.max_ratio = B / H;
        out.argmax = fmt::format("{} on cube side {}", oc.name, Q.side);
      }
    }
  return out;
}

inline constexpr double kHolderBesovConstant = 2.0;

inline SuiteReport verify_seminorm_oracles(std::uint64_t seed = kDefaultPairSeed) {
  detail::Stopwatch sw;
  SuiteReport rep;
  rep.suite = "seminorm-oracles";

  {
    const DomainSpec I = interval(0, 1);
    const GridFunction g = GridFunction::sample(grid_for(I, 9), I, [](const Point& x) { return x[0] * x[0]; });
    const double w = whitney_error(g, Cube{1, {0, 0}, 1}, 1, INFINITY);
    const double rel = std::fabs(w - 0.125) / 0.125;
    rep.add("whitney x^2 on [0,1], degree 1, sup norm = 1/8", rel <= 0.01, rel, 0.01, fmt::format("value {:.17g}", w));
  }
  {
    double worst = 0;
    for (const DomainSpec& dom : {unit_square(), l_shape()}) {
      const GridFunction g =
          GridFunction::sample(grid_for(dom, 7), dom, [](const Point& x) { return 0.7 - 2 * x[0] + 3 * x[1]; });
      for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
        for (double t : {0.125, 0.25, 0.5}) worst = std::max(worst, modulus_of_smoothness(g, 2, t, p, true));
    }
    rep.add("second modulus of a linear field vanishes", worst <= 1e-12, worst, 1e-12);
  }
  {
    const HolderBesovComparison cmp = compare_hoelder_besov(7, seed);
    rep.add("Besov B^{l+a}_inf(L_inf) <= C Hoelder C^{l,a} on cubes (C = 2)", cmp.max_ratio <= kHolderBesovConstant,
            cmp.max_ratio, kHolderBesovConstant, fmt::format("{} cases; largest ratio for {}", cmp.cases, cmp.argmax));
  }
  rep.seconds = sw.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// embedding ratios

/// Parameters of the numerical embedding check for one integrability p.
struct EmbeddingParams {
  double p = 2;
  double eps = 1e-3;
  int ell = 1;
  double alpha = 0;  // alpha*_inf, materialized
  double t = 0;      // gradient integrability 2p - eps
  double gamma = 0;  // alpha + 2/t
  double s = 0;      // s*(p) - eps
  double sigma = 0;  // 0.9 * min(sigma*, d/(d-1) s)
  int line = 0;      // which term of the minimum was active

  nlohmann::json to_json() const {
    return {{"p", p},   {"eps", eps}, {"ell", ell},     {"alpha", alpha},
            {"t", t},   {"gamma", gamma}, {"s", s}, {"sigma", sigma}, {"bound_line", line}};
  }
};

inline EmbeddingParams embedding_params(double p, double eps = 1e-3) {
  EmbeddingParams e;
  e.p = p;
  e.eps = eps;
  const Rational pr = Rational::approximate(p);
  e.alpha = alpha_star(pr, Exponent::infinity()).materialize(eps);
  e.t = 2 * p - eps;
  e.gamma = gamma_admissible(pr, Exponent::infinity(), GammaVariant::gradient, e.t).gamma_for(e.alpha);
  e.s = s_star(pr).value - eps;
  const BoundResult b = embedding_bound(e.s, p, 2, e.ell, e.alpha, e.gamma);
  if (!b) throw PreconditionError("embedding bound undefined: " + b.failed);
  e.sigma = 0.9 * b.value;
  e.line = b.line;
  return e;
}

struct EmbeddingRow {
  std::string name;
  int J = 0;
  double adaptivity = 0;
  double besov = 0;
  double hoelder = 0;
  double ratio = 0;
  nlohmann::json to_json() const {
    return {{"function", name}, {"J", J}, {"adaptivity", adaptivity}, {"besov", besov}, {"weighted_hoelder", hoelder},
            {"ratio", ratio}};
  }
};

inline EmbeddingRow embedding_ratio(const std::string& name, const GridFunction& g, const EmbeddingParams& e, int m = 3,
                                    int j0 = 2, double c = 2.0, std::uint64_t seed = kDefaultPairSeed) {
  const WaveletCoeffs coeffs = analyze(g, m, j0, e.p);
  EmbeddingRow r;
  r.name = name;
  r.J = g.spec().J;
  r.adaptivity = adaptivity_quasinorm(coeffs, e.sigma, e.p).total;
  r.besov = besov_quasinorm_wavelet(coeffs, e.s, e.p).total;
  r.hoelder = weighted_hoelder_seminorm(g, g.domain(), {e.ell, e.alpha, e.gamma}, c, 1, -1, seed).value;
  r.ratio = r.adaptivity / std::max(r.besov, r.hoelder);
  return r;
}

struct EmbeddingCase {
  std::string name;
  double p;
  std::function<GridFunction(int)> make;
};

inline std::vector<EmbeddingCase> embedding_cases() {
  return {{"smooth_bump", 2.0, [](int J) { return smooth_bump(J); }},
          {"flat_singularity(4)", 4.0, [](int J) { return flat_singularity(4.0, J); }},
          {"corner_singularity(3pi/2)", 2.0, [](int J) { return corner_singularity(1.5 * std::numbers::pi, J); }}};
}

inline SuiteReport verify_embedding(int J_lo = 8, int J_hi = 9, std::uint64_t seed = kDefaultPairSeed,
                                    std::vector<EmbeddingRow>* rows = nullptr) {
  detail::Stopwatch sw;
  SuiteReport rep;
  rep.suite = "embedding";
  for (const auto& ec : embedding_cases()) {
    const EmbeddingParams e = embedding_params(ec.p);
    const EmbeddingRow lo = embedding_ratio(ec.name, ec.make(J_lo), e, 3, 2, 2.0, seed);
    const EmbeddingRow hi = embedding_ratio(ec.name, ec.make(J_hi), e, 3, 2, 2.0, seed);
    if (rows) {
      rows->push_back(lo);
      rows->push_back(hi);
    }
    const double band = std::max(lo.ratio, hi.ratio) / std::min(lo.ratio, hi.ratio);
    rep.add(fmt::format("ratio band J={}..{} for {}", J_lo, J_hi, ec.name), std::isfinite(band) && band < 4.0, band,
            4.0,
            fmt::format("sigma={:.6g} s={:.6g} alpha={:.6g} gamma={:.6g}; ratios {:.6g} -> {:.6g}", e.sigma, e.s,
                        e.alpha, e.gamma, lo.ratio, hi.ratio));
  }
  rep.seconds = sw.seconds();
  return rep;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"tables", "wavelet-core", "seminorm-oracles", "embedding"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed = kDefaultPairSeed) {
  if (name == "tables") return verify_tables(seed);
  if (name == "wavelet-core") return verify_wavelet_core(9, seed);
  if (name == "seminorm-oracles") return verify_seminorm_oracles(seed);
  if (name == "embedding") return verify_embedding(8, 9, seed);
  throw PreconditionError("unknown suite '" + name + "' (expected tables, wavelet-core, seminorm-oracles or embedding)");
}

}  // namespace besov
