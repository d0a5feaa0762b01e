#pragma once

// Closed-form regularity exponents and the two-dimensional sigma-bar tables.
//
// Table lookups take p as a Rational and q as an Exponent so that cells such
// as q = 4 or p = 4/3 are classified exactly. The scalar formulas (embedding
// ceiling, generic bound) take doubles.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "besov/error.hpp"
#include "besov/rational.hpp"

namespace besov {

enum class DomainClass { lipschitz, polygonal };

inline const char* to_string(DomainClass c) { return c == DomainClass::lipschitz ? "lipschitz" : "polygonal"; }

inline DomainClass parse_domain_class(const std::string& s) {
  if (s == "lipschitz") return DomainClass::lipschitz;
  if (s == "polygonal") return DomainClass::polygonal;
  throw PreconditionError("unknown domain class '" + s + "' (expected lipschitz or polygonal)");
}

/// Value of a closed-form bound together with the case that produced it.
///
/// When `open` is set the bound is of the form "any number less than value";
/// materialize() turns it into a concrete number.
struct BoundResult {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::optional<Rational> exact;
  bool open = false;
  bool valid = false;
  int line = 0;            // table line, or formula case (1-based), 0 if none
  std::string branch;      // human readable case label
  std::string failed;      // violated condition when !valid
  bool conditional = false;  // rests on an unproven claim

  double materialize(double eps = 1e-3) const {
    if (!valid) throw PreconditionError("bound not available: " + failed);
    return open ? value - eps : value;
  }
  explicit operator bool() const { return valid; }

  static BoundResult invalid(std::string why) {
    BoundResult r;
    r.failed = std::move(why);
    r.branch = "invalid";
    return r;
  }
  static BoundResult of(Rational v, int line, std::string branch) {
    BoundResult r;
    r.value = v.to_double();
    r.exact = v;
    r.valid = true;
    r.line = line;
    r.branch = std::move(branch);
    return r;
  }
  static BoundResult of(double v, int line, std::string branch) {
    BoundResult r;
    r.value = v;
    r.valid = true;
    r.line = line;
    r.branch = std::move(branch);
    return r;
  }
};

/// Hoelder conjugate p' with 1/p + 1/p' = 1.
inline Exponent conjugate(Rational p) {
  require(p > Rational(1) || p == Rational(1), "conjugate exponent needs p >= 1");
  if (p == Rational(1)) return Exponent::infinity();
  return Exponent(p / (p - Rational(1)));
}

inline double conjugate(double p) { return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0); }

/// Lower smoothness limit for the wavelet characterization: d * max(1/p - 1, 0).
inline double sigma_p(int d, double p) {
  require(p > 0, "sigma_p needs p > 0");
  return d * std::max(1.0 / p - 1.0, 0.0);
}

/// Integrability on the adaptivity line: (sigma/d + 1/p)^-1.
inline double tau_from_sigma(double sigma, int d, double p) {
  require(sigma > 0, "tau needs sigma > 0");
  require(p > 1, "tau needs p > 1");
  require(d >= 1, "tau needs d >= 1");
  return 1.0 / (sigma / d + 1.0 / p);
}

/// Sobolev regularity ceiling for homogeneous Dirichlet problems.
inline BoundResult s_star(Rational p) {
  if (!(p > Rational(1))) return BoundResult::invalid("p > 1");
  if (p <= Rational(2)) return BoundResult::of(Rational(3, 2), 1, "p<=2");
  return BoundResult::of(Rational(1) + Rational(1) / p, 2, "p>2");
}
inline BoundResult s_star(double p) { return s_star(Rational::approximate(p)); }

struct ShiftPair {
  double t = 0;  // smoothness of the admissible right-hand side (negative)
  double s = 0;  // resulting Sobolev smoothness
};

/// Sobolev shift (data smoothness t -> solution smoothness s) for shift parameter theta.
inline ShiftPair savare_shift(double p, double theta) {
  require(p > 1 && std::isfinite(p), "shift needs 1 < p < inf");
  require(theta >= 0 && theta < 1, "shift needs theta in [0,1)");
  if (p <= 2) return {-1.0 + theta / 2.0, 1.0 + theta / 2.0};
  return {-1.0 + theta / conjugate(p), 1.0 + theta / p};
}

/// Local Hoelder exponent of the gradient for data in L_q.
inline BoundResult alpha_star(Rational p, Exponent q) {
  if (!(p > Rational(1))) return BoundResult::invalid("p > 1");
  if (!(q > Exponent(2))) return BoundResult::invalid("q > 2");
  const Rational base = Rational(1) - Rational(2) * q.reciprocal();
  const bool small = p <= Rational(2);
  BoundResult r = small ? BoundResult::of(base, 1, "p<=2") : BoundResult::of(base / (p - Rational(1)), 2, "p>2");
  if (q.is_infinite()) {
    r.open = true;
    r.branch += ",q=inf";
  }
  return r;
}
inline BoundResult alpha_star(double p, double q) { return alpha_star(Rational::approximate(p), Exponent::from_double(q)); }

/// Embedding ceiling for a function with Hoelder order ell+alpha and weight gamma.
inline BoundResult sigma_star(int ell, double alpha, double gamma, int d, double p) {
  if (d < 2) return BoundResult::invalid("d >= 2");
  if (!(p > 1 && std::isfinite(p))) return BoundResult::invalid("1 < p < inf");
  if (!(alpha > 0 && alpha <= 1)) return BoundResult::invalid("0 < alpha <= 1");
  if (ell < 0) return BoundResult::invalid("ell >= 0");
  const double smooth = ell + alpha;
  if (!(gamma > 0 && gamma < smooth + 1.0 / p)) return BoundResult::invalid("0 < gamma < ell+alpha+1/p");
  if (gamma < smooth / d + 1.0 / p) return BoundResult::of(smooth, 1, "gamma<(ell+alpha)/d+1/p");
  const double v = static_cast<double>(d) / (d - 1) * (smooth + 1.0 / p - gamma);
  return BoundResult::of(v, 2, "gamma>=(ell+alpha)/d+1/p");
}

/// Supremum of admissible adaptivity smoothness: min(sigma*, d/(d-1) s).
inline BoundResult embedding_bound(double s, double p, int d, int ell, double alpha, double gamma) {
  BoundResult ss = sigma_star(ell, alpha, gamma, d, p);
  if (!ss) return ss;
  if (!(s > 0)) return BoundResult::invalid("s > 0");
  const double sob = static_cast<double>(d) / (d - 1) * s;
  if (ss.value <= sob) {
    ss.branch = "sigma*:" + ss.branch;
    return ss;
  }
  BoundResult r = BoundResult::of(sob, 3, "d/(d-1)*s");
  return r;
}

/// Besov bound from Sobolev regularity s_bar plus weighted Hoelder data.
/// Returns an invalid result naming the failed condition when the hypotheses fail.
inline BoundResult generic_besov_bound(double s_bar, int ell, double alpha, double gamma, int d, double p) {
  if (!(s_bar >= ell && s_bar < ell + 1)) return BoundResult::invalid("s_bar in [ell, ell+1)");
  if (!(s_bar - ell < alpha)) return BoundResult::invalid("s_bar-ell < alpha");
  if (!(alpha <= 1)) return BoundResult::invalid("alpha <= 1");
  if (!(gamma < ell + alpha + 1.0 / p - static_cast<double>(d - 1) / d * s_bar))
    return BoundResult::invalid("gamma < ell+alpha+1/p-((d-1)/d)s_bar");
  return embedding_bound(s_bar, p, d, ell, alpha, gamma);
}

enum class GammaVariant { gradient, sobolev };

/// Weight threshold for weighted Hoelder membership of the gradient.
struct GammaThreshold {
  BoundResult alpha;    // Hoelder exponent the threshold refers to
  double offset = 0;    // gamma must exceed alpha + offset
  bool inclusive = false;  // true: gamma >= alpha+offset, false: strict
  std::string variant;

  /// Smallest admissible weight for a concrete alpha (strict thresholds get +eps).
  double gamma_for(double alpha_value, double eps = 1e-3) const {
    return alpha_value + offset + (inclusive ? 0.0 : eps);
  }
};

/// variant gradient: param is the gradient integrability t (> 2), gamma >= alpha + 2/t.
/// variant sobolev: param is s_bar (> max(2/p, 1)), gamma > alpha + max(0, 1 - s_bar + 2/p).
inline GammaThreshold gamma_admissible(Rational p, Exponent q, GammaVariant variant, double param) {
  GammaThreshold g;
  g.alpha = alpha_star(p, q);
  if (!g.alpha) throw PreconditionError("weight threshold: alpha* undefined (" + g.alpha.failed + ")");
  const double pd = p.to_double();
  if (variant == GammaVariant::gradient) {
    require(param > 2, "gradient variant needs t > 2");
    g.offset = 2.0 / param;
    g.inclusive = true;
    g.variant = "gradient";
  } else {
    require(param > std::max(2.0 / pd, 1.0), "sobolev variant needs s_bar > max(2/p, 1)");
    g.offset = std::max(0.0, 1.0 - param + 2.0 / pd);
    g.inclusive = false;
    g.variant = "sobolev";
  }
  return g;
}

namespace detail {

// (1/p - 1/2)^-1 for p <= 2, infinite at p = 2.
inline Exponent lipschitz_q_threshold(Rational p) {
  const Rational inv = Rational(1) / p - Rational(1, 2);
  if (inv == Rational(0)) return Exponent::infinity();
  return Exponent(Rational(1) / inv);
}

inline BoundResult table_preconditions(Rational p, Exponent q) {
  if (!(p > Rational(1))) return BoundResult::invalid("1 < p");
  if (!(q > Exponent(2))) return BoundResult::invalid("2 < q");
  if (q < conjugate(p)) return BoundResult::invalid("q >= p' = " + conjugate(p).str());
  BoundResult ok;
  ok.valid = true;
  return ok;
}

inline Rational two_minus_two_over_q(Exponent q) { return Rational(2) - Rational(2) * q.reciprocal(); }

}  // namespace detail

/// Besov regularity on the adaptivity scale for Lipschitz domains in the plane.
inline BoundResult sigma_bar_lipschitz(Rational p, Exponent q) {
  if (auto pre = detail::table_preconditions(p, q); !pre) return pre;
  const Rational four_thirds(4, 3);
  const Exponent pc = conjugate(p);
  const Exponent four(4);
  const Rational two(2);
  if (p < four_thirds && q >= pc) return BoundResult::of(Rational(3, 2), 1, "line 1: p<4/3, p'<=q");
  if (p == four_thirds && q > four) return BoundResult::of(Rational(3, 2), 2, "line 2: p=4/3, 4<q");
  if (p > four_thirds && p <= two) {
    const Exponent thr = detail::lipschitz_q_threshold(p);
    if (q >= thr) return BoundResult::of(Rational(3) - Rational(2) / p, 3, "line 3: 4/3<p<=2, (1/p-1/2)^-1<=q");
    if (q > four && q < thr)
      return BoundResult::of(detail::two_minus_two_over_q(q), 4, "line 4: 4/3<p<=2, 4<q<(1/p-1/2)^-1");
  }
  if (p >= four_thirds && p < two && q >= pc && q <= four)
    return BoundResult::of(Rational(3, 2), 5, "line 5: 4/3<=p<2, p'<=q<=4");
  if (p == two && q > Exponent(2) && q <= four) return BoundResult::of(Rational(3, 2), 6, "line 6: p=2, 2<q<=4");
  if (p > two) {
    const Exponent twop(two * p);
    if (q > twop) {
      const Rational v = Rational(1) + (Rational(1) - Rational(2) * q.reciprocal()) / (p - Rational(1));
      return BoundResult::of(v, 7, "line 7: p>2, 2p<q");
    }
    return BoundResult::of(Rational(1) + Rational(1) / p, 8, "line 8: p>2, 2<q<=2p");
  }
  return BoundResult::invalid("(p,q) covered by no table line");
}

/// Besov regularity on the adaptivity scale for polygonal domains.
inline BoundResult sigma_bar_polygonal(Rational p, Exponent q) {
  if (auto pre = detail::table_preconditions(p, q); !pre) return pre;
  const Rational four_thirds(4, 3);
  const Exponent pc = conjugate(p);
  const Exponent four(4);
  const Rational two(2);
  if (p < four_thirds && q >= pc) return BoundResult::of(detail::two_minus_two_over_q(q), 1, "line 1: 1<p<4/3, p'<=q");
  if (p == four_thirds && q > four) return BoundResult::of(detail::two_minus_two_over_q(q), 2, "line 2: p=4/3, 4<q");
  if (p > four_thirds && p <= two && q > four)
    return BoundResult::of(detail::two_minus_two_over_q(q), 3, "line 3: 4/3<p<=2, 4<q");
  if (p >= four_thirds && p < two && q >= pc && q <= four)
    return BoundResult::of(Rational(3, 2), 4, "line 4: 4/3<=p<2, p'<=q<=4");
  if (p == two && q > Exponent(2) && q <= four) return BoundResult::of(Rational(3, 2), 5, "line 5: p=2, 2<q<=4");
  if (p > two) {
    const Exponent twop(two * p);
    if (q > twop) {
      const Rational v = Rational(1) + (Rational(1) - Rational(2) * q.reciprocal()) / (p - Rational(1));
      return BoundResult::of(v, 6, "line 6: p>2, 2p<q");
    }
    return BoundResult::of(Rational(1) + Rational(1) / p, 7, "line 7: p>2, 2<q<=2p");
  }
  return BoundResult::invalid("(p,q) covered by no table line");
}

inline BoundResult sigma_bar(DomainClass c, Rational p, Exponent q) {
  return c == DomainClass::lipschitz ? sigma_bar_lipschitz(p, q) : sigma_bar_polygonal(p, q);
}
inline BoundResult sigma_bar_lipschitz(double p, double q) {
  return sigma_bar_lipschitz(Rational::approximate(p), Exponent::from_double(q));
}
inline BoundResult sigma_bar_polygonal(double p, double q) {
  return sigma_bar_polygonal(Rational::approximate(p), Exponent::from_double(q));
}

struct HoelderOrder {
  int ell = 0;
  double alpha = 0;  // in (0, 1]
  double value = 0;  // ell + alpha
};

/// Regularity ell+alpha of p-harmonic functions in plane sectors.
inline HoelderOrder p_harmonic_smoothness(double p) {
  require(p > 1 && std::isfinite(p), "p-harmonic exponent needs 1 < p < inf");
  const double a = 1.0 / (p - 1.0);
  const double v = 1.0 + (1.0 + a + std::sqrt(1.0 + 14.0 * a + a * a)) / 6.0;
  HoelderOrder h;
  h.value = v;
  h.ell = static_cast<int>(std::floor(v));
  h.alpha = v - h.ell;
  if (h.alpha == 0.0) {
    h.ell -= 1;
    h.alpha = 1.0;
  }
  return h;
}

/// Adaptivity-scale regularity of p-harmonic functions. Rests on an unproven
/// gradient-integrability claim, so the result is flagged conditional.
inline BoundResult p_harmonic_adaptivity_bound(Rational p) {
  if (!(p > Rational(1))) return BoundResult::invalid("p > 1");
  BoundResult r = p <= Rational(2) ? BoundResult::of(Rational(2), 1, "p<=2")
                                   : BoundResult::of(Rational(1) + Rational(1) / (p - Rational(1)), 2, "p>2");
  r.conditional = true;
  return r;
}
inline BoundResult p_harmonic_adaptivity_bound(double p) { return p_harmonic_adaptivity_bound(Rational::approximate(p)); }

struct Figure1Row {
  Rational p;
  BoundResult sigma_bar;
  BoundResult s_star;
};

/// Sigma-bar and s* along a sweep of p for fixed q.
inline std::vector<Figure1Row> figure1_data(const std::vector<Rational>& p_grid, Exponent q, DomainClass c) {
  std::vector<Figure1Row> rows;
  rows.reserve(p_grid.size());
  for (const Rational& p : p_grid) rows.push_back({p, sigma_bar(c, p, q), s_star(p)});
  return rows;
}

/// Inclusive arithmetic progression lo, lo+step, ..., <= hi in exact arithmetic.
inline std::vector<Rational> rational_range(Rational lo, Rational hi, Rational step) {
  require(step > Rational(0), "range step must be positive");
  require(lo <= hi, "range needs lo <= hi");
  std::vector<Rational> out;
  for (Rational x = lo; x <= hi; x = x + step) out.push_back(x);
  return out;
}

}  // namespace besov
