#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "besov/bounds.hpp"

using namespace besov;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Literal transcription of the two tables as (condition, value) rows, evaluated
// in long double. Serves as the oracle for the exact-rational implementation.
struct Row {
  int line;
  std::function<bool(long double, long double)> when;
  std::function<long double(long double, long double)> value;
};

// comparisons that treat values within rounding distance as equal
bool feq(long double a, long double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= 1e-15L * std::max(1.0L, std::fabs(a));
}
bool lt(long double a, long double b) { return a < b && !feq(a, b); }
bool le(long double a, long double b) { return a < b || feq(a, b); }

long double inv(long double q) { return std::isinf(q) ? 0.0L : 1.0L / q; }
long double conj(long double p) { return p / (p - 1); }
long double lip_thr(long double p) {
  const long double x = 1.0L / p - 0.5L;
  return x == 0 ? static_cast<long double>(kInf) : 1.0L / x;
}

const std::vector<Row>& lipschitz_rows() {
  static const std::vector<Row> rows = {
      {1, [](auto p, auto q) { return lt(p, 4.0L / 3) && le(conj(p), q); }, [](auto, auto) { return 1.5L; }},
      {2, [](auto p, auto q) { return feq(p, 4.0L / 3) && lt(4, q); }, [](auto, auto) { return 1.5L; }},
      {3, [](auto p, auto q) { return lt(4.0L / 3, p) && le(p, 2) && le(lip_thr(p), q); }, [](auto p, auto) { return 3 - 2 / p; }},
      {4, [](auto p, auto q) { return lt(4.0L / 3, p) && le(p, 2) && lt(4, q) && lt(q, lip_thr(p)); },
       [](auto, auto q) { return 2 - 2 * inv(q); }},
      {5, [](auto p, auto q) { return le(4.0L / 3, p) && lt(p, 2) && le(conj(p), q) && le(q, 4); }, [](auto, auto) { return 1.5L; }},
      {6, [](auto p, auto q) { return feq(p, 2) && lt(2, q) && le(q, 4); }, [](auto, auto) { return 1.5L; }},
      {7, [](auto p, auto q) { return lt(2, p) && lt(2 * p, q); }, [](auto p, auto q) { return 1 + (1 - 2 * inv(q)) / (p - 1); }},
      {8, [](auto p, auto q) { return lt(2, p) && lt(2, q) && le(q, 2 * p); }, [](auto p, auto) { return 1 + 1 / p; }},
  };
  return rows;
}

const std::vector<Row>& polygonal_rows() {
  static const std::vector<Row> rows = {
      {1, [](auto p, auto q) { return lt(1, p) && lt(p, 4.0L / 3) && le(conj(p), q); }, [](auto, auto q) { return 2 - 2 * inv(q); }},
      {2, [](auto p, auto q) { return feq(p, 4.0L / 3) && lt(4, q); }, [](auto, auto q) { return 2 - 2 * inv(q); }},
      {3, [](auto p, auto q) { return lt(4.0L / 3, p) && le(p, 2) && lt(4, q); }, [](auto, auto q) { return 2 - 2 * inv(q); }},
      {4, [](auto p, auto q) { return le(4.0L / 3, p) && lt(p, 2) && le(conj(p), q) && le(q, 4); }, [](auto, auto) { return 1.5L; }},
      {5, [](auto p, auto q) { return feq(p, 2) && lt(2, q) && le(q, 4); }, [](auto, auto) { return 1.5L; }},
      {6, [](auto p, auto q) { return lt(2, p) && lt(2 * p, q); }, [](auto p, auto q) { return 1 + (1 - 2 * inv(q)) / (p - 1); }},
      {7, [](auto p, auto q) { return lt(2, p) && lt(2, q) && le(q, 2 * p); }, [](auto p, auto) { return 1 + 1 / p; }},
  };
  return rows;
}

// Draws p, q on a lattice that hits the breakpoints 4/3, 2, 4, 2p, p' often.
struct ParamGen {
  std::mt19937_64 rng{20240601};
  Rational p() {
    static const std::vector<Rational> special{Rational(4, 3), Rational(2), Rational(3, 2), Rational(6, 5), Rational(3)};
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
      return special[std::uniform_int_distribution<std::size_t>(0, special.size() - 1)(rng)];
    return Rational(std::uniform_int_distribution<int>(101, 600)(rng), 100);
  }
  Exponent q(Rational p) {
    const int pick = std::uniform_int_distribution<int>(0, 5)(rng);
    if (pick == 0) return Exponent::infinity();
    if (pick == 1) return Exponent(Rational(4));
    if (pick == 2) return Exponent(Rational(2) * p);
    if (pick == 3 && p > Rational(1)) return Exponent(p / (p - Rational(1)));
    return Exponent(Rational(std::uniform_int_distribution<int>(201, 3000)(rng), 100));
  }
};

long double ld(Rational r) { return static_cast<long double>(r.num()) / static_cast<long double>(r.den()); }
long double ld(Exponent e) { return e.is_infinite() ? static_cast<long double>(kInf) : ld(e.finite()); }

}  // namespace

TEST(Bounds, SigmaP) {
  EXPECT_DOUBLE_EQ(sigma_p(2, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(sigma_p(2, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(sigma_p(3, 1.0), 0.0);
  EXPECT_THROW(sigma_p(2, 0.0), PreconditionError);
}

TEST(Bounds, TauFromSigma) {
  EXPECT_DOUBLE_EQ(tau_from_sigma(1, 2, 2), 1.0);
  EXPECT_NEAR(tau_from_sigma(2, 2, 2), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(tau_from_sigma(1e-9, 2, 3), 3.0, 1e-7);
}

TEST(Bounds, SStar) {
  EXPECT_EQ(*s_star(Rational(2)).exact, Rational(3, 2));
  EXPECT_EQ(*s_star(Rational(4)).exact, Rational(5, 4));
  EXPECT_EQ(*s_star(Rational(3, 2)).exact, Rational(3, 2));
  EXPECT_FALSE(s_star(Rational(1)).valid);
}

TEST(Bounds, SavareShift) {
  auto a = savare_shift(2, 0.5);
  EXPECT_DOUBLE_EQ(a.t, -0.75);
  EXPECT_DOUBLE_EQ(a.s, 1.25);
  auto b = savare_shift(4, 1 - 1e-12);
  EXPECT_NEAR(b.t, -0.25, 1e-9);
  EXPECT_NEAR(b.s, 1.25, 1e-9);
  for (double p : {1.5, 2.0, 3.0, 7.0}) {
    auto z = savare_shift(p, 0.0);
    EXPECT_DOUBLE_EQ(z.t, -1.0);
    EXPECT_DOUBLE_EQ(z.s, 1.0);
  }
  EXPECT_THROW(savare_shift(2, 1.0), PreconditionError);
}

TEST(Bounds, AlphaStar) {
  auto a = alpha_star(Rational(3), Exponent(6));
  EXPECT_EQ(*a.exact, Rational(1, 3));
  EXPECT_FALSE(a.open);
  auto b = alpha_star(Rational(3, 2), Exponent(4));
  EXPECT_EQ(*b.exact, Rational(1, 2));
  auto c = alpha_star(Rational(3), Exponent::infinity());
  EXPECT_TRUE(c.open);
  EXPECT_EQ(*c.exact, Rational(1, 2));
  EXPECT_DOUBLE_EQ(c.materialize(1e-3), 0.499);
  auto d = alpha_star(Rational(2), Exponent::infinity());
  EXPECT_TRUE(d.open);
  EXPECT_EQ(*d.exact, Rational(1));
  EXPECT_FALSE(alpha_star(Rational(3), Exponent(2)).valid);
  EXPECT_THROW(alpha_star(Rational(3), Exponent(2)).materialize(), PreconditionError);
}

TEST(Bounds, GammaAdmissible) {
  auto g = gamma_admissible(Rational(4), Exponent::infinity(), GammaVariant::gradient, 8.0);
  EXPECT_DOUBLE_EQ(g.offset, 0.25);
  EXPECT_TRUE(g.inclusive);
  EXPECT_TRUE(g.alpha.open);
  auto h = gamma_admissible(Rational(2), Exponent(8), GammaVariant::sobolev, 1.5);
  EXPECT_DOUBLE_EQ(h.offset, 0.5);
  EXPECT_FALSE(h.inclusive);
  auto z = gamma_admissible(Rational(2), Exponent(8), GammaVariant::sobolev, 1.9);
  EXPECT_NEAR(z.offset, 0.1, 1e-15);
  auto collapse = gamma_admissible(Rational(4), Exponent(16), GammaVariant::sobolev, 1.5);
  EXPECT_DOUBLE_EQ(collapse.offset, 0.0);
  EXPECT_THROW(gamma_admissible(Rational(2), Exponent(8), GammaVariant::gradient, 2.0), PreconditionError);
  EXPECT_THROW(gamma_admissible(Rational(2), Exponent(8), GammaVariant::sobolev, 1.0), PreconditionError);
}

TEST(Bounds, SigmaStarExamples) {
  auto a = sigma_star(1, 0.5, 0.1, 2, 2);
  EXPECT_DOUBLE_EQ(a.value, 1.5);
  EXPECT_EQ(a.line, 1);
  auto b = sigma_star(1, 1.0, 2.0, 2, 2);
  EXPECT_DOUBLE_EQ(b.value, 1.0);
  EXPECT_EQ(b.line, 2);
  auto c = sigma_star(1, 0.5, 1.25, 2, 2);
  EXPECT_EQ(c.line, 2);
  EXPECT_NEAR(c.value, 1.5, 1e-15);
  EXPECT_FALSE(sigma_star(1, 0.5, 2.0, 2, 2).valid);
  EXPECT_FALSE(sigma_star(1, 0.5, 0.0, 2, 2).valid);
  EXPECT_FALSE(sigma_star(1, 1.5, 0.5, 2, 2).valid);
}

TEST(Bounds, EmbeddingBound) {
  // sigma* = 2 from ell=1, alpha=1, small gamma
  auto a = embedding_bound(1.4, 2, 2, 1, 1.0, 0.1);
  EXPECT_DOUBLE_EQ(a.value, 2.0);
  auto b = embedding_bound(100, 2, 2, 1, 1.0, 0.1);
  EXPECT_DOUBLE_EQ(b.value, 2.0);
  auto c = embedding_bound(1e-6, 2, 2, 1, 1.0, 0.1);
  EXPECT_NEAR(c.value, 2e-6, 1e-18);
  EXPECT_EQ(c.line, 3);
}

TEST(Bounds, GenericBesovBound) {
  auto a = generic_besov_bound(1.5, 1, 1.0, 0.5, 2, 2);
  ASSERT_TRUE(a.valid);
  EXPECT_DOUBLE_EQ(a.value, 2.0);
  auto b = generic_besov_bound(1.5, 1, 0.5, 0.1, 2, 2);
  EXPECT_FALSE(b.valid);
  EXPECT_EQ(b.failed, "s_bar-ell < alpha");
  auto c = generic_besov_bound(1.5, 1, 1.0, 1.75, 2, 2);
  EXPECT_FALSE(c.valid);
  EXPECT_EQ(c.failed, "gamma < ell+alpha+1/p-((d-1)/d)s_bar");
  EXPECT_FALSE(generic_besov_bound(2.0, 1, 1.0, 0.1, 2, 2).valid);
}

TEST(Bounds, GenericBoundExceedsSobolevInput) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  int hits = 0;
  for (int i = 0; i < 2000; ++i) {
    const int d = 2 + static_cast<int>(U(rng) * 3);
    const int ell = static_cast<int>(U(rng) * 3);
    const double sbar = ell + U(rng) * 0.999;
    const double alpha = U(rng) * 1.0 + 1e-6;
    const double p = 1.01 + U(rng) * 6;
    const double gamma = U(rng) * (ell + 2);
    auto r = generic_besov_bound(sbar, ell, std::min(alpha, 1.0), gamma, d, p);
    if (!r) continue;
    ++hits;
    EXPECT_GT(r.value, sbar) << "d=" << d << " ell=" << ell << " sbar=" << sbar << " alpha=" << alpha << " gamma=" << gamma;
  }
  EXPECT_GT(hits, 100);
}

TEST(Bounds, LipschitzExamples) {
  auto a = sigma_bar_lipschitz(Rational(3), Exponent::infinity());
  EXPECT_EQ(*a.exact, Rational(3, 2));
  EXPECT_EQ(a.line, 7);
  auto b = sigma_bar_lipschitz(Rational(2), Exponent(3));
  EXPECT_EQ(*b.exact, Rational(3, 2));
  EXPECT_EQ(b.line, 6);
  auto c = sigma_bar_lipschitz(Rational(3, 2), Exponent(5));
  EXPECT_EQ(*c.exact, Rational(8, 5));
  EXPECT_EQ(c.line, 4);
  auto bad = sigma_bar_lipschitz(Rational(11, 10), Exponent(3));
  EXPECT_FALSE(bad.valid);
  EXPECT_NE(bad.failed.find("p'"), std::string::npos);
}

TEST(Bounds, PolygonalExamples) {
  auto a = sigma_bar_polygonal(Rational(6, 5), Exponent(8));
  EXPECT_EQ(*a.exact, Rational(7, 4));
  EXPECT_EQ(a.line, 1);
  auto b = sigma_bar_polygonal(Rational(3, 2), Exponent(4));
  EXPECT_EQ(*b.exact, Rational(3, 2));
  EXPECT_EQ(b.line, 4);
  auto c = sigma_bar_polygonal(Rational(3), Exponent::infinity());
  EXPECT_EQ(*c.exact, Rational(3, 2));
  EXPECT_EQ(c.line, 6);
  EXPECT_EQ(*c.exact, *sigma_bar_lipschitz(Rational(3), Exponent::infinity()).exact);
}

TEST(Bounds, TablesMatchTranscribedOracle) {
  ParamGen gen;
  int covered = 0;
  for (int i = 0; i < 5000; ++i) {
    const Rational p = gen.p();
    const Exponent q = gen.q(p);
    const long double pl = ld(p), ql = ld(q);
    const bool pre = pl > 1 && ql > 2 && le(conj(pl), ql);
    for (int table = 0; table < 2; ++table) {
      const auto& rows = table == 0 ? lipschitz_rows() : polygonal_rows();
      const BoundResult r = table == 0 ? sigma_bar_lipschitz(p, q) : sigma_bar_polygonal(p, q);
      std::vector<const Row*> hit;
      if (pre)
        for (const auto& row : rows)
          if (row.when(pl, ql)) hit.push_back(&row);
      ASSERT_LE(hit.size(), 1u) << "oracle rows overlap at p=" << p << " q=" << q.str();
      if (hit.empty()) {
        EXPECT_FALSE(r.valid) << "p=" << p << " q=" << q.str();
        continue;
      }
      ++covered;
      ASSERT_TRUE(r.valid) << "p=" << p << " q=" << q.str() << " table " << table;
      EXPECT_EQ(r.line, hit[0]->line) << "p=" << p << " q=" << q.str() << " table " << table;
      EXPECT_NEAR(r.value, static_cast<double>(hit[0]->value(pl, ql)), 1e-12);
    }
  }
  EXPECT_GT(covered, 3000);
}

TEST(Bounds, BreakpointContinuity) {
  for (int num = 134; num <= 200; ++num) {
    const Rational p(num, 100);
    // q = 4 for 4/3 < p <= 2: line 5/6 at q=4 against line 4 just above
    const auto at = sigma_bar_lipschitz(p, Exponent(4));
    const auto above = sigma_bar_lipschitz(p, Exponent(Rational(4) + Rational(1, 1000000)));
    EXPECT_NEAR(at.value, above.value, 1e-6) << p;
  }
  for (int num = 201; num <= 800; num += 7) {
    const Rational p(num, 100);
    const Exponent q2p(Rational(2) * p);
    const Exponent just(Rational(2) * p + Rational(1, 1000000));
    EXPECT_NEAR(sigma_bar_lipschitz(p, q2p).value, sigma_bar_lipschitz(p, just).value, 1e-6);
    EXPECT_NEAR(sigma_bar_polygonal(p, q2p).value, sigma_bar_polygonal(p, just).value, 1e-6);
    // exact identity at the breakpoint: 1 + (1 - 1/p)/(p - 1) = 1 + 1/p
    const Rational q = Rational(2) * p;
    EXPECT_EQ(Rational(1) + (Rational(1) - Rational(2) / q) / (p - Rational(1)), Rational(1) + Rational(1) / p);
  }
}

TEST(Bounds, PolygonalDominatesLipschitz) {
  ParamGen gen;
  for (int i = 0; i < 3000; ++i) {
    const Rational p = gen.p();
    const Exponent q = gen.q(p);
    const auto l = sigma_bar_lipschitz(p, q);
    const auto g = sigma_bar_polygonal(p, q);
    ASSERT_EQ(l.valid, g.valid);
    if (!l) continue;
    EXPECT_GE(*g.exact, *l.exact) << p << " " << q.str();
    const bool strict1 = p <= Rational(4, 3) && q > Exponent(4);
    const bool strict2 = p > Rational(4, 3) && p < Rational(2) && q > detail::lipschitz_q_threshold(p);
    if (strict1 || strict2) { EXPECT_GT(*g.exact, *l.exact) << p << " " << q.str(); }
  }
}

TEST(Bounds, GainOverSobolevCeiling) {
  ParamGen gen;
  for (int i = 0; i < 3000; ++i) {
    const Rational p = gen.p();
    const Exponent q = gen.q(p);
    const auto l = sigma_bar_lipschitz(p, q);
    if (!l) continue;
    const Rational ss = *s_star(p).exact;
    if (p < Rational(4, 3)) { EXPECT_EQ(*l.exact, ss); }
    const auto g = sigma_bar_polygonal(p, q);
    if (p <= Rational(2) && q > Exponent(4)) { EXPECT_GT(*g.exact, ss) << p << " " << q.str(); }
  }
}

TEST(Bounds, MonotoneInQWhereGainful) {
  for (int num = 101; num <= 600; num += 3) {
    const Rational p(num, 100);
    for (DomainClass dc : {DomainClass::lipschitz, DomainClass::polygonal}) {
      double prev = -1;
      for (int qn = 201; qn <= 4000; qn += 13) {
        const auto r = sigma_bar(dc, p, Exponent(Rational(qn, 100)));
        if (!r) continue;
        if (r.value > s_star(p).value && prev > 0) { EXPECT_GE(r.value, prev - 1e-15) << p << " q=" << qn; }
        prev = r.value;
      }
    }
  }
}

TEST(Bounds, PHarmonic) {
  const auto two = p_harmonic_smoothness(2.0);
  EXPECT_EQ(two.value, 2.0);
  EXPECT_EQ(two.ell, 1);
  EXPECT_EQ(two.alpha, 1.0);
  EXPECT_NEAR(p_harmonic_smoothness(1e9).value, 4.0 / 3.0, 1e-6);
  for (double p = 1.1; p <= 10.0; p += 0.1) {
    const double a_inf = p <= 2 ? 1.0 : 1.0 / (p - 1);
    EXPECT_GT(p_harmonic_smoothness(p).value, 1.0 + a_inf) << p;
  }
  EXPECT_EQ(*p_harmonic_adaptivity_bound(Rational(17, 10)).exact, Rational(2));
  EXPECT_EQ(*p_harmonic_adaptivity_bound(Rational(3)).exact, Rational(3, 2));
  EXPECT_TRUE(p_harmonic_adaptivity_bound(Rational(3)).conditional);
  EXPECT_EQ(*p_harmonic_adaptivity_bound(Rational(2)).exact, Rational(2));
}

TEST(Bounds, Figure1Rows) {
  const auto rows = figure1_data({Rational(6, 5), Rational(8, 5)}, Exponent::infinity(), DomainClass::lipschitz);
  EXPECT_EQ(*rows[0].sigma_bar.exact, Rational(3, 2));
  EXPECT_EQ(*rows[0].s_star.exact, Rational(3, 2));
  EXPECT_EQ(*rows[1].sigma_bar.exact, Rational(7, 4));
  EXPECT_EQ(rows[1].sigma_bar.line, 3);
  const auto poly = figure1_data({Rational(6, 5)}, Exponent::infinity(), DomainClass::polygonal);
  EXPECT_EQ(*poly[0].sigma_bar.exact, Rational(2));
  EXPECT_EQ(rational_range(Rational(1), Rational(5), Rational(1, 100)).size(), 401u);
}
