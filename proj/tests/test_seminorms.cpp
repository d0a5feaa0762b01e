#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "besov/models.hpp"
#include "besov/seminorms.hpp"

using namespace besov;

namespace {

GridFunction on_square(int J, double (*f)(const Point&)) {
  return GridFunction::sample(grid_for(unit_square(), J), unit_square(), f);
}

// all pairs, no sampling
double brute_hoelder(const GridFunction& g, const Region& K, int ell, double alpha) {
  const DerivativeFields df(g, ell);
  const auto& s = g.spec();
  std::vector<std::size_t> pts;
  for (std::size_t i2 = 0; i2 < s.n(); ++i2)
    for (std::size_t i1 = 0; i1 < s.n(); ++i1) {
      const std::size_t idx = s.index(i1, i2);
      const Point x = s.point(i1, i2);
      bool in = false;
      if (const Ball* b = std::get_if<Ball>(&K))
        in = std::hypot(x[0] - b->center[0], x[1] - b->center[1]) < b->radius;
      else {
        const Cube& q = std::get<Cube>(K);
        in = x[0] >= q.lo[0] && x[0] <= q.lo[0] + q.side && x[1] >= q.lo[1] && x[1] <= q.lo[1] + q.side;
      }
      if (in && df.valid(idx)) pts.push_back(idx);
    }
  double total = 0;
  for (std::size_t q = 0; q < df.count(); ++q) {
    double best = 0;
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const double dx = (static_cast<double>(pts[a] % s.n()) - static_cast<double>(pts[b] % s.n())) * s.h();
        const double dy = (static_cast<double>(pts[a] / s.n()) - static_cast<double>(pts[b] / s.n())) * s.h();
        best = std::max(best, std::fabs(df.field(q)[pts[a]] - df.field(q)[pts[b]]) / std::pow(std::hypot(dx, dy), alpha));
      }
    total += best;
  }
  return total;
}

}  // namespace

TEST(Derivatives, ExactOnQuadratics) {
  const auto g = on_square(5, [](const Point& x) { return 3 * x[0] * x[0] - x[0] * x[1] + 2 * x[1]; });
  const DerivativeFields d1(g, 1), d2(g, 2);
  ASSERT_EQ(d1.count(), 2u);
  ASSERT_EQ(d2.count(), 3u);
  const auto& s = g.spec();
  for (std::size_t i2 = 1; i2 + 1 < s.n(); ++i2)
    for (std::size_t i1 = 1; i1 + 1 < s.n(); ++i1) {
      const auto idx = s.index(i1, i2);
      ASSERT_TRUE(d1.valid(idx));
      const Point x = s.point(i1, i2);
      EXPECT_NEAR(d1.field(0)[idx], 6 * x[0] - x[1], 1e-10);
      EXPECT_NEAR(d1.field(1)[idx], -x[0] + 2, 1e-10);
      EXPECT_NEAR(d2.field(0)[idx], 6, 1e-8);
      EXPECT_NEAR(d2.field(1)[idx], -1, 1e-8);
      EXPECT_NEAR(d2.field(2)[idx], 0, 1e-8);
    }
  EXPECT_FALSE(d1.valid(s.index(0, 3)));
  EXPECT_THROW(DerivativeFields(g, 3), PreconditionError);
}

TEST(Hoelder, LinearAndQuadraticOracles) {
  const auto lin = on_square(6, [](const Point& x) { return 2 * x[0] - x[1]; });
  const Ball b{{0.5, 0.5}, 0.25, 0.25};
  // ell = 0, alpha = 1: the Lipschitz constant |grad| = sqrt(5), attained only in direction (2,-1),
  // so lattice pairs give a lower bound that is at least the axis value 2
  const double v = hoelder_seminorm(lin, b, {0, 1.0, 0});
  EXPECT_LE(v, std::sqrt(5.0) + 1e-12);
  EXPECT_GE(v, 2.0 - 1e-12);
  // first derivatives of a linear field are constant
  EXPECT_NEAR(hoelder_seminorm(lin, b, {1, 1.0, 0}), 0.0, 1e-9);
  // u = x1^2 + x2^2: each first derivative has Lipschitz constant 2, summed over nu
  const auto quad = on_square(6, [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; });
  EXPECT_NEAR(hoelder_seminorm(quad, b, {1, 1.0, 0}), 4.0, 1e-8);
  EXPECT_NEAR(hoelder_seminorm(quad, Cube{2, {0.25, 0.25}, 0.5}, {1, 1.0, 0}), 4.0, 1e-8);
}

TEST(Hoelder, SampledPairsBoundBruteForceFromBelow) {
  const auto g = corner_singularity(1.5 * std::numbers::pi, 6);
  const Ball big{{-0.45, 0.1}, 0.3, 0.0};
  const Ball small{{-0.5, 0.3}, 0.15, 0.0};
  for (double alpha : {0.3, 0.7, 1.0}) {
    const double brute_big = brute_hoelder(g, big, 0, alpha);
    const double est_big = hoelder_seminorm(g, big, {0, alpha, 0});
    EXPECT_LE(est_big, brute_big * (1 + 1e-12));
    EXPECT_GE(est_big, 0.9 * brute_big) << "alpha=" << alpha;
    // small regions take every pair
    EXPECT_NEAR(hoelder_seminorm(g, small, {0, alpha, 0}), brute_hoelder(g, small, 0, alpha), 1e-12);
  }
  EXPECT_EQ(hoelder_seminorm(g, big, {0, 0.5, 0}, 7), hoelder_seminorm(g, big, {0, 0.5, 0}, 7));
}

TEST(Hoelder, Preconditions) {
  const auto g = on_square(5, [](const Point& x) { return x[0]; });
  EXPECT_THROW(hoelder_seminorm(g, Ball{{0.5, 0.5}, 0.05, 0}, {0, 1.0, 0}), PreconditionError);  // under-resolved
  EXPECT_THROW(hoelder_seminorm(g, Ball{{0.2, 0.5}, 0.3, 0}, {0, 1.0, 0}), PreconditionError);   // leaves domain
  EXPECT_THROW(hoelder_seminorm(g, Ball{{0.5, 0.5}, 0.3, 0}, {0, 1.5, 0}), PreconditionError);
}

TEST(WeightedHoelder, LinearFieldPicksTheDeepestBall) {
  const auto g = on_square(7, [](const Point& x) { return x[0]; });
  for (double gamma : {0.0, 0.5, 2.0}) {
    const auto r = weighted_hoelder_seminorm(g, unit_square(), {0, 1.0, gamma}, 2.0);
    double best = 0;
    for (const Ball& b : ball_family(unit_square(), 2.0, 1, 5))
      if (2 * b.radius >= 8 * g.spec().h()) best = std::max(best, std::pow(b.delta, gamma));
    EXPECT_NEAR(r.value, best, 1e-12) << "gamma=" << gamma;
    EXPECT_GT(r.balls, 0u);
  }
  EXPECT_THROW(weighted_hoelder_seminorm(g, unit_square(), {0, 1.0, 0.5}, 2.0, 0, 0), PreconditionError);
}

TEST(Modulus, LinearAndQuadraticProfiles) {
  const auto lin = on_square(6, [](const Point& x) { return x[0]; });
  for (int j = 1; j <= 5; ++j) {
    const double t = std::ldexp(1.0, -j);
    EXPECT_NEAR(modulus_of_smoothness(lin, 1, t, INFINITY), t, 1e-12);
    EXPECT_NEAR(modulus_of_smoothness(lin, 2, t, INFINITY), 0.0, 1e-12);
  }
  const auto quad = on_square(6, [](const Point& x) { return x[0] * x[0]; });
  for (int j = 2; j <= 5; ++j) {
    const double t = std::ldexp(1.0, -j);
    EXPECT_NEAR(modulus_of_smoothness(quad, 2, t, INFINITY), 2 * t * t, 1e-12);
  }
  // L_p of a constant-difference field: Delta_t x1 = t on the strip x1 < 1 - t
  const double t = 0.25;
  const double expected = t * std::pow(1 - t, 1.0 / 2.0);
  EXPECT_NEAR(difference_norm(lin, 1, {1, 0}, 16, 2.0), expected, 1e-12);
  EXPECT_THROW(modulus_of_smoothness(lin, 1, 1e-4, 2.0), PreconditionError);
}

TEST(Modulus, ProfileIsMonotone) {
  const auto g = corner_singularity(1.5 * std::numbers::pi, 6);
  const auto prof = modulus_profile(g, 2, 0.5, 2.0, true);
  for (std::size_t i = 1; i < prof.values.size(); ++i) {
    EXPECT_GT(prof.lengths[i], prof.lengths[i - 1]);
    EXPECT_GE(prof.values[i], prof.values[i - 1]);
  }
  EXPECT_GE(modulus_of_smoothness(g, 2, 0.25, 2.0, true), modulus_of_smoothness(g, 2, 0.25, 2.0, false));
}

TEST(Modulus, BesovSeminormBasics) {
  const auto g = smooth_bump(6);
  const double a = besov_seminorm_modulus(g, 1.0, 2.0, 2.0, 2);
  EXPECT_GT(a, 0);
  EXPECT_NEAR(besov_seminorm_modulus(g.scaled(-2.5), 1.0, 2.0, 2.0, 2), 2.5 * a, 1e-12 * a);
  EXPECT_LE(besov_seminorm_modulus(g, 1.0, 2.0, INFINITY, 2), a);
  EXPECT_THROW(besov_seminorm_modulus(g, 1.5, 2.0, 2.0, 1), PreconditionError);
}

TEST(Fractional, MatchesDirectDoubleSum) {
  const auto dom = unit_square();
  const auto g = GridFunction::sample(grid_for(dom, 4), dom, [](const Point& x) { return std::sin(3 * x[0]) * x[1]; });
  const double s = 0.6, p = 2.0;
  const auto& sp = g.spec();
  double acc = 0;
  for (std::size_t a = 0; a < sp.size(); ++a)
    for (std::size_t b = 0; b < sp.size(); ++b) {
      if (a == b) continue;
      const Point x = sp.point(a % sp.n(), a / sp.n()), y = sp.point(b % sp.n(), b / sp.n());
      acc += std::pow(std::fabs(g[a] - g[b]), p) / std::pow(std::hypot(x[0] - y[0], x[1] - y[1]), 2 + s * p);
    }
  const double direct = std::pow(acc * std::pow(sp.h(), 4), 1 / p);
  EXPECT_NEAR(sobolev_fractional_seminorm(g, s, p), direct, 1e-12 * direct);
  const auto flat = GridFunction::sample(grid_for(dom, 4), dom, [](const Point&) { return 1.0; });
  EXPECT_EQ(sobolev_fractional_seminorm(flat, s, p), 0.0);
  EXPECT_THROW(sobolev_fractional_seminorm(smooth_bump(7), s, p), PreconditionError);
}

TEST(Whitney, ReproducesPolynomials) {
  const auto g = on_square(5, [](const Point& x) { return 1 + x[0] - 2 * x[0] * x[1] + x[1] * x[1]; });
  const Cube Q{2, {0.25, 0.25}, 0.5};
  EXPECT_NEAR(whitney_error(g, Q, 2, 2.0), 0.0, 1e-12);
  EXPECT_NEAR(whitney_error(g, Q, 2, INFINITY), 0.0, 1e-9);
  EXPECT_GT(whitney_error(g, Q, 1, INFINITY), 0.01);
}

TEST(Whitney, ClosedFormOneDimensional) {
  const int J = 6;
  const auto dom = interval(0, 1);
  const auto g = GridFunction::sample(grid_for(dom, J), dom, [](const Point& x) { return x[0] * x[0]; });
  const double h = g.spec().h();
  // best uniform line for x^2 on an even number of midpoint nodes spanning width w:
  // alternation at both ends and at the two nodes h/2 from the center, giving (w^2 - h^2) / 8
  const double w = 1 - h;
  EXPECT_NEAR(whitney_error(g, Cube{1, {0, 0}, 1}, 1, INFINITY), (w * w - h * h) / 8, 1e-12);
  // best constant in discrete L2 for x on the midpoint grid: variance (1 - h^2) / 12
  const auto lin = GridFunction::sample(grid_for(dom, J), dom, [](const Point& x) { return x[0]; });
  EXPECT_NEAR(whitney_error(lin, Cube{1, {0, 0}, 1}, 0, 2.0), std::sqrt((1 - h * h) / 12), 1e-12);
  EXPECT_THROW(whitney_error(g, Cube{1, {0, 0}, 1}, 1, 3.0), PreconditionError);
}

TEST(Simplex, SmallProblems) {
  // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
  Eigen::MatrixXd A(2, 4);
  A << 1, 2, 1, 0, 3, 1, 0, 1;
  Eigen::VectorXd b(2), c(4);
  b << 4, 6;
  c << 1, 1, 0, 0;
  const auto r = simplex_max(A, b, c);
  ASSERT_EQ(r.status, LpResult::Status::optimal);
  EXPECT_NEAR(r.value, 2.8, 1e-12);
  EXPECT_NEAR(r.x(0), 1.6, 1e-12);
  // infeasible: x = -1, x >= 0
  Eigen::MatrixXd A2(1, 1);
  A2 << 1;
  Eigen::VectorXd b2(1), c2(1);
  b2 << -1;
  c2 << 1;
  EXPECT_EQ(simplex_max(A2, b2, c2).status, LpResult::Status::infeasible);
  // unbounded: x - y = 0
  Eigen::MatrixXd A3(1, 2);
  A3 << 1, -1;
  Eigen::VectorXd b3(1), c3(2);
  b3 << 0;
  c3 << 1, 0;
  EXPECT_EQ(simplex_max(A3, b3, c3).status, LpResult::Status::unbounded);
}
