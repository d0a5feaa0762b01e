#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "besov/besovwav.hpp"
#include "besov/models.hpp"

using namespace besov;

namespace {

// one detail in the middle of its level, shifted by `off`
WaveletCoeffs single(int m, int J, int j, int e, long off, double p_norm, double value = 1.0) {
  auto c = empty_coeffs(grid_for(unit_square(), J), unit_square(), m, 2, p_norm);
  const long k = c.level(j).lo + c.level(j).count / 2 + off;
  c.at(j, e, k, k) = value;
  return c;
}

}  // namespace

TEST(BesovWavelet, SingleWaveletNorms) {
  for (double p : {0.8, 1.0, 2.0, 3.0}) {
    for (int j : {2, 4, 5}) {
      const auto c = single(3, 7, j, 2, 0, p);
      const double vol = std::pow(std::ldexp(1.0, -j), 2);
      const double s = 1.5;
      const auto q = besov_quasinorm_wavelet(c, s, p);
      EXPECT_EQ(q.coarse, 0.0);
      EXPECT_NEAR(q.detail, std::pow(vol, -s / 2), 1e-12 * std::pow(vol, -s / 2));
      // adaptivity scale: the coefficient against eta_{I,p'} is 1 whatever sigma is
      for (double sigma : {0.5, 1.0, 2.5}) {
        if (p <= 1) break;
        const auto a = adaptivity_quasinorm(c, sigma, p);
        EXPECT_NEAR(a.detail, 1.0, 1e-12);
        EXPECT_NEAR(a.exponent, 1.0 / (sigma / 2 + 1.0 / p), 1e-15);
      }
    }
  }
}

TEST(BesovWavelet, IndependentOfStorageExponent) {
  const auto g = corner_singularity(1.5 * std::numbers::pi, 6);
  const auto ref = analyze(g, 3, 2, 2.0);
  for (double store : {0.5, 1.0, 4.0}) {
    const auto c = analyze(g, 3, 2, store);
    for (double p : {1.5, 2.0, 4.0}) {
      const double b0 = besov_quasinorm_wavelet(ref, 1.2, p).total;
      EXPECT_NEAR(besov_quasinorm_wavelet(c, 1.2, p).total, b0, 1e-10 * b0);
      const double a0 = adaptivity_quasinorm(ref, 1.0, p).total;
      EXPECT_NEAR(adaptivity_quasinorm(c, 1.0, p).total, a0, 1e-10 * a0);
    }
  }
}

TEST(BesovWavelet, HomogeneityAndQuasiTriangle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  const auto a = analyze(corner_singularity(1.5 * std::numbers::pi, 6), 2, 2, 2.0);
  auto b = a.zeros_like();
  for (int j = 2; j < 6; ++j)
    for (auto& t : b.level(j).types)
      for (double& v : t) v = U(rng) * std::ldexp(1.0, -j);
  for (double sigma : {0.5, 1.0, 1.9}) {
    for (double p : {1.25, 2.0}) {
      const auto na = adaptivity_quasinorm(a, sigma, p);
      auto a3 = a;
      for (auto& t : a3.coarse.types)
        for (double& v : t) v *= -3;
      for (auto& bd : a3.details)
        for (auto& t : bd.types)
          for (double& v : t) v *= -3;
      EXPECT_NEAR(adaptivity_quasinorm(a3, sigma, p).total, 3 * na.total, 1e-10 * na.total);
      // detail part: ||x+y||_tau <= 2^{1/tau - 1} (||x||_tau + ||y||_tau) for tau < 1
      auto sum = a;
      for (int j = 2; j < 6; ++j)
        for (std::size_t e = 0; e < 3; ++e)
          for (std::size_t i = 0; i < sum.level(j).types[e].size(); ++i)
            sum.level(j).types[e][i] += b.level(j).types[e][i];
      const auto nb = adaptivity_quasinorm(b, sigma, p);
      const auto ns = adaptivity_quasinorm(sum, sigma, p);
      const double tau = ns.exponent;
      const double C = tau < 1 ? std::pow(2.0, 1 / tau - 1) : 1.0;
      EXPECT_LE(ns.detail, C * (na.detail + nb.detail) * (1 + 1e-12));
    }
  }
}

TEST(BesovWavelet, CoarseNormOfHaarCellFunction) {
  // piecewise constant on level-2 cells: only the coarse part is nonzero for Haar
  const auto dom = unit_square();
  const auto g = GridFunction::sample(grid_for(dom, 6), dom, [](const Point& x) {
    return std::floor(4 * x[0]) + 2 * std::floor(4 * x[1]) - 3;
  });
  const auto c = analyze(g, 1, 2, 2.0);
  c.for_each_detail([](int, int, long, long, double v) { EXPECT_NEAR(v, 0.0, 1e-12); });
  for (double r : {0.5, 1.0, 2.0, 3.0}) EXPECT_NEAR(coarse_norm(c, r), g.norm(r), 1e-12 * g.norm(r));
  EXPECT_NEAR(coarse_norm(c, INFINITY), g.norm(INFINITY), 1e-12);
}

TEST(BesovWavelet, Preconditions) {
  const auto c = analyze(flat_singularity(2.0, 5), 2, 2, 2.0);
  EXPECT_THROW(besov_quasinorm_wavelet(c, 2.0, 2.0), PreconditionError);  // s = m
  EXPECT_THROW(besov_quasinorm_wavelet(c, 0.5, 0.5), PreconditionError);  // s <= sigma_p = 2
  EXPECT_THROW(besov_quasinorm_wavelet(c, 1.0, INFINITY), PreconditionError);
  EXPECT_THROW(adaptivity_quasinorm(c, 0.0, 2.0), PreconditionError);
  EXPECT_THROW(adaptivity_quasinorm(c, 2.0, 2.0), PreconditionError);
}

TEST(BesovWavelet, SmoothFieldNormStableUnderRefinement) {
  double prev = 0;
  for (int J : {6, 7, 8}) {
    const auto c = analyze(smooth_bump(J), 3, 2, 2.0);
    const double v = besov_quasinorm_wavelet(c, 1.0, 2.0).total;
    if (prev > 0) { EXPECT_NEAR(v, prev, 0.02 * prev) << "J=" << J; }
    prev = v;
  }
}

TEST(Split, PartsRecombineToTheDetailSum) {
  for (const auto& g : {corner_singularity(1.5 * std::numbers::pi, 7), flat_singularity(4.0, 7)}) {
    for (double p : {2.0, 4.0}) {
      const auto c = analyze(g, 3, 2, p);
      const auto full = adaptivity_quasinorm(c, 1.0, p);
      const auto r = split_norm_contributions(c, g.domain(), 1.0, p, 2.0);
      const double tau = r.tau;
      const double recombined =
          std::pow(std::pow(r.boundary, tau) + std::pow(r.interior, tau) + std::pow(r.dropped, tau), 1 / tau);
      EXPECT_NEAR(recombined, full.detail, 1e-10 * full.detail);
      EXPECT_DOUBLE_EQ(r.coarse, full.coarse);
      EXPECT_DOUBLE_EQ(r.total, full.total);
      EXPECT_EQ(r.levels.size(), 5u);
      const auto js = r.to_json();
      EXPECT_EQ(js["per_level"].size(), 5u);
    }
  }
}

TEST(Split, InteriorVanishesWithoutInteriorWavelets) {
  // at level 2 on a unit cube with m = 3 no band exceeds c0, so all mass is boundary or dropped
  const auto c = single(3, 6, 2, 1, 0, 2.0);
  const auto r = split_norm_contributions(c, unit_square(), 1.0, 2.0, 2.0);
  EXPECT_EQ(r.interior, 0.0);
  EXPECT_NEAR(std::pow(std::pow(r.boundary, r.tau) + std::pow(r.dropped, r.tau), 1 / r.tau), 1.0, 1e-12);
}

TEST(Slopes, LevelSlopeOnGeometricData) {
  std::vector<int> lv{2, 3, 4, 5, 6};
  std::vector<double> v;
  for (int j : lv) v.push_back(3.0 * std::pow(2.0, -1.25 * j));
  EXPECT_NEAR(level_log2_slope(lv, v, 2, 6), -1.25, 1e-12);
  EXPECT_NEAR(level_log2_slope(lv, v, 4, 6), -1.25, 1e-12);
  EXPECT_THROW(level_log2_slope(lv, v, 6, 6), PreconditionError);
}
