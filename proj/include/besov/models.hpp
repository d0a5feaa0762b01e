#pragma once

// Closed-form model solutions of the p-Poisson problem and a smooth control.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "besov/domain.hpp"
#include "besov/error.hpp"
#include "besov/grid.hpp"

namespace besov {

/// Constant making div(|grad u|^{p-2} grad u) = 1 for u = c |x1|^{p/(p-1)}.
/// (c*beta)^{p-1} = 1 with beta = p/(p-1), hence c = (p-1)/p.
inline double flat_singularity_constant(double p) {
  require(p > 1, "flat singularity needs p > 1");
  return (p - 1.0) / p;
}

inline double flat_singularity_value(double p, const Point& x) {
  const double c = flat_singularity_constant(p);
  return c * std::pow(std::fabs(x[0]), p / (p - 1.0));
}

/// The square (-1, 1)^2 used by the model problems.
inline DomainSpec symmetric_square() { return cube_domain(2, {-1.0, -1.0}, 2.0); }

inline GridFunction flat_singularity(double p, const DomainSpec& dom, int J) {
  require(p > 1, "flat singularity needs p > 1");
  return GridFunction::sample(grid_for(dom, J), dom, [p](const Point& x) { return flat_singularity_value(p, x); });
}
inline GridFunction flat_singularity(double p, int J) { return flat_singularity(p, symmetric_square(), J); }

/// r^{pi/omega} sin(pi theta / omega), harmonic in the sector of opening omega.
inline double corner_singularity_value(double omega, const Point& x) {
  const double r = std::hypot(x[0], x[1]);
  if (r == 0.0) return 0.0;
  double th = std::atan2(x[1], x[0]);
  if (th < 0) th += 2.0 * std::numbers::pi;
  if (th > omega) return 0.0;
  const double a = std::numbers::pi / omega;
  return std::pow(r, a) * std::sin(a * th);
}

inline GridFunction corner_singularity(double omega, int J) {
  const DomainSpec dom = sector(1.0, omega);
  return GridFunction::sample(grid_for(dom, J), dom, [omega](const Point& x) { return corner_singularity_value(omega, x); });
}

inline double smooth_bump_value(const Ball& b, const Point& x) {
  const double dx = x[0] - b.center[0], dy = x[1] - b.center[1];
  const double t = (dx * dx + dy * dy) / (b.radius * b.radius);
  return t < 1.0 ? std::exp(-1.0 / (1.0 - t)) : 0.0;
}

/// C-infinity bump supported in the given ball, which must lie in the domain.
inline GridFunction smooth_bump(const DomainSpec& dom, int J, const Ball& support) {
  require(support.radius > 0, "bump radius must be positive");
  require(dom.signed_distance(support.center) >= support.radius, "bump support must lie in the domain");
  return GridFunction::sample(grid_for(dom, J), dom, [support](const Point& x) { return smooth_bump_value(support, x); });
}

/// Default control: bump of radius 1/2 centered in (-1, 1)^2.
inline GridFunction smooth_bump(int J) {
  return smooth_bump(symmetric_square(), J, Ball{{0.0, 0.0}, 0.5, 0.5});
}

/// Discrete div(|grad u|^{p-2} grad u) in flux form on the 5-point stencil;
/// p = 2 is the usual 5-point Laplacian. Points whose stencil leaves the domain are invalid.
struct ResidualField {
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
};

inline ResidualField p_laplacian_flux_divergence(const GridFunction& g, double p) {
  require(p > 1 && std::isfinite(p), "p-Laplacian needs 1 < p < inf");
  const GridSpec& s = g.spec();
  require(s.d == 2, "p-Laplacian residual is implemented for d = 2");
  const long n = static_cast<long>(s.n());
  const double h = s.h();
  ResidualField out{std::vector<double>(s.size(), 0.0), std::vector<std::uint8_t>(s.size(), 0)};
  auto u = [&](long i1, long i2) { return g.at(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2)); };
  auto in = [&](long i1, long i2) { return g.inside(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2)); };
  auto flux = [&](double diff) {
    const double q = diff / h;
    return std::pow(std::fabs(q), p - 2.0) * q;
  };
  for (long i2 = 1; i2 + 1 < n; ++i2)
    for (long i1 = 1; i1 + 1 < n; ++i1) {
      if (!in(i1, i2) || !in(i1 + 1, i2) || !in(i1 - 1, i2) || !in(i1, i2 + 1) || !in(i1, i2 - 1)) continue;
      const double c = u(i1, i2);
      const double div = (flux(u(i1 + 1, i2) - c) - flux(c - u(i1 - 1, i2))) / h +
                         (flux(u(i1, i2 + 1) - c) - flux(c - u(i1, i2 - 1))) / h;
      const std::size_t idx = s.index(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2));
      out.values[idx] = div;
      out.valid[idx] = 1;
    }
  return out;
}

}  // namespace besov
