#ifndef LSSW_SCORES_HPP
#define LSSW_SCORES_HPP

#include <cmath>
#include <vector>

#include "lssw/lss_model.hpp"
#include "lssw/numerics.hpp"

namespace lssw {

enum class ScoreIndex { mu, sigma, xi };

namespace detail {

inline void check_interior(const LssModel& model, const ThetaParams& th,
                           double x) {
  SupportInterval s = support(model, th);
  if (!(x > s.lo && x < s.hi))
    throw DomainError("score: x outside support interior");
}

}  // namespace detail

// Closed-form Wasserstein score functions. The xi score switches to its
// Taylor series in xi near 0, where the direct xi^-3 combination cancels.
inline double score(const LssModel& model, const ThetaParams& th,
                    ScoreIndex which, double x) {
  detail::check_interior(model, th, x);
  auto [mean, var] = mean_var(model, th);
  const double a = (x - th.mu) / th.sigma;
  switch (which) {
    case ScoreIndex::mu:
      return x - mean;
    case ScoreIndex::sigma: {
      double em = mean - th.mu;
      return (x - th.mu) * (x - th.mu) / (2.0 * th.sigma) -
             (var + em * em) / (2.0 * th.sigma);
    }
    case ScoreIndex::xi: {
      const double xi = th.xi, s2 = th.sigma * th.sigma;
      if (std::abs(xi) >= detail::kSmallXi) {
        const double t = 1.0 + xi * a;
        const double poly = 0.5 * t * t * std::log(t) - 0.75 * t * t + t;
        const double mgf = 0.5 * xi * model.base.mgf_deriv(1, 2.0 * xi) -
                           0.75 * model.base.mgf_deriv(0, 2.0 * xi) +
                           model.base.mgf_deriv(0, xi);
        return s2 / (xi * xi * xi) * (poly - mgf);
      }
      auto m = detail::mgf_moments(model.base);
      const double a3 = a * a * a;
      return s2 * ((a3 - m.m3) / 6.0 - xi * (a3 * a + 5.0 * m.m4) / 24.0);
    }
  }
  throw DomainError("score: invalid index");
}

// x-derivatives of the score functions.
inline double score_dx(const LssModel& model, const ThetaParams& th,
                       ScoreIndex which, double x) {
  detail::check_interior(model, th, x);
  const double a = (x - th.mu) / th.sigma;
  switch (which) {
    case ScoreIndex::mu:
      return 1.0;
    case ScoreIndex::sigma:
      return a;
    case ScoreIndex::xi: {
      const double xi = th.xi;
      if (std::abs(xi) >= detail::kSmallXi) {
        const double t = 1.0 + xi * a;
        return th.sigma / (xi * xi) * (t * std::log(t) - t + 1.0);
      }
      return th.sigma * (0.5 * a * a - xi * a * a * a / 6.0 +
                         xi * xi * a * a * a * a / 12.0);
    }
  }
  throw DomainError("score_dx: invalid index");
}

namespace detail {

// dP_theta/dtheta_i at fixed x. Writing P(x; theta) = F(z(x, theta)) with
// z the base-variable coordinate of x gives dP/dtheta_i = f(z) dz/dtheta_i;
// dz/dtheta_i is taken by Richardson-extrapolated central differences in the
// parameter. Differencing the smooth map z instead of the cdf keeps the
// roundoff noise relative to z rather than absolute in probability, which
// matters deep in the tails where the density divides it back out.
inline double cdf_dtheta(const LssModel& model, const ThetaParams& th, int i,
                         double x) {
  double base = (i == 0) ? th.mu : (i == 1) ? th.sigma : th.xi;
  double h = 1e-5 * std::max(1.0, std::abs(base));
  auto z_at = [&](double v) {
    ThetaParams p = th;
    (i == 0 ? p.mu : i == 1 ? p.sigma : p.xi) = v;
    return shape_inv((x - p.mu) / p.sigma, p.xi);
  };
  auto central = [&](double step) {
    return (z_at(base + step) - z_at(base - step)) / (2.0 * step);
  };
  double d1 = central(h), d2 = central(0.5 * h);
  double dz = (4.0 * d2 - d1) / 3.0;
  return model.base.pdf(shape_inv((x - th.mu) / th.sigma, th.xi)) * dz;
}

}  // namespace detail

// Numerical score oracle: integrate the 1-D continuity equation
// p Phi' = -dP/dtheta_i (decay constant 0) and fix the additive constant of
// Phi by the mean-zero condition. Independent of the closed forms above.
inline std::vector<double> score_numeric(const LssModel& model,
                                         const ThetaParams& th,
                                         ScoreIndex which,
                                         const std::vector<double>& grid) {
  const int idx = which == ScoreIndex::mu ? 0 : which == ScoreIndex::sigma ? 1 : 2;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw DomainError("score_numeric: grid must be strictly increasing");

  auto phi_prime = [&](double x) {
    double p = density(model, th, x);
    if (!(p > 0.0)) return 0.0;
    return -detail::cdf_dtheta(model, th, idx, x) / p;
  };

  // phi_prime carries ~1e-10 noise from the finite-difference dP/dtheta, so
  // tighter tolerances would only stall the subdivision
  QuadratureSpec qs;
  qs.abs_tol = 1e-9;
  qs.rel_tol = 1e-9;

  // Antiderivative anchored at the median.
  const double x_med = quantile(model, th, 0.5);
  auto seg = [&](double a, double b) {
    if (a == b) return 0.0;
    double sgn = 1.0;
    if (a > b) {
      std::swap(a, b);
      sgn = -1.0;
    }
    return sgn * integrate(phi_prime, a, b, qs).value;
  };

  // Values of the unnormalized antiderivative on the grid.
  std::vector<double> phi(grid.size());
  if (!grid.empty()) {
    phi[0] = seg(x_med, grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i)
      phi[i] = phi[i - 1] + seg(grid[i - 1], grid[i]);
  }

  // Mean of the anchored antiderivative via integration by parts:
  //   E[Phi~] = int_{x_med}^{hi} (1-P) Phi' dx - int_{lo}^{x_med} P Phi' dx.
  // Substituting x = mu + sigma * shape_fwd(z, xi) turns these into
  // integrals over the full base support, so no tail mass is truncated.
  QuadratureSpec qm;
  qm.abs_tol = 1e-9;
  qm.rel_tol = 1e-9;
  const double z_med = model.base.quantile(0.5);
  auto x_of = [&](double z) {
    return th.mu + th.sigma * detail::shape_fwd(z, th.xi);
  };
  auto dx_dz = [&](double z) { return th.sigma * std::exp(th.xi * z); };
  auto upper = [&](double z) {
    return (1.0 - model.base.cdf(z)) * phi_prime(x_of(z)) * dx_dz(z);
  };
  auto lower = [&](double z) {
    return model.base.cdf(z) * phi_prime(x_of(z)) * dx_dz(z);
  };
  double mean_phi =
      integrate(upper, z_med, model.base.support.hi, qm).value -
      integrate(lower, model.base.support.lo, z_med, qm).value;

  for (double& v : phi) v -= mean_phi;
  return phi;
}

}  // namespace lssw

#endif
