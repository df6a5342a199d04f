#ifndef LSSW_METRIC_HPP
#define LSSW_METRIC_HPP

#include <array>
#include <cmath>

#include "lssw/scores.hpp"

namespace lssw {

struct OmegaParams {
  double alpha = 0.0;  // mean coordinate
  double beta = 1.0;   // standard-deviation coordinate
  double xi = 0.0;
};

struct ShapeProfile {
  double m = 0.0;        // m_xi
  double s = 1.0;        // s_xi
  double m_prime = 0.0;  // d m_xi / d xi
  double s_prime = 0.0;  // d s_xi / d xi
  double psi = 0.0;      // warped-product coefficient
};

enum class Chart { theta, omega, flat };

struct Metric3 {
  std::array<std::array<double, 3>, 3> m{};
  Chart chart = Chart::theta;

  double operator()(int i, int j) const { return m[i][j]; }
  double& at(int i, int j) { return m[i][j]; }
};

// Eigenvalues of a symmetric 3x3 matrix (trigonometric method), ascending.
inline std::array<double, 3> eigenvalues_sym3(const Metric3& g) {
  const auto& a = g.m;
  double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
              (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  if (p2 <= 0.0) return {a[0][0], a[1][1], a[2][2]};
  double p = std::sqrt(p2 / 6.0);
  // det((A - qI)/p) / 2
  std::array<std::array<double, 3>, 3> b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  double r = std::clamp(detb / 2.0, -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  double e1 = q + 2.0 * p * std::cos(phi);
  double e3 = q + 2.0 * p * std::cos(phi + 2.0 * 3.141592653589793 / 3.0);
  double e2 = 3.0 * q - e1 - e3;
  return {e3, e2, e1};
}

namespace detail {

inline void check_mgf_2xi(const LssModel& model, double xi) {
  if (!model.base.mgf_domain.contains(2.0 * xi))
    throw DomainError("metric: MGF undefined at 2*xi");
}

// The xi^-4 combination in I_33 and psi:
//   K = xi^2 M''(2xi) - 2 xi M'(2xi) + 2 xi M'(xi) + M(2xi) - 2 M(xi) + 1,
// returned as K/xi^4, with the series value m4/4 below the switch.
inline double k_over_xi4(const BaseDensity& b, double xi) {
  if (std::abs(xi) >= kSmallXi) {
    double K = xi * xi * b.mgf_deriv(2, 2.0 * xi) -
               2.0 * xi * b.mgf_deriv(1, 2.0 * xi) +
               2.0 * xi * b.mgf_deriv(1, xi) + b.mgf_deriv(0, 2.0 * xi) -
               2.0 * b.mgf_deriv(0, xi) + 1.0;
    return K / (xi * xi * xi * xi);
  }
  return mgf_moments(b).m4 / 4.0;
}

// m'_xi = (xi M'(xi) - M(xi) + 1)/xi^2.
inline double m_prime_shape(const BaseDensity& b, double xi) {
  if (std::abs(xi) >= kSmallXi)
    return (xi * b.mgf_deriv(1, xi) - b.mgf_deriv(0, xi) + 1.0) / (xi * xi);
  auto m = mgf_moments(b);
  return m.m2 / 2.0 + xi * (m.m3 / 3.0 + xi * m.m4 / 8.0);
}

// d(s_xi^2)/dxi.
inline double s2_prime_shape(const BaseDensity& b, double xi) {
  if (std::abs(xi) >= kSmallXi) {
    double mx = b.mgf_deriv(0, xi);
    double num = xi * (2.0 * b.mgf_deriv(1, 2.0 * xi) -
                       2.0 * mx * b.mgf_deriv(1, xi)) -
                 2.0 * (b.mgf_deriv(0, 2.0 * xi) - mx * mx);
    return num / (xi * xi * xi);
  }
  auto m = mgf_moments(b);
  double c1 = m.m3 - m.m1 * m.m2;
  double c2 = 7.0 / 12.0 * m.m4 - m.m1 * m.m3 / 3.0 - m.m2 * m.m2 / 4.0;
  return c1 + 2.0 * c2 * xi;
}

// (M(2xi) - 2 M(xi) + 1)/xi^2, the I_22 entry at sigma = 1.
inline double i22_shape(const BaseDensity& b, double xi) {
  if (std::abs(xi) >= kSmallXi)
    return (b.mgf_deriv(0, 2.0 * xi) - 2.0 * b.mgf_deriv(0, xi) + 1.0) /
           (xi * xi);
  auto m = mgf_moments(b);
  return m.m2 + xi * (m.m3 + xi * 7.0 / 12.0 * m.m4);
}

// (xi M'(2xi) - xi M'(xi) - M(2xi) + 2 M(xi) - 1)/xi^3, the I_23 entry at
// sigma = 1.
inline double i23_shape(const BaseDensity& b, double xi) {
  if (std::abs(xi) >= kSmallXi) {
    double num = xi * b.mgf_deriv(1, 2.0 * xi) - xi * b.mgf_deriv(1, xi) -
                 b.mgf_deriv(0, 2.0 * xi) + 2.0 * b.mgf_deriv(0, xi) - 1.0;
    return num / (xi * xi * xi);
  }
  auto m = mgf_moments(b);
  return m.m3 / 2.0 + xi * 7.0 / 12.0 * m.m4;
}

}  // namespace detail

// Per-xi scalars of the omega chart and the warped-product coefficient psi.
inline ShapeProfile shape_profile(const LssModel& model, double xi) {
  detail::check_mgf_2xi(model, xi);
  ShapeProfile p;
  p.m = detail::m_shape(model.base, xi);
  double s2 = detail::s2_shape(model.base, xi);
  if (!(s2 > 0.0)) throw DomainError("shape_profile: nonpositive variance");
  p.s = std::sqrt(s2);
  p.m_prime = detail::m_prime_shape(model.base, xi);
  p.s_prime = detail::s2_prime_shape(model.base, xi) / (2.0 * p.s);
  p.psi = (detail::k_over_xi4(model.base, xi) -
           (p.s_prime * p.s_prime + p.m_prime * p.m_prime)) /
          s2;
  return p;
}

// Closed-form Wasserstein information matrix in the theta chart.
inline Metric3 wim_theta(const LssModel& model, const ThetaParams& th) {
  detail::check_mgf_2xi(model, th.xi);
  const BaseDensity& b = model.base;
  const double xi = th.xi, sg = th.sigma;
  Metric3 g;
  g.chart = Chart::theta;
  g.at(0, 0) = 1.0;
  g.at(0, 1) = detail::m_shape(b, xi);
  g.at(0, 2) = sg * detail::m_prime_shape(b, xi);
  g.at(1, 1) = detail::i22_shape(b, xi);
  g.at(1, 2) = sg * detail::i23_shape(b, xi);
  g.at(2, 2) = sg * sg * detail::k_over_xi4(b, xi);
  g.at(1, 0) = g.at(0, 1);
  g.at(2, 0) = g.at(0, 2);
  g.at(2, 1) = g.at(1, 2);
  return g;
}

// Quadrature oracle for the WIM: I_ij = E[dPhi_i/dx * dPhi_j/dx], taken in
// the base-variable domain where the integrand is smooth for every shape.
inline Metric3 wim_numeric(const LssModel& model, const ThetaParams& th) {
  detail::check_mgf_2xi(model, th.xi);
  QuadratureSpec qs;
  qs.abs_tol = 1e-12;
  qs.rel_tol = 1e-12;
  const ScoreIndex idx[3] = {ScoreIndex::mu, ScoreIndex::sigma, ScoreIndex::xi};
  Metric3 g;
  g.chart = Chart::theta;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      double v = expectation(
          model, th,
          [&](double x) {
            return score_dx(model, th, idx[i], x) *
                   score_dx(model, th, idx[j], x);
          },
          qs);
      g.at(i, j) = v;
      g.at(j, i) = v;
    }
  }
  return g;
}

inline OmegaParams theta_to_omega(const LssModel& model, const ThetaParams& th) {
  ShapeProfile p = shape_profile(model, th.xi);
  return {th.mu + th.sigma * p.m, th.sigma * p.s, th.xi};
}

inline ThetaParams omega_to_theta(const LssModel& model, const OmegaParams& om) {
  ShapeProfile p = shape_profile(model, om.xi);
  return {om.alpha - p.m / p.s * om.beta, om.beta / p.s, om.xi};
}

// Prop-3 diagonal form of the metric in the omega chart.
inline Metric3 wim_omega(const LssModel& model, const OmegaParams& om) {
  ShapeProfile p = shape_profile(model, om.xi);
  Metric3 g;
  g.chart = Chart::omega;
  g.at(0, 0) = 1.0;
  g.at(1, 1) = 1.0;
  g.at(2, 2) = om.beta * om.beta * p.psi;
  return g;
}

}  // namespace lssw

#endif
