#ifndef LSSW_LSS_MODEL_HPP
#define LSSW_LSS_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "lssw/base_density.hpp"
#include "lssw/rng.hpp"

namespace lssw {

struct ThetaParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

// Location-scale-shape model: base generator plus the open shape interval.
struct LssModel {
  BaseDensity base;
  double xi_lo = -0.45;
  double xi_hi = 0.45;

  bool xi_in_range(double xi) const { return xi > xi_lo && xi < xi_hi; }
};

inline LssModel make_model(BaseDensity base, double xi_lo = -0.45,
                           double xi_hi = 0.45) {
  if (!(xi_lo < 0.0 && 0.0 < xi_hi))
    throw ValidationError("make_model: shape interval must contain 0");
  // The closed forms need M_f to exist on 2*Xi.
  if (!base.mgf_domain.contains(2.0 * xi_lo) ||
      !base.mgf_domain.contains(2.0 * xi_hi))
    throw ValidationError("make_model: 2*Xi must lie inside the MGF domain");
  return LssModel{std::move(base), xi_lo, xi_hi};
}

inline LssModel gev_model(double xi_lo = -0.45, double xi_hi = 0.45) {
  return make_model(gumbel(), xi_lo, xi_hi);
}

inline LssModel gpd_model(double xi_lo = -0.45, double xi_hi = 0.45) {
  return make_model(exponential(), xi_lo, xi_hi);
}

namespace detail {

// (e^{xi z} - 1)/xi, continuous in xi through 0.
inline double shape_fwd(double z, double xi) {
  if (xi == 0.0) return z;
  return std::expm1(xi * z) / xi;
}

// log(1 + xi a)/xi, inverse of shape_fwd.
inline double shape_inv(double a, double xi) {
  if (xi == 0.0) return a;
  return std::log1p(xi * a) / xi;
}

}  // namespace detail

inline SupportInterval support(const LssModel& model, const ThetaParams& th) {
  const SupportInterval& bs = model.base.support;
  const double xi = th.xi;
  auto map_end = [&](double z) -> double {
    if (std::isinf(z)) {
      if (xi == 0.0) return z;
      // e^{xi z} -> inf on the side matching sign(xi), else -> 0
      if ((xi > 0.0) == (z > 0.0))
        return z > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      return th.mu - th.sigma / xi;
    }
    return th.mu + th.sigma * detail::shape_fwd(z, xi);
  };
  double lo = map_end(bs.lo), hi = map_end(bs.hi);
  SupportInterval out;
  out.lo = lo;
  out.hi = hi;
  out.lo_closed = std::isfinite(lo);
  out.hi_closed = std::isfinite(hi);
  return out;
}

// Model density p(x; theta); returns 0 outside the support.
inline double density(const LssModel& model, const ThetaParams& th, double x) {
  const double a = (x - th.mu) / th.sigma;
  if (th.xi == 0.0) return model.base.pdf(a) / th.sigma;
  const double t = 1.0 + th.xi * a;
  if (!(t > 0.0)) return 0.0;
  const double z = detail::shape_inv(a, th.xi);
  return model.base.pdf(z) / (th.sigma * t);
}

inline double cdf(const LssModel& model, const ThetaParams& th, double x) {
  const double a = (x - th.mu) / th.sigma;
  if (th.xi == 0.0) return std::clamp(model.base.cdf(a), 0.0, 1.0);
  const double t = 1.0 + th.xi * a;
  if (!(t > 0.0)) return th.xi > 0.0 ? 0.0 : 1.0;
  return std::clamp(model.base.cdf(detail::shape_inv(a, th.xi)), 0.0, 1.0);
}

// P_theta^{-1}(u) = sigma/xi (exp(xi F^{-1}(u)) - 1) + mu.
inline double quantile(const LssModel& model, const ThetaParams& th, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must be in (0,1)");
  const double z = model.base.quantile(u);
  return th.mu + th.sigma * detail::shape_fwd(z, th.xi);
}

// Inverse-transform sampling through the Lemma-1 change of variables,
// deterministic in (seed, n).
inline std::vector<double> sample(const LssModel& model, const ThetaParams& th,
                                  std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample: n must be >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = quantile(model, th, uniform01(seed, i));
  return out;
}

namespace detail {

// Series switch for the xi^-k combinations that cancel catastrophically.
inline constexpr double kSmallXi = 1e-3;

struct MgfAtZero {
  double m1, m2, m3, m4;
};

inline MgfAtZero mgf_moments(const BaseDensity& b) {
  return {b.mgf_deriv(1, 0.0), b.mgf_deriv(2, 0.0), b.mgf_deriv(3, 0.0),
          b.mgf_deriv(4, 0.0)};
}

// m_xi = (M(xi) - 1)/xi with series continuation through xi = 0.
inline double m_shape(const BaseDensity& b, double xi) {
  if (std::abs(xi) >= kSmallXi)
    return (b.mgf_deriv(0, xi) - 1.0) / xi;
  auto m = mgf_moments(b);
  return m.m1 + xi * (m.m2 / 2.0 + xi * (m.m3 / 6.0 + xi * m.m4 / 24.0));
}

// s_xi^2 = (M(2 xi) - M(xi)^2)/xi^2.
inline double s2_shape(const BaseDensity& b, double xi) {
  if (std::abs(xi) >= kSmallXi) {
    double mx = b.mgf_deriv(0, xi);
    return (b.mgf_deriv(0, 2.0 * xi) - mx * mx) / (xi * xi);
  }
  auto m = mgf_moments(b);
  double c0 = m.m2 - m.m1 * m.m1;
  double c1 = m.m3 - m.m1 * m.m2;
  double c2 = 7.0 / 12.0 * m.m4 - m.m1 * m.m3 / 3.0 - m.m2 * m.m2 / 4.0;
  return c0 + xi * (c1 + xi * c2);
}

}  // namespace detail

// E[g(X)] computed in the base variable: u = F(z) is an exact change of
// variables, and unlike quantile-domain integration the z-domain integrand
// stays smooth and resolvable right into the tails for every shape.
inline double expectation(const LssModel& model, const ThetaParams& th,
                          const std::function<double(double)>& g,
                          const QuadratureSpec& spec = {}) {
  auto integrand = [&](double z) {
    double fz = model.base.pdf(z);
    if (!(fz > 0.0)) return 0.0;
    double x = th.mu + th.sigma * detail::shape_fwd(z, th.xi);
    if (th.xi != 0.0) {
      // extreme z can round x onto the support boundary; the density there
      // is far below resolvable mass, so the contribution is dropped
      double t = 1.0 + th.xi * (x - th.mu) / th.sigma;
      if (!(t > 0.0)) return 0.0;
    }
    double v;
    try {
      v = g(x);
    } catch (const DomainError&) {
      return 0.0;
    }
    return std::isfinite(v) ? v * fz : 0.0;
  };
  return integrate(integrand, model.base.support.lo, model.base.support.hi,
                   spec)
      .value;
}

// (E[X], V[X]) from the MGF displays, with series limits through xi = 0.
inline std::pair<double, double> mean_var(const LssModel& model,
                                          const ThetaParams& th) {
  if (!model.base.mgf_domain.contains(2.0 * th.xi))
    throw DomainError("mean_var: MGF undefined at 2*xi");
  double m = detail::m_shape(model.base, th.xi);
  double s2 = detail::s2_shape(model.base, th.xi);
  return {th.mu + th.sigma * m, th.sigma * th.sigma * s2};
}

// Cor-1 moment identity: E[T^r (log T)^k] = xi^k M_f^{(k)}(r xi).
inline double moment_T(const LssModel& model, const ThetaParams& th, double r,
                       int k) {
  if (th.xi == 0.0) throw DomainError("moment_T: requires xi != 0");
  if (r < 0.0) throw DomainError("moment_T: requires r >= 0");
  if (k < 0 || k > 4) throw DomainError("moment_T: k must be in 0..4");
  if (!model.base.mgf_domain.contains(r * th.xi))
    throw DomainError("moment_T: r*xi outside MGF domain");
  double xik = 1.0;
  for (int i = 0; i < k; ++i) xik *= th.xi;
  return xik * model.base.mgf_deriv(k, r * th.xi);
}

}  // namespace lssw

#endif
