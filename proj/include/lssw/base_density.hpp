#ifndef LSSW_BASE_DENSITY_HPP
#define LSSW_BASE_DENSITY_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "lssw/errors.hpp"
#include "lssw/interp.hpp"
#include "lssw/numerics.hpp"
#include "lssw/special.hpp"

namespace lssw {

struct SupportInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;
};

struct OpenInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double t) const { return t > lo && t < hi; }
};

// The generator density f together with everything the model formulas pull
// from it: F, the quantile F^{-1}, and the MGF derivatives M_f^{(k)}.
struct BaseDensity {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;        // argument in (0,1)
  std::function<double(int, double)> mgf_deriv;  // (k in 0..4, t)
  OpenInterval mgf_domain;
  SupportInterval support;
  int smoothness = 4;  // declarative C^4 requirement, not enforced
};

// Standard Gumbel generator: f(z) = e^{-z} exp(-e^{-z}), M_f(t) = Gamma(1-t).
inline BaseDensity gumbel() {
  BaseDensity b;
  b.pdf = [](double z) { return std::exp(-z - std::exp(-z)); };
  b.cdf = [](double z) { return std::exp(-std::exp(-z)); };
  b.quantile = [](double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("gumbel quantile: u must be in (0,1)");
    return -std::log(-std::log(u));
  };
  b.mgf_deriv = [](int k, double t) {
    if (!(t < 1.0)) throw DomainError("gumbel mgf: requires t < 1");
    if (k < 0 || k > 4) throw DomainError("gumbel mgf: order must be in 0..4");
    // d^k/dt^k Gamma(1-t) = (-1)^k Gamma^{(k)}(1-t)
    double s = (k % 2 == 0) ? 1.0 : -1.0;
    return s * gamma_deriv(k, 1.0 - t);
  };
  b.mgf_domain = {-std::numeric_limits<double>::infinity(), 1.0};
  b.support = {-std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(), false, false};
  return b;
}

// Standard exponential generator: f(z) = e^{-z} on z >= 0, M_f(t) = 1/(1-t).
inline BaseDensity exponential() {
  BaseDensity b;
  b.pdf = [](double z) { return z >= 0.0 ? std::exp(-z) : 0.0; };
  b.cdf = [](double z) { return z >= 0.0 ? -std::expm1(-z) : 0.0; };
  b.quantile = [](double u) {
    if (!(u > 0.0 && u < 1.0))
      throw DomainError("exponential quantile: u must be in (0,1)");
    return -std::log1p(-u);
  };
  b.mgf_deriv = [](int k, double t) {
    if (!(t < 1.0)) throw DomainError("exponential mgf: requires t < 1");
    if (k < 0 || k > 4) throw DomainError("exponential mgf: order must be in 0..4");
    static const double fact[5] = {1, 1, 2, 6, 24};
    return fact[k] * std::pow(1.0 - t, -(k + 1));
  };
  b.mgf_domain = {-std::numeric_limits<double>::infinity(), 1.0};
  b.support = {0.0, std::numeric_limits<double>::infinity(), true, false};
  return b;
}

namespace detail {

// Maps an arbitrary (possibly unbounded) support onto (0,1) for knot
// placement in the custom-density constructor.
struct SupportMap {
  double lo, hi;
  bool lo_inf, hi_inf;
  double x(double t) const {
    if (lo_inf && hi_inf) return std::tan(3.141592653589793 * (t - 0.5));
    if (hi_inf) return lo + t / (1.0 - t);
    if (lo_inf) return hi - (1.0 - t) / t;
    return lo + t * (hi - lo);
  }
};

}  // namespace detail

// Generic constructor: cdf by cumulative quadrature with monotone
// interpolation, quantile by Newton/bisection on the interpolant, MGF
// derivatives by quadrature of z^k e^{tz} pdf(z).
inline BaseDensity custom(std::function<double(double)> pdf,
                          SupportInterval support, OpenInterval mgf_domain) {
  if (!mgf_domain.contains(0.0))
    throw ValidationError("custom: mgf_domain must contain 0");

  QuadratureSpec qs;
  double mass = integrate(pdf, support.lo, support.hi, qs).value;
  if (std::abs(mass - 1.0) > 1e-8)
    throw ValidationError("custom: pdf does not integrate to 1");

  // Cumulative quadrature on a graded knot grid.
  detail::SupportMap map{support.lo, support.hi, std::isinf(support.lo),
                         std::isinf(support.hi)};
  const int n = 1501;
  const double t0 = 1e-8, t1 = 1.0 - 1e-8;
  std::vector<double> xs(n), cs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = map.x(t0 + (t1 - t0) * i / (n - 1));
  cs[0] = integrate(pdf, support.lo, xs[0], qs).value;
  for (int i = 1; i < n; ++i) {
    double inc = detail::gl_panel(pdf, xs[i - 1], xs[i], detail::kGL15x,
                                  detail::kGL15w, 15);
    cs[i] = cs[i - 1] + std::max(0.0, inc);
  }
  // Renormalize so the interpolated cdf tops out at the true total mass.
  double top = cs[n - 1] +
               (std::isinf(support.hi)
                    ? integrate(pdf, xs[n - 1],
                                std::numeric_limits<double>::infinity(), qs)
                          .value
                    : integrate(pdf, xs[n - 1], support.hi, qs).value);
  for (int i = 0; i < n; ++i) cs[i] /= top;

  // Strictly increasing knots for the interpolant.
  std::vector<double> kx, kc;
  kx.reserve(n);
  kc.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (kc.empty() || cs[i] > kc.back() + 1e-15) {
      kx.push_back(xs[i]);
      kc.push_back(cs[i]);
    }
  }
  auto interp = std::make_shared<MonotoneCubic>(kx, kc);
  auto pdf_sh = std::make_shared<std::function<double(double)>>(std::move(pdf));

  BaseDensity b;
  b.pdf = [pdf_sh](double z) { return (*pdf_sh)(z); };
  b.cdf = [interp, support](double z) {
    if (z <= interp->x_min())
      return z < support.lo ? 0.0 : std::max(0.0, (*interp)(interp->x_min()));
    if (z >= interp->x_max()) return z > support.hi ? 1.0 : (*interp)(interp->x_max());
    return std::clamp((*interp)(z), 0.0, 1.0);
  };
  b.quantile = [interp, pdf_sh](double u) {
    if (!(u > 0.0 && u < 1.0))
      throw DomainError("custom quantile: u must be in (0,1)");
    double lo = interp->x_min(), hi = interp->x_max();
    double flo = (*interp)(lo), fhi = (*interp)(hi);
    if (u <= flo) return lo;
    if (u >= fhi) return hi;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      auto [v, dv] = interp->eval(x);
      double err = v - u;
      if (err > 0)
        hi = x;
      else
        lo = x;
      double step = dv > 0 ? err / dv : 0.0;
      double xn = x - step;
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (std::abs(xn - x) < 1e-14 * (1.0 + std::abs(x))) return xn;
      x = xn;
    }
    return x;
  };
  b.mgf_deriv = [pdf_sh, support, mgf_domain](int k, double t) {
    if (k < 0 || k > 4) throw DomainError("custom mgf: order must be in 0..4");
    if (!mgf_domain.contains(t)) throw DomainError("custom mgf: t outside mgf_domain");
    QuadratureSpec qs;
    auto f = [pdf_sh, k, t](double z) {
      double zk = 1.0;
      for (int i = 0; i < k; ++i) zk *= z;
      return zk * std::exp(t * z) * (*pdf_sh)(z);
    };
    return integrate(f, support.lo, support.hi, qs).value;
  };
  b.mgf_domain = mgf_domain;
  b.support = support;
  return b;
}

}  // namespace lssw

#endif
