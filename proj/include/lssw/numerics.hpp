#ifndef LSSW_NUMERICS_HPP
#define LSSW_NUMERICS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "lssw/errors.hpp"

namespace lssw {

struct QuadratureSpec {
  enum class Rule { gauss_legendre_composite, tanh_sinh };
  Rule rule = Rule::gauss_legendre_composite;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

// 7-point Gauss-Legendre nodes/weights on [-1,1].
inline constexpr double kGL7x[7] = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
inline constexpr double kGL7w[7] = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
    0.1294849661688697};

// 15-point Gauss-Legendre nodes/weights on [-1,1].
inline constexpr double kGL15x[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
inline constexpr double kGL15w[15] = {
    0.03075324199611727, 0.07036604748810812, 0.1071592204671719,
    0.1395706779261543,  0.1662692058169939,  0.1861610000155622,
    0.1984314853271116,  0.2025782419255613,  0.1984314853271116,
    0.1861610000155622,  0.1662692058169939,  0.1395706779261543,
    0.1071592204671719,  0.07036604748810812, 0.03075324199611727};

template <class F>
inline double gl_panel(const F& fn, double a, double b, const double* xs,
                       const double* ws, int n) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = fn(c + r * xs[i]);
    if (std::isfinite(v)) s += ws[i] * v;
  }
  return s * r;
}

// Adaptive bisection with a GL7/GL15 error estimate on a finite interval.
// Segments whose error estimate is at the rounding floor of their own
// absolute integral are treated as converged: splitting them cannot reduce
// the error, it only accumulates more rounding noise.
template <class F>
inline IntegralResult adaptive_gl(const F& fn, double a, double b,
                                  const QuadratureSpec& spec) {
  struct Seg {
    double a, b, est, abs_est, err;
  };
  std::vector<Seg> stack;
  auto make = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double g15 = 0.0, a15 = 0.0;
    for (int i = 0; i < 15; ++i) {
      double v = fn(c + r * kGL15x[i]);
      if (std::isfinite(v)) {
        g15 += kGL15w[i] * v;
        a15 += kGL15w[i] * std::abs(v);
      }
    }
    g15 *= r;
    a15 *= r;
    double g7 = gl_panel(fn, lo, hi, kGL7x, kGL7w, 7);
    return Seg{lo, hi, g15, a15, std::abs(g15 - g7)};
  };
  const double eps = std::numeric_limits<double>::epsilon();
  auto splittable = [&](const Seg& s) {
    return s.err > 8.0 * eps * (s.abs_est + 1e-300);
  };
  stack.push_back(make(a, b));
  double total = stack[0].est;
  int splits = 0, stall = 0;
  double best_err_sum = std::numeric_limits<double>::infinity();
  for (;;) {
    double err_sum = 0.0;
    int worst = -1;
    double worst_err = 0.0;
    for (int i = 0; i < (int)stack.size(); ++i) {
      err_sum += stack[i].err;
      if (splittable(stack[i]) && stack[i].err > worst_err) {
        worst_err = stack[i].err;
        worst = i;
      }
    }
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (err_sum <= tol || worst < 0) return {total, err_sum};
    // When the integrand itself is noisy (e.g. built on finite differences
    // or cancellation-prone special-function combinations), subdividing
    // stops helping at the noise floor; accept the estimate there.
    if (err_sum < 0.9 * best_err_sum) {
      best_err_sum = err_sum;
      stall = 0;
    } else if (++stall > 50) {
      return {total, err_sum};
    }
    if (++splits > spec.max_subdivisions)
      throw NonConvergence("integrate: subdivision budget exhausted");
    Seg s = stack[worst];
    stack.erase(stack.begin() + worst);
    double mid = 0.5 * (s.a + s.b);
    Seg l = make(s.a, mid), r = make(mid, s.b);
    total += l.est + r.est - s.est;
    stack.push_back(l);
    stack.push_back(r);
  }
}

// tanh-sinh quadrature on a finite open interval; robust to integrable
// endpoint singularities. Node positions near the endpoints are computed
// as distances from the endpoint to keep them resolvable in doubles.
template <class F>
inline IntegralResult tanh_sinh(const F& fn, double a, double b,
                                const QuadratureSpec& spec) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const double pi_half = 1.5707963267948966;
  double h = 1.0;
  auto eval_level = [&](double step, bool odd_only) {
    // sum of w_k f(x_k) for k*step, k >= 1 (and k = 0 unless odd_only)
    double s = 0.0;
    int kstart = odd_only ? 1 : 0;
    int kstride = odd_only ? 2 : 1;
    for (int k = kstart;; k += kstride) {
      double t = k * step;
      double u = pi_half * std::sinh(t);
      double w = pi_half * std::cosh(t) / std::pow(std::cosh(u), 2);
      if (w < 1e-300) break;
      if (k == 0) {
        double v = fn(c);
        if (std::isfinite(v)) s += w * v;
        continue;
      }
      // distance from endpoint: r (1 - tanh u) = 2 r / (e^{2u} + 1)
      double d = 2.0 * r / (std::exp(2.0 * u) + 1.0);
      if (d <= 0.0) break;
      double xp = b - d, xm = a + d;
      if (xp < b) {
        double v = fn(xp);
        if (std::isfinite(v)) s += w * v;
      }
      if (xm > a) {
        double v = fn(xm);
        if (std::isfinite(v)) s += w * v;
      }
      if (t > 6.5) break;  // u > pi/2 sinh(6.5), weights below 1e-300 soon
    }
    return s;
  };
  double sum = eval_level(h, false);
  double prev = h * r * sum;
  double est = prev, err = std::abs(prev);
  const int max_levels = 12;
  for (int lvl = 1; lvl <= max_levels; ++lvl) {
    h *= 0.5;
    sum += eval_level(h, true);
    est = h * r * sum;
    err = std::abs(est - prev);
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(est));
    if (lvl >= 3 && err <= tol) return {est, err};
    prev = est;
  }
  double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(est));
  if (err > 1e3 * tol)
    throw NonConvergence("integrate: tanh-sinh did not reach tolerance");
  return {est, err};
}

}  // namespace detail

// Integrate fn over (lo, hi); infinite endpoints are mapped to a finite
// interval by rational substitutions before the rule is applied.
inline IntegralResult integrate(const std::function<double(double)>& fn,
                                double lo, double hi,
                                const QuadratureSpec& spec = {}) {
  if (!(lo < hi)) throw DomainError("integrate: requires lo < hi");
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) ||
      spec.max_subdivisions < 1)
    throw DomainError("integrate: invalid QuadratureSpec");

  const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
  std::function<double(double)> g;
  double a, b;
  if (!lo_inf && !hi_inf) {
    g = fn;
    a = lo;
    b = hi;
  } else if (lo_inf && hi_inf) {
    // x = t/(1-t^2), dx = (1+t^2)/(1-t^2)^2, t in (-1,1)
    g = [&fn](double t) {
      double q = 1.0 - t * t;
      return fn(t / q) * (1.0 + t * t) / (q * q);
    };
    a = -1.0;
    b = 1.0;
  } else if (!lo_inf && hi_inf) {
    // x = lo + t/(1-t), dx = 1/(1-t)^2, t in (0,1)
    g = [&fn, lo](double t) {
      double q = 1.0 - t;
      return fn(lo + t / q) / (q * q);
    };
    a = 0.0;
    b = 1.0;
  } else {
    g = [&fn, hi](double t) {
      double q = 1.0 - t;
      return fn(hi - t / q) / (q * q);
    };
    a = 0.0;
    b = 1.0;
  }

  if (spec.rule == QuadratureSpec::Rule::tanh_sinh)
    return detail::tanh_sinh(g, a, b, spec);
  return detail::adaptive_gl(g, a, b, spec);
}

struct DiffSpec {
  double base_step = 1e-2;
  int richardson_levels = 4;
};

struct DerivResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

inline double central_stencil(const std::function<double(double)>& fn, double x,
                              int order, double h) {
  switch (order) {
    case 1:
      return (fn(x + h) - fn(x - h)) / (2.0 * h);
    case 2:
      return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
    case 3:
      return (fn(x + 2.0 * h) - 2.0 * fn(x + h) + 2.0 * fn(x - h) -
              fn(x - 2.0 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (fn(x + 2.0 * h) - 4.0 * fn(x + h) + 6.0 * fn(x) -
              4.0 * fn(x - h) + fn(x - 2.0 * h)) /
             (h * h * h * h);
    default:
      throw DomainError("derivative: order must be in 1..4");
  }
}

}  // namespace detail

// Richardson-extrapolated central differences (Ridders' scheme): contract
// the step gently (factor 1.4) from an order-dependent initial step, build
// the extrapolation tableau, and return the entry with the smallest
// step-contraction error estimate. The gentle contraction keeps the small
// steps above the rounding floor eps/h^order of the raw stencils.
inline DerivResult derivative(const std::function<double(double)>& fn, double x,
                              int order, const DiffSpec& spec = {}) {
  if (order < 1 || order > 4) throw DomainError("derivative: order must be in 1..4");
  if (!(spec.base_step > 0.0 && spec.base_step < 1.0))
    throw DomainError("derivative: base_step must lie in (0,1)");
  if (spec.richardson_levels < 1 || spec.richardson_levels > 6)
    throw DomainError("derivative: richardson_levels must be in 1..6");

  // Higher orders divide by h^order, so they need a larger starting step to
  // stay clear of cancellation noise.
  const double h0 = std::pow(spec.base_step, 2.0 / (order + 2.0));
  const double con = 1.4, con2 = con * con;
  const int n = 2 * spec.richardson_levels + 4;
  std::vector<std::vector<double>> tab(n);
  double best = 0.0, best_err = std::numeric_limits<double>::infinity();
  double h = h0;
  for (int i = 0; i < n; ++i, h /= con) {
    tab[i].resize(i + 1);
    tab[i][0] = detail::central_stencil(fn, x, order, h);
    if (!std::isfinite(tab[i][0]))
      throw DomainError("derivative: fn not evaluable on the stencil");
    if (i == 0) best = tab[0][0];
    double fac = con2;
    for (int j = 1; j <= i; ++j, fac *= con2) {
      tab[i][j] = (fac * tab[i][j - 1] - tab[i - 1][j - 1]) / (fac - 1.0);
      double err = std::max(std::abs(tab[i][j] - tab[i][j - 1]),
                            std::abs(tab[i][j] - tab[i - 1][j - 1]));
      if (err <= best_err) {
        best_err = err;
        best = tab[i][j];
      }
    }
  }
  if (!std::isfinite(best_err)) best_err = std::abs(best);
  return {best, best_err};
}

}  // namespace lssw

#endif
