#ifndef LSSW_SPECIAL_HPP
#define LSSW_SPECIAL_HPP

#include <cmath>
#include <cstdlib>

#include "lssw/errors.hpp"

namespace lssw {

// Polygamma functions psi_n(x) for n = 0..3 and x > 0.
//
// Uses the upward recurrence psi_n(x) = psi_n(x+1) + (-1)^(n+1) n!/x^(n+1)
// to push the argument above 10, then the asymptotic expansion
//   psi_n(x) ~ (-1)^(n-1) [ (n-1)!/x^n + n!/(2 x^(n+1))
//                           + sum_k B_{2k} (2k+n-1)!/((2k)! x^(2k+n)) ].
inline double polygamma(int n, double x) {
  if (!(x > 0.0)) throw DomainError("polygamma: requires x > 0");
  if (n < 0 || n > 3) throw DomainError("polygamma: order must be in 0..3");

  static const double kBern2k[8] = {
      1.0 / 6.0,   -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
      5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};

  const double fact_n = (n == 0) ? 1.0 : (n == 1) ? 1.0 : (n == 2) ? 2.0 : 6.0;

  double acc = 0.0;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^(n+1) * (-1) bookkeeping below
  while (x < 10.0) {
    // psi_n(x) = psi_n(x+1) + (-1)^(n+1) n!/x^(n+1)
    acc += ((n % 2 == 0) ? -1.0 : 1.0) * fact_n / std::pow(x, n + 1);
    x += 1.0;
  }
  (void)sign;

  double result;
  if (n == 0) {
    result = std::log(x) - 0.5 / x;
    double x2 = 1.0 / (x * x), p = x2;
    for (int k = 1; k <= 8; ++k) {
      result -= kBern2k[k - 1] / (2.0 * k) * p;
      p *= x2;
    }
  } else {
    // (2k+n-1)!/(2k)! as a running product.
    double s = fact_n / std::pow(x, n) / n + fact_n / (2.0 * std::pow(x, n + 1));
    double x2 = 1.0 / (x * x), p = std::pow(x, -n - 2);
    for (int k = 1; k <= 8; ++k) {
      double ratio = 1.0;  // (2k+n-1)! / (2k)!
      for (int j = 2 * k + 1; j <= 2 * k + n - 1; ++j) ratio *= j;
      s += kBern2k[k - 1] * ratio * p;
      p *= x2;
    }
    result = ((n % 2 == 1) ? 1.0 : -1.0) * s;
  }
  return result + acc;
}

inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }

// k-th derivative of the Gamma function, k = 0..4, expressed through
// Gamma and polygamma: G' = G p0, G'' = G (p0^2 + p1), ...
inline double gamma_deriv(int k, double x) {
  if (!(x > 0.0)) throw DomainError("gamma_deriv: requires x > 0");
  const double g = std::tgamma(x);
  if (k == 0) return g;
  const double p0 = polygamma(0, x);
  if (k == 1) return g * p0;
  const double p1 = polygamma(1, x);
  if (k == 2) return g * (p0 * p0 + p1);
  const double p2 = polygamma(2, x);
  if (k == 3) return g * (p0 * p0 * p0 + 3.0 * p0 * p1 + p2);
  const double p3 = polygamma(3, x);
  if (k == 4)
    return g * (p0 * p0 * p0 * p0 + 6.0 * p0 * p0 * p1 + 3.0 * p1 * p1 +
                4.0 * p0 * p2 + p3);
  throw DomainError("gamma_deriv: order must be in 0..4");
}

}  // namespace lssw

#endif
