#ifndef LSSW_INTERP_HPP
#define LSSW_INTERP_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "lssw/errors.hpp"

namespace lssw {

// Monotone cubic (PCHIP, Fritsch-Carlson) interpolant. If the data are
// monotone, so is the interpolant; evaluation gives value and derivative.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const int n = (int)x_.size();
    if (n < 2 || y_.size() != x_.size())
      throw ValidationError("MonotoneCubic: need >= 2 matching nodes");
    for (int i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1]))
        throw ValidationError("MonotoneCubic: abscissae must be increasing");
    d_.resize(n);
    std::vector<double> h(n - 1), delta(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
    } else {
      for (int i = 1; i < n - 1; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
          d_[i] = 0.0;
        } else {
          double w1 = 2.0 * h[i] + h[i - 1];
          double w2 = h[i] + 2.0 * h[i - 1];
          d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
      }
      d_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
      d_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
  }

  double operator()(double x) const { return eval(x).first; }
  double deriv(double x) const { return eval(x).second; }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

  std::pair<double, double> eval(double x) const {
    const int n = (int)x_.size();
    int i = (int)(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    i = std::clamp(i, 0, n - 2);
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double y0 = y_[i], y1 = y_[i + 1], m0 = d_[i] * h, m1 = d_[i + 1] * h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    double v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
    const double dh00 = 6 * s2 - 6 * s, dh10 = 3 * s2 - 4 * s + 1;
    const double dh01 = -6 * s2 + 6 * s, dh11 = 3 * s2 - 2 * s;
    double dv = (dh00 * y0 + dh10 * m0 + dh01 * y1 + dh11 * m1) / h;
    return {v, dv};
  }

 private:
  static double edge_slope(double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace lssw

#endif
