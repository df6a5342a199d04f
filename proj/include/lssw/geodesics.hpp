#ifndef LSSW_GEODESICS_HPP
#define LSSW_GEODESICS_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "lssw/interp.hpp"
#include "lssw/metric.hpp"

namespace lssw {

struct FlatPoint {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

// Discretized geodesic waypoint: quantiles on a u-grid, optional density
// samples, optional membership diagnostic filled by membership_test.
struct PathSample {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> quantiles;
  std::vector<double> x;        // optional density grid
  std::vector<double> density;  // optional density values
};

struct MembershipResult {
  double residual = 0.0;
  ThetaParams fitted;
};

// Flat chart over a shape sub-interval I: angle(xi) = int sqrt(psi), with
// the metric the identity in (u, v, w) = (alpha, beta cos, beta sin).
class FlatChart {
 public:
  FlatChart(LssModel model, double xi_lo, double xi_hi, double xi_ref = 0.0)
      : model_(std::move(model)), lo_(xi_lo), hi_(xi_hi), ref_(xi_ref) {
    if (!(lo_ < hi_) || !(lo_ >= model_.xi_lo) || !(hi_ <= model_.xi_hi))
      throw ChartError("flat_chart: interval must lie inside Xi");
    if (!(ref_ > lo_ && ref_ < hi_))
      throw ChartError("flat_chart: xi_ref must lie inside the interval");
    const int n = 161;
    // Knots span the closed interval; psi is finite there because the MGF
    // pole sits strictly outside Xi, and the quadrature nodes are interior.
    knots_.resize(n);
    raw_.resize(n);
    for (int i = 0; i < n; ++i)
      knots_[i] = lo_ + (hi_ - lo_) * i / (n - 1);
    knots_.back() = hi_;
    raw_[0] = 0.0;
    for (int i = 1; i < n; ++i)
      raw_[i] = raw_[i - 1] + arc(knots_[i - 1], knots_[i]);
    total_ = raw_.back();
    if (!(total_ < 2.0 * 3.141592653589793))
      throw ChartError("flat_chart: total angle must be below 2*pi");
    ref_offset_ = raw_at(ref_);
  }

  const LssModel& model() const { return model_; }
  double xi_ref() const { return ref_; }
  double total_angle() const { return total_; }
  double angle_min() const { return -ref_offset_; }
  double angle_max() const { return total_ - ref_offset_; }

  // angle(xi) = int_{xi_ref}^{xi} sqrt(psi)
  double angle(double xi) const {
    if (!(xi >= lo_ && xi <= hi_))
      throw ChartError("flat_chart: xi outside chart interval");
    return raw_at(xi) - ref_offset_;
  }

  // Inverse of angle(); Newton with analytic derivative sqrt(psi), knot
  // table as the initial bracket.
  double angle_inv(double a) const {
    const double raw = a + ref_offset_;
    if (raw < -1e-12 || raw > total_ + 1e-12)
      throw ChartError("flat_chart: angle outside chart range");
    int j = 0;
    while (j + 2 < (int)knots_.size() && raw_[j + 1] < raw) ++j;
    double lo = knots_[j], hi = knots_[j + 1];
    double xi = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      double err = raw_at(xi) - raw;
      if (err > 0)
        hi = xi;
      else
        lo = xi;
      double d = std::sqrt(std::max(shape_profile(model_, xi).psi, 1e-300));
      double xn = xi - err / d;
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (std::abs(xn - xi) < 1e-14 * (1.0 + std::abs(xi))) return xn;
      xi = xn;
    }
    return xi;
  }

 private:
  double arc(double a, double b) const {
    // psi itself carries ~1e-12 evaluation noise from the xi^-4 MGF
    // combination, so tighter tolerances would only stall the subdivision
    QuadratureSpec qs;
    qs.abs_tol = 1e-11;
    qs.rel_tol = 1e-11;
    auto f = [this](double x) {
      double p = shape_profile(model_, x).psi;
      return std::sqrt(std::max(p, 0.0));
    };
    return integrate(f, a, b, qs).value;
  }

  double raw_at(double xi) const {
    int j = (int)(std::upper_bound(knots_.begin(), knots_.end(), xi) -
                  knots_.begin()) -
            1;
    j = std::clamp(j, 0, (int)knots_.size() - 1);
    if (xi == knots_[j]) return raw_[j];
    return raw_[j] + (xi > knots_[j] ? arc(knots_[j], xi) : -arc(xi, knots_[j]));
  }

  LssModel model_;
  double lo_, hi_, ref_;
  double total_ = 0.0, ref_offset_ = 0.0;
  std::vector<double> knots_, raw_;
};

inline FlatChart flat_chart(const LssModel& model, double xi_lo, double xi_hi,
                            double xi_ref = 0.0) {
  return FlatChart(model, xi_lo, xi_hi, xi_ref);
}

inline FlatPoint omega_to_flat(const FlatChart& chart, const OmegaParams& om) {
  if (!(om.beta > 0.0)) throw ChartError("omega_to_flat: beta must be > 0");
  double a = chart.angle(om.xi);
  return {om.alpha, om.beta * std::cos(a), om.beta * std::sin(a)};
}

inline OmegaParams flat_to_omega(const FlatChart& chart, const FlatPoint& p) {
  double beta = std::hypot(p.v, p.w);
  if (!(beta > 0.0)) throw ChartError("flat_to_omega: point at the cone apex");
  double a = std::atan2(p.w, p.v);
  const double two_pi = 2.0 * 3.141592653589793;
  if (a < chart.angle_min() - 1e-12) a += two_pi;
  if (a > chart.angle_max() + 1e-12) a -= two_pi;
  if (a < chart.angle_min() - 1e-12 || a > chart.angle_max() + 1e-12)
    throw ChartError("flat_to_omega: point outside the chart cone");
  a = std::clamp(a, chart.angle_min(), chart.angle_max());
  return {p.u, beta, chart.angle_inv(a)};
}

namespace detail {

inline FlatPoint lerp(const FlatPoint& a, const FlatPoint& b, double t) {
  return {(1.0 - t) * a.u + t * b.u, (1.0 - t) * a.v + t * b.v,
          (1.0 - t) * a.w + t * b.w};
}

inline bool in_cone(const FlatChart& chart, const FlatPoint& p) {
  double beta = std::hypot(p.v, p.w);
  if (!(beta > 0.0)) return false;
  double a = std::atan2(p.w, p.v);
  const double two_pi = 2.0 * 3.141592653589793;
  if (a < chart.angle_min() - 1e-12) a += two_pi;
  if (a > chart.angle_max() + 1e-12) a -= two_pi;
  return a >= chart.angle_min() - 1e-12 && a <= chart.angle_max() + 1e-12;
}

}  // namespace detail

// Straight line in the flat chart, mapped back to omega coordinates.
inline OmegaParams intrinsic_geodesic(const FlatChart& chart,
                                      const OmegaParams& om1,
                                      const OmegaParams& om2, double t) {
  FlatPoint p1 = omega_to_flat(chart, om1);
  FlatPoint p2 = omega_to_flat(chart, om2);
  FlatPoint pt = detail::lerp(p1, p2, t);
  if (!detail::in_cone(chart, pt)) {
    // locate the first exit parameter for the error report
    double lo = 0.0, hi = t;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (detail::in_cone(chart, detail::lerp(p1, p2, mid)))
        lo = mid;
      else
        hi = mid;
    }
    throw ChartError("intrinsic_geodesic: segment exits the chart cone", hi);
  }
  return flat_to_omega(chart, pt);
}

inline double intrinsic_distance(const FlatChart& chart, const OmegaParams& om1,
                                 const OmegaParams& om2) {
  FlatPoint p1 = omega_to_flat(chart, om1);
  FlatPoint p2 = omega_to_flat(chart, om2);
  double du = p1.u - p2.u, dv = p1.v - p2.v, dw = p1.w - p2.w;
  return std::sqrt(du * du + dv * dv + dw * dw);
}

// Monotone OT map T = P_{theta2}^{-1} o P_{theta1}, evaluated through the
// base variable z so every xi (including 0) follows the same stable path.
inline double ot_map(const LssModel& model, const ThetaParams& th1,
                     const ThetaParams& th2, double x) {
  SupportInterval s = support(model, th1);
  if (!(x > s.lo && x < s.hi))
    throw DomainError("ot_map: x outside source support interior");
  double z = detail::shape_inv((x - th1.mu) / th1.sigma, th1.xi);
  return th2.mu + th2.sigma * detail::shape_fwd(z, th2.xi);
}

// Displacement interpolation: quantile function is the convex combination
// (1-t) P1^{-1} + t P2^{-1}. Density (optional) comes from differentiating
// the monotone cubic interpolant of the quantiles.
inline PathSample displacement_path(const LssModel& model,
                                    const ThetaParams& th1,
                                    const ThetaParams& th2, double t,
                                    const std::vector<double>& u_grid,
                                    bool want_density = false) {
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError("displacement_path: t must be in [0,1]");
  PathSample out;
  out.t = t;
  out.u = u_grid;
  out.quantiles.resize(u_grid.size());
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    out.quantiles[i] = (1.0 - t) * quantile(model, th1, u_grid[i]) +
                       t * quantile(model, th2, u_grid[i]);
  if (want_density && u_grid.size() >= 4) {
    MonotoneCubic q(u_grid, out.quantiles);
    out.x = out.quantiles;
    out.density.resize(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
      double dq = q.deriv(u_grid[i]);
      out.density[i] = dq > 0.0 ? 1.0 / dq : 0.0;
    }
  }
  return out;
}

// Exact 1-D W2 via the quantile representation.
inline double w2_distance(const std::function<double(double)>& q1,
                          const std::function<double(double)>& q2) {
  QuadratureSpec qs;
  qs.rule = QuadratureSpec::Rule::tanh_sinh;
  qs.abs_tol = 1e-13;
  qs.rel_tol = 1e-13;
  auto f = [&](double u) {
    double d = q1(u) - q2(u);
    return d * d;
  };
  double v = integrate(f, 0.0, 1.0, qs).value;
  return std::sqrt(std::max(v, 0.0));
}

// Model overload: both quantile functions factor through the same base
// variable z = F^{-1}(u), so the integral is taken in the z-domain where it
// is smooth and the tails stay resolvable for every shape pair.
inline double w2_distance(const LssModel& model, const ThetaParams& th1,
                          const ThetaParams& th2) {
  QuadratureSpec qs;
  qs.abs_tol = 1e-12;
  qs.rel_tol = 1e-12;
  auto f = [&](double z) {
    double fz = model.base.pdf(z);
    if (!(fz > 0.0)) return 0.0;
    double d = (th1.mu - th2.mu) + th1.sigma * detail::shape_fwd(z, th1.xi) -
               th2.sigma * detail::shape_fwd(z, th2.xi);
    return d * d * fz;
  };
  double v = integrate(f, model.base.support.lo, model.base.support.hi, qs)
                 .value;
  return std::sqrt(std::max(v, 0.0));
}

// Least-squares membership test: fit (mu, sigma, xi) to
// the sampled quantiles; for fixed xi the (mu, sigma) fit is linear in the
// basis {1, (e^{xi F^{-1}(u)} - 1)/xi}.
inline MembershipResult membership_test(const LssModel& model,
                                        const PathSample& point,
                                        int xi_candidates = 121) {
  const std::size_t n = point.u.size();
  if (n < 50 || point.quantiles.size() != n)
    throw FitError("membership_test: need quantiles on >= 50 u-points");

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = model.base.quantile(point.u[i]);

  auto rss_at = [&](double xi) -> std::pair<double, ThetaParams> {
    double sb = 0, sbb = 0, sq = 0, sbq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double b = detail::shape_fwd(z[i], xi);
      sb += b;
      sbb += b * b;
      sq += point.quantiles[i];
      sbq += b * point.quantiles[i];
    }
    double det = n * sbb - sb * sb;
    if (!(std::abs(det) > 0.0))
      return {std::numeric_limits<double>::infinity(), {}};
    double sigma = (n * sbq - sb * sq) / det;
    double mu = (sq - sigma * sb) / n;
    if (!(sigma > 0.0)) return {std::numeric_limits<double>::infinity(), {}};
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = point.quantiles[i] - mu - sigma * detail::shape_fwd(z[i], xi);
      rss += r * r;
    }
    return {rss, ThetaParams{mu, sigma, xi}};
  };

  // Coarse grid over Xi, then golden-section refinement.
  const double pad = 1e-6 * (model.xi_hi - model.xi_lo);
  double best_xi = 0.0, best_rss = std::numeric_limits<double>::infinity();
  for (int i = 0; i < xi_candidates; ++i) {
    double xi = model.xi_lo + pad +
                (model.xi_hi - model.xi_lo - 2 * pad) * i / (xi_candidates - 1);
    auto [rss, th] = rss_at(xi);
    if (rss < best_rss) {
      best_rss = rss;
      best_xi = xi;
    }
  }
  double step = (model.xi_hi - model.xi_lo) / (xi_candidates - 1);
  double lo = std::max(model.xi_lo + pad, best_xi - step);
  double hi = std::min(model.xi_hi - pad, best_xi + step);
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = rss_at(x1).first, f2 = rss_at(x2).first;
  for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = rss_at(x1).first;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = rss_at(x2).first;
    }
  }
  auto [rss, th] = rss_at(0.5 * (lo + hi));
  if (!std::isfinite(rss)) throw FitError("membership_test: fit diverged");
  if (rss > best_rss) {
    th = rss_at(best_xi).second;
    rss = best_rss;
  }
  return {std::sqrt(rss / n), th};
}

}  // namespace lssw

#endif
