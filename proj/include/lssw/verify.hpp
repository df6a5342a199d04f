#ifndef LSSW_VERIFY_HPP
#define LSSW_VERIFY_HPP

#include <cmath>
#include <string>
#include <vector>

#include "lssw/geodesics.hpp"
#include "lssw/rng.hpp"

namespace lssw {

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

namespace detail {

inline void add_check(std::vector<CheckResult>& out, const std::string& name,
                      double deviation, double tolerance) {
  out.push_back({name, deviation, tolerance, deviation <= tolerance});
}

inline double max_rel_dev(const Metric3& a, const Metric3& b) {
  double scale = 0.0, dev = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(a(i, j)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      dev = std::max(dev, std::abs(a(i, j) - b(i, j)));
  return dev / scale;
}

inline double expect_q(const LssModel& model, const ThetaParams& th,
                       const std::function<double(double)>& g) {
  QuadratureSpec qs;
  qs.abs_tol = 1e-12;
  qs.rel_tol = 1e-12;
  return expectation(model, th, g, qs);
}

}  // namespace detail

// Full invariant suite for one family. `wim_corruption` is a test hook: it
// is added to the (2,2) entry of the closed-form WIM inside the oracle
// agreement check so a broken closed form is demonstrably caught.
inline std::vector<CheckResult> run_verify(const LssModel& model,
                                           const std::string& family,
                                           double wim_corruption = 0.0) {
  std::vector<CheckResult> out;
  const std::vector<double> xis = {-0.4, -0.1, 0.0, 0.1, 0.4};

  // Density normalization over the support.
  {
    double worst = 0.0;
    QuadratureSpec qs;
    qs.abs_tol = 1e-11;
    qs.rel_tol = 1e-11;
    for (double xi : xis) {
      ThetaParams th{0.3, 1.7, xi};
      SupportInterval s = support(model, th);
      double mass =
          integrate([&](double x) { return density(model, th, x); }, s.lo,
                    s.hi, qs)
              .value;
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    detail::add_check(out, family + ".density_normalization", worst, 1e-8);
  }

  // quantile(cdf(x)) = x on the support interior.
  {
    double worst = 0.0;
    for (double xi : xis) {
      ThetaParams th{-1.0, 2.0, xi};
      for (int i = 1; i < 200; ++i) {
        double u = i / 200.0;
        double x = quantile(model, th, u);
        double u2 = cdf(model, th, x);
        if (u2 > 0.0 && u2 < 1.0) {
          double x2 = quantile(model, th, u2);
          worst = std::max(worst, std::abs(x2 - x) / (1.0 + std::abs(x)));
        }
      }
    }
    detail::add_check(out, family + ".quantile_cdf_roundtrip", worst, 1e-8);
  }

  // The cdf P_theta(x) is nonincreasing in xi.
  {
    double worst = 0.0;
    ThetaParams th{0.0, 1.0, 0.0};
    for (int j = 0; j < 20; ++j) {
      double xi = -0.42 + 0.84 * j / 19.0;
      double xi2 = xi + 0.84 / 19.0;
      for (int i = 0; i < 100; ++i) {
        double x = -4.0 + 9.0 * i / 99.0;
        ThetaParams a = th, b = th;
        a.xi = xi;
        b.xi = std::min(xi2, 0.42);
        worst = std::max(worst, cdf(model, b, x) - cdf(model, a, x));
      }
    }
    detail::add_check(out, family + ".cdf_monotone_in_xi", worst, 1e-10);
  }

  // Heavier right tail for larger positive xi.
  {
    double worst = 0.0;
    const double pairs[2][2] = {{0.4, 0.2}, {0.3, 0.1}};
    for (auto& pr : pairs) {
      ThetaParams heavy{0.0, 1.0, pr[0]}, light{0.0, 1.0, pr[1]};
      double x0 = quantile(model, heavy, 0.999);
      for (int i = 0; i < 50; ++i) {
        double x = x0 * (1.0 + 0.2 * i);
        double sh = 1.0 - cdf(model, heavy, x);
        double sl = 1.0 - cdf(model, light, x);
        worst = std::max(worst, sl - sh);
      }
    }
    detail::add_check(out, family + ".tail_ordering", worst, 0.0);
  }

  // Monte Carlo sample mean/variance against the MGF displays.
  {
    const std::size_t n = 1000000;
    double worst = 0.0;
    for (double xi : {0.25, -0.2, 0.0}) {
      ThetaParams th{0.0, 1.0, xi};
      auto xs = sample(model, th, n, 20240901u);
      double mean = 0.0;
      for (double v : xs) mean += v;
      mean /= n;
      double var = 0.0;
      for (double v : xs) var += (v - mean) * (v - mean);
      var /= (n - 1);
      auto [em, ev] = mean_var(model, th);
      double se_mean = std::sqrt(ev / n);
      worst = std::max(worst, std::abs(mean - em) / se_mean / 4.0);
      // rough standard error for the variance via the fourth central moment
      double m4 = 0.0;
      for (double v : xs) m4 += std::pow(v - mean, 4);
      m4 /= n;
      double se_var = std::sqrt(std::max(m4 - ev * ev, 0.0) / n);
      worst = std::max(worst, std::abs(var - ev) / se_var / 4.0);
    }
    detail::add_check(out, family + ".monte_carlo_mean_var", worst, 1.0);
  }

  // Log-moment identity against quantile-domain quadrature.
  {
    double worst = 0.0;
    ThetaParams th{0.0, 1.0, 0.2};
    for (double r : {0.0, 1.0, 2.0}) {
      for (int k = 0; k <= 3; ++k) {
        double closed = moment_T(model, th, r, k);
        double quad = detail::expect_q(model, th, [&](double x) {
          double t = 1.0 + th.xi * (x - th.mu) / th.sigma;
          double lt = std::log(t);
          double p = 1.0;
          for (int i = 0; i < k; ++i) p *= lt;
          return std::pow(t, r) * p;
        });
        worst = std::max(worst,
                         std::abs(closed - quad) / std::max(1.0, std::abs(closed)));
      }
    }
    detail::add_check(out, family + ".log_moment_identity", worst, 1e-7);
  }

  // Mean-zero condition for all three closed-form scores.
  {
    double worst = 0.0;
    for (double xi : {-0.2, 0.0, 0.2}) {
      ThetaParams th{0.5, 1.5, xi};
      for (ScoreIndex w :
           {ScoreIndex::mu, ScoreIndex::sigma, ScoreIndex::xi}) {
        double m = detail::expect_q(
            model, th, [&](double x) { return score(model, th, w, x); });
        worst = std::max(worst, std::abs(m));
      }
    }
    detail::add_check(out, family + ".score_mean_zero", worst, 1e-8);
  }

  // PDE residual of the xi score (central differences on both outer
  // derivatives), normalized by the sup of |dp/dxi| over the grid.
  {
    double worst = 0.0;
    ThetaParams th{0.0, 1.0, family == "gpd" ? -0.2 : 0.2};
    std::vector<double> xg(200);
    for (int i = 0; i < 200; ++i)
      xg[i] = quantile(model, th, 0.01 + 0.98 * i / 199.0);
    auto flux = [&](double x) {
      return density(model, th, x) * score_dx(model, th, ScoreIndex::xi, x);
    };
    auto dp_dxi = [&](double x) {
      double h = 1e-5;
      ThetaParams a = th, b = th;
      a.xi += h;
      b.xi -= h;
      double d1 = (density(model, a, x) - density(model, b, x)) / (2 * h);
      a.xi = th.xi + 0.5 * h;
      b.xi = th.xi - 0.5 * h;
      double d2 = (density(model, a, x) - density(model, b, x)) / h;
      return (4 * d2 - d1) / 3.0;
    };
    double scale = 0.0;
    std::vector<double> res(xg.size());
    for (std::size_t i = 0; i < xg.size(); ++i) {
      double x = xg[i];
      double h = 1e-5 * (1.0 + std::abs(x));
      double d1 = (flux(x + h) - flux(x - h)) / (2 * h);
      double d2 = (flux(x + 0.5 * h) - flux(x - 0.5 * h)) / h;
      double dflux = (4 * d2 - d1) / 3.0;
      double dpxi = dp_dxi(x);
      res[i] = dflux + dpxi;
      scale = std::max(scale, std::abs(dpxi));
    }
    for (double r : res) worst = std::max(worst, std::abs(r) / scale);
    detail::add_check(out, family + ".score_pde_residual", worst, 1e-5);
  }

  // Numerical score oracle vs closed forms (central 98% quantile range).
  {
    double worst = 0.0;
    ThetaParams th{0.0, 1.0, family == "gpd" ? -0.2 : 0.2};
    std::vector<double> xg(120);
    for (int i = 0; i < 120; ++i)
      xg[i] = quantile(model, th, 0.01 + 0.98 * i / 119.0);
    for (ScoreIndex w : {ScoreIndex::mu, ScoreIndex::sigma, ScoreIndex::xi}) {
      auto num = score_numeric(model, th, w, xg);
      for (std::size_t i = 0; i < xg.size(); ++i)
        worst = std::max(worst, std::abs(num[i] - score(model, th, w, xg[i])));
    }
    detail::add_check(out, family + ".score_numeric_oracle", worst, 1e-5);
  }

  // WIM closed form vs the quadrature oracle over a (sigma, xi) grid.
  {
    double worst = 0.0;
    for (double sg : {0.5, 1.0, 2.0}) {
      for (double xi : {-0.4, -0.2, -0.05, 0.0, 0.05, 0.2, 0.4}) {
        ThetaParams th{0.0, sg, xi};
        Metric3 closed = wim_theta(model, th);
        closed.at(1, 1) += wim_corruption;
        Metric3 numeric = wim_numeric(model, th);
        worst = std::max(worst, detail::max_rel_dev(closed, numeric));
      }
    }
    detail::add_check(out, family + ".wim_oracle_agreement", worst, 1e-6);
  }

  // WIM entries rewritten through (m, s) and their derivatives.
  {
    double worst = 0.0;
    for (double xi : {-0.3, -0.05, 0.0, 0.05, 0.3}) {
      ThetaParams th{0.0, 1.3, xi};
      Metric3 g = wim_theta(model, th);
      ShapeProfile p = shape_profile(model, xi);
      worst = std::max(worst, std::abs(g(0, 1) - p.m));
      worst = std::max(worst, std::abs(g(0, 2) - th.sigma * p.m_prime));
      worst = std::max(worst, std::abs(g(1, 1) - (p.s * p.s + p.m * p.m)));
      worst = std::max(
          worst, std::abs(g(1, 2) - th.sigma * (p.s * p.s_prime + p.m * p.m_prime)));
    }
    detail::add_check(out, family + ".wim_ms_rewrite", worst, 1e-10);
  }

  // Chart consistency: Jacobian pullback of wim_theta equals wim_omega.
  {
    double worst = 0.0;
    for (double xi : {-0.3, 0.1, 0.35}) {
      ThetaParams th{0.7, 1.4, xi};
      OmegaParams om = theta_to_omega(model, th);
      ShapeProfile p = shape_profile(model, xi);
      // dtheta/domega from the Prop-3 proof
      double J[3][3] = {{1.0, -p.m / p.s,
                         (p.m * p.s_prime - p.m_prime * p.s) / (p.s * p.s) *
                             om.beta},
                        {0.0, 1.0 / p.s, -p.s_prime / (p.s * p.s) * om.beta},
                        {0.0, 0.0, 1.0}};
      Metric3 gt = wim_theta(model, th);
      Metric3 pulled;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double v = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) v += J[a][i] * gt(a, b) * J[b][j];
          pulled.at(i, j) = v;
        }
      Metric3 go = wim_omega(model, om);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          worst = std::max(worst, std::abs(pulled(i, j) - go(i, j)));
      // round trip of the coordinate maps
      ThetaParams back = omega_to_theta(model, om);
      worst = std::max(worst, std::abs(back.mu - th.mu));
      worst = std::max(worst, std::abs(back.sigma - th.sigma));
      worst = std::max(worst, std::abs(back.xi - th.xi));
    }
    detail::add_check(out, family + ".omega_chart_consistency", worst, 1e-9);
  }

  // Positive semi-definiteness of computed metrics.
  {
    double worst = 0.0;
    for (double xi : xis) {
      ThetaParams th{0.0, 1.0, xi};
      auto ev = eigenvalues_sym3(wim_theta(model, th));
      worst = std::max(worst, -ev[0]);
    }
    detail::add_check(out, family + ".wim_positive_semidefinite", worst, 1e-10);
  }

  // Flat chart: round trip and identity pullback.
  const double chart_lo = std::max(model.xi_lo + 0.01, -0.4);
  const double chart_hi = std::min(model.xi_hi - 0.01, 0.4);
  {
    FlatChart chart(model, chart_lo, chart_hi, 0.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      double xi = chart_lo + 0.01 + (chart_hi - chart_lo - 0.02) * uniform01(7u, i);
      OmegaParams om{uniform01(8u, i) * 4.0 - 2.0, 0.5 + uniform01(9u, i), xi};
      FlatPoint p = omega_to_flat(chart, om);
      OmegaParams back = flat_to_omega(chart, p);
      worst = std::max(worst, std::abs(back.alpha - om.alpha));
      worst = std::max(worst, std::abs(back.beta - om.beta));
      worst = std::max(worst, std::abs(back.xi - om.xi));
    }
    detail::add_check(out, family + ".flat_chart_roundtrip", worst, 1e-10);
  }

  // Extrinsic geometry: intrinsic distance >= W2, equality on a fixed-xi
  // leaf, strict gap across leaves, membership along intrinsic paths.
  {
    FlatChart chart(model, chart_lo, chart_hi, 0.0);
    ThetaParams th1{0.0, 1.0, 0.2}, th2{2.0, 1.5, 0.4};
    OmegaParams om1 = theta_to_omega(model, th1);
    OmegaParams om2 = theta_to_omega(model, th2);
    double di = intrinsic_distance(chart, om1, om2);
    double dw = w2_distance(model, th1, th2);
    detail::add_check(out, family + ".submanifold_bound", dw - di, 1e-6);
    detail::add_check(out, family + ".curvature_strict_gap", 1e-4 - (di - dw),
                      0.0);

    ThetaParams la{0.0, 1.0, 0.2}, lb{1.0, 2.0, 0.2};
    double dil = intrinsic_distance(chart, theta_to_omega(model, la),
                                    theta_to_omega(model, lb));
    double dwl = w2_distance(model, la, lb);
    detail::add_check(out, family + ".leaf_totally_geodesic",
                      std::abs(dil - dwl), 1e-6);

    std::vector<double> ug(101);
    for (int i = 0; i < 101; ++i) ug[i] = (i + 0.5) / 101.0;
    double worst_member = 0.0;
    for (double t : {0.25, 0.5, 0.75}) {
      OmegaParams omt = intrinsic_geodesic(chart, om1, om2, t);
      ThetaParams tht = omega_to_theta(model, omt);
      PathSample ps;
      ps.t = t;
      ps.u = ug;
      ps.quantiles.resize(ug.size());
      for (std::size_t i = 0; i < ug.size(); ++i)
        ps.quantiles[i] = quantile(model, tht, ug[i]);
      worst_member = std::max(worst_member, membership_test(model, ps).residual);
    }
    detail::add_check(out, family + ".intrinsic_path_membership", worst_member,
                      1e-8);

    PathSample mid = displacement_path(model, th1, th2, 0.5, ug);
    double res_mid = membership_test(model, mid).residual;
    detail::add_check(out, family + ".midpoint_not_member",
                      10.0 * worst_member + 1e-3 - res_mid, 0.0);
  }

  // Second-order expansion of W2^2 (reduced grid; the acceptance suite runs
  // the full version).
  {
    double worst = 0.0;
    ThetaParams th{0.0, 1.0, 0.1};
    for (int k = 0; k < 4; ++k) {
      double d[3] = {uniform01(11u, 3 * k) - 0.5, uniform01(11u, 3 * k + 1) - 0.5,
                     uniform01(11u, 3 * k + 2) - 0.5};
      double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      for (double& v : d) v /= norm;
      double eps = 1e-2;
      ThetaParams th2{th.mu + eps * d[0], th.sigma + eps * d[1],
                      th.xi + eps * d[2]};
      // quadratic form at the segment midpoint isolates the second-order
      // error from the odd third-order term of the one-sided expansion
      ThetaParams mid{0.5 * (th.mu + th2.mu), 0.5 * (th.sigma + th2.sigma),
                      0.5 * (th.xi + th2.xi)};
      Metric3 g = wim_theta(model, mid);
      double quad = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) quad += d[i] * g(i, j) * d[j];
      double w2 = w2_distance(model, th, th2);
      worst = std::max(worst, std::abs(w2 * w2 / (eps * eps * quad) - 1.0));
    }
    detail::add_check(out, family + ".w2_second_order_expansion", worst, 0.02);
  }

  // OT map monotone on a 1000-point grid.
  {
    double worst = 0.0;
    ThetaParams th1{0.0, 1.0, family == "gpd" ? 0.3 : -0.3};
    ThetaParams th2{1.0, 0.7, 0.2};
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
      double x = quantile(model, th1, (i + 0.5) / 1000.0);
      double y = ot_map(model, th1, th2, x);
      worst = std::max(worst, prev - y);
      prev = y;
    }
    detail::add_check(out, family + ".ot_map_monotone", worst, 0.0);
  }

  // Displacement interpolation symmetry under endpoint swap.
  {
    std::vector<double> ug(64);
    for (int i = 0; i < 64; ++i) ug[i] = (i + 0.5) / 64.0;
    ThetaParams th1{0.0, 1.0, 0.2}, th2{2.0, 1.5, 0.4};
    auto a = displacement_path(model, th1, th2, 0.3, ug);
    auto b = displacement_path(model, th2, th1, 0.7, ug);
    double worst = 0.0;
    for (std::size_t i = 0; i < ug.size(); ++i)
      worst = std::max(worst, std::abs(a.quantiles[i] - b.quantiles[i]));
    detail::add_check(out, family + ".displacement_swap_symmetry", worst, 1e-12);
  }

  return out;
}

}  // namespace lssw

#endif
