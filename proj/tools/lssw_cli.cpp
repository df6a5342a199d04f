// Command-line front end: emits CSV artifacts (densities, information
// matrices, scores, geodesics, W2 distances) and runs the verification
// suite for the GEV/GPD families.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lssw/lssw.hpp"

namespace {

constexpr int kExitBadParams = 2;
constexpr int kExitDomain = 3;
constexpr int kExitChart = 4;
constexpr int kExitVerifyFail = 5;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct GridSpec {
  double lo = 0.0, hi = 1.0;
  int n = 2;
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char colon1, colon2;
  std::istringstream is(s);
  if (!(is >> g.lo >> colon1 >> g.hi >> colon2 >> g.n) || colon1 != ':' ||
      colon2 != ':' || g.n < 2 || !(g.lo < g.hi))
    throw lssw::ValidationError("bad --grid spec, expected LO:HI:N with N >= 2");
  return g;
}

lssw::ThetaParams parse_theta(const std::string& s) {
  lssw::ThetaParams th;
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> th.mu >> c1 >> th.sigma >> c2 >> th.xi) || c1 != ',' || c2 != ',')
    throw lssw::ValidationError("bad --theta, expected mu,sigma,xi");
  if (!(th.sigma > 0.0)) throw lssw::ValidationError("sigma must be > 0");
  return th;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ';'))
    if (!tok.empty()) out.push_back(std::stod(tok));
  if (out.empty()) throw lssw::ValidationError("empty list");
  return out;
}

lssw::LssModel make_family(const std::string& family) {
  if (family == "gev") return lssw::gev_model();
  if (family == "gpd") return lssw::gpd_model();
  throw lssw::ValidationError("unknown family: " + family);
}

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream& stream() { return file ? *file : std::cout; }
  void open(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw lssw::ValidationError("cannot open output file " + path);
  }
};

void check_theta_in_model(const lssw::LssModel& model,
                          const lssw::ThetaParams& th) {
  if (!model.base.mgf_domain.contains(2.0 * th.xi))
    throw lssw::DomainError("xi too close to an MGF pole");
}

int cmd_density(const std::string& family, const std::string& theta_s,
                const std::string& xi_list_s, const std::string& grid_s,
                const std::string& out_path) {
  lssw::LssModel model = make_family(family);
  lssw::ThetaParams th = parse_theta(theta_s);
  std::vector<double> xis =
      xi_list_s.empty() ? std::vector<double>{th.xi} : parse_list(xi_list_s);
  GridSpec grid = parse_grid(grid_s);
  Output out;
  out.open(out_path);
  out.stream() << "xi,x,density\n";
  for (double xi : xis) {
    lssw::ThetaParams t = th;
    t.xi = xi;
    check_theta_in_model(model, t);
    lssw::SupportInterval s = lssw::support(model, t);
    for (int i = 0; i < grid.n; ++i) {
      double x = grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1);
      if (x < s.lo || x > s.hi) continue;
      out.stream() << fmt17(xi) << ',' << fmt17(x) << ','
                   << fmt17(lssw::density(model, t, x)) << '\n';
    }
  }
  return 0;
}

void print_matrix(std::ostream& os, const lssw::Metric3& g,
                  const std::string& tag) {
  for (int i = 0; i < 3; ++i) {
    if (!tag.empty()) os << tag << ',';
    os << fmt17(g(i, 0)) << ',' << fmt17(g(i, 1)) << ',' << fmt17(g(i, 2))
       << '\n';
  }
}

int cmd_wim(const std::string& family, const std::string& theta_s,
            const std::string& chart, bool verify, double corrupt,
            const std::string& out_path) {
  lssw::LssModel model = make_family(family);
  lssw::ThetaParams th = parse_theta(theta_s);
  check_theta_in_model(model, th);
  Output out;
  out.open(out_path);
  lssw::Metric3 g;
  if (chart == "omega") {
    g = lssw::wim_omega(model, lssw::theta_to_omega(model, th));
  } else if (chart == "theta") {
    g = lssw::wim_theta(model, th);
  } else {
    throw lssw::ValidationError("chart must be theta or omega");
  }
  g.at(1, 1) += corrupt;
  if (!verify) {
    print_matrix(out.stream(), g, "");
    return 0;
  }
  lssw::Metric3 num = lssw::wim_numeric(model, th);
  if (chart == "omega") {
    // pull the numeric theta-chart matrix to omega via the analytic Jacobian
    lssw::ShapeProfile p = lssw::shape_profile(model, th.xi);
    lssw::OmegaParams om = lssw::theta_to_omega(model, th);
    double J[3][3] = {
        {1.0, -p.m / p.s,
         (p.m * p.s_prime - p.m_prime * p.s) / (p.s * p.s) * om.beta},
        {0.0, 1.0 / p.s, -p.s_prime / (p.s * p.s) * om.beta},
        {0.0, 0.0, 1.0}};
    lssw::Metric3 pulled;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) v += J[a][i] * num(a, b) * J[b][j];
        pulled.at(i, j) = v;
      }
    num = pulled;
  }
  print_matrix(out.stream(), g, "closed");
  print_matrix(out.stream(), num, "numeric");
  double scale = 0.0, dev = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      scale = std::max(scale, std::abs(g(i, j)));
      dev = std::max(dev, std::abs(g(i, j) - num(i, j)));
    }
  out.stream() << "deviation," << fmt17(dev / scale) << '\n';
  return 0;
}

int cmd_score(const std::string& family, const std::string& theta_s,
              const std::string& which_s, const std::string& grid_s,
              const std::string& out_path) {
  lssw::LssModel model = make_family(family);
  lssw::ThetaParams th = parse_theta(theta_s);
  check_theta_in_model(model, th);
  lssw::ScoreIndex which;
  if (which_s == "mu")
    which = lssw::ScoreIndex::mu;
  else if (which_s == "sigma")
    which = lssw::ScoreIndex::sigma;
  else if (which_s == "xi")
    which = lssw::ScoreIndex::xi;
  else
    throw lssw::ValidationError("--which must be mu, sigma or xi");
  GridSpec grid = parse_grid(grid_s);
  lssw::SupportInterval s = lssw::support(model, th);
  Output out;
  out.open(out_path);
  out.stream() << "x,score\n";
  for (int i = 0; i < grid.n; ++i) {
    double x = grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1);
    if (!(x > s.lo && x < s.hi)) continue;
    out.stream() << fmt17(x) << ',' << fmt17(lssw::score(model, th, which, x))
                 << '\n';
  }
  return 0;
}

int cmd_w2(const std::string& family, const std::vector<std::string>& thetas,
           const std::string& out_path) {
  if (thetas.size() != 2)
    throw lssw::ValidationError("w2 needs exactly two --theta");
  lssw::LssModel model = make_family(family);
  lssw::ThetaParams a = parse_theta(thetas[0]), b = parse_theta(thetas[1]);
  check_theta_in_model(model, a);
  check_theta_in_model(model, b);
  Output out;
  out.open(out_path);
  out.stream() << "w2\n" << fmt17(lssw::w2_distance(model, a, b)) << '\n';
  return 0;
}

int cmd_geodesic(const std::string& family,
                 const std::vector<std::string>& thetas,
                 const std::string& mode, const std::string& t_list_s,
                 const std::string& grid_s, const std::string& chart_s,
                 const std::string& out_path) {
  if (thetas.size() != 2)
    throw lssw::ValidationError("geodesic needs exactly two --theta");
  lssw::LssModel model = make_family(family);
  lssw::ThetaParams th1 = parse_theta(thetas[0]), th2 = parse_theta(thetas[1]);
  check_theta_in_model(model, th1);
  check_theta_in_model(model, th2);
  std::vector<double> ts = parse_list(t_list_s);
  GridSpec grid = parse_grid(grid_s);
  GridSpec chart_iv = chart_s.empty() ? GridSpec{-0.4, 0.4, 2}
                                      : parse_grid(chart_s + ":2");

  const bool want_intrinsic = mode == "intrinsic" || mode == "both";
  const bool want_extrinsic = mode == "extrinsic" || mode == "both";
  if (!want_intrinsic && !want_extrinsic)
    throw lssw::ValidationError("--mode must be intrinsic, extrinsic or both");

  std::vector<double> ug(201);
  for (int i = 0; i < 201; ++i) ug[i] = 0.0025 + 0.995 * i / 200.0;

  Output out;
  out.open(out_path);
  out.stream() << "mode,t,x,density\n";
  std::ostringstream summary;

  std::unique_ptr<lssw::FlatChart> chart;
  lssw::OmegaParams om1, om2;
  if (want_intrinsic) {
    chart = std::make_unique<lssw::FlatChart>(model, chart_iv.lo, chart_iv.hi,
                                              0.0);
    om1 = lssw::theta_to_omega(model, th1);
    om2 = lssw::theta_to_omega(model, th2);
    summary << "summary,intrinsic_distance,"
            << fmt17(lssw::intrinsic_distance(*chart, om1, om2)) << '\n';
  }
  summary << "summary,w2_distance," << fmt17(lssw::w2_distance(model, th1, th2))
          << '\n';

  for (double t : ts) {
    if (want_intrinsic) {
      lssw::OmegaParams omt = lssw::intrinsic_geodesic(*chart, om1, om2, t);
      lssw::ThetaParams tht = lssw::omega_to_theta(model, omt);
      lssw::SupportInterval s = lssw::support(model, tht);
      for (int i = 0; i < grid.n; ++i) {
        double x = grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1);
        if (x < s.lo || x > s.hi) continue;
        out.stream() << "intrinsic," << fmt17(t) << ',' << fmt17(x) << ','
                     << fmt17(lssw::density(model, tht, x)) << '\n';
      }
      lssw::PathSample ps;
      ps.t = t;
      ps.u = ug;
      ps.quantiles.resize(ug.size());
      for (std::size_t i = 0; i < ug.size(); ++i)
        ps.quantiles[i] = lssw::quantile(model, tht, ug[i]);
      summary << "summary,membership,intrinsic," << fmt17(t) << ','
              << fmt17(lssw::membership_test(model, ps).residual) << '\n';
    }
    if (want_extrinsic) {
      lssw::PathSample ps =
          lssw::displacement_path(model, th1, th2, t, ug, true);
      for (std::size_t i = 0; i < ps.x.size(); ++i)
        out.stream() << "extrinsic," << fmt17(t) << ',' << fmt17(ps.x[i]) << ','
                     << fmt17(ps.density[i]) << '\n';
      summary << "summary,membership,extrinsic," << fmt17(t) << ','
              << fmt17(lssw::membership_test(model, ps).residual) << '\n';
    }
  }
  out.stream() << summary.str();
  return 0;
}

int cmd_verify(const std::string& family, double corrupt,
               const std::string& out_path) {
  lssw::LssModel model = make_family(family);
  Output out;
  out.open(out_path);
  auto results = lssw::run_verify(model, family, corrupt);
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    out.stream() << (r.pass ? "PASS " : "FAIL ") << r.name
                 << " deviation=" << fmt17(r.deviation)
                 << " tol=" << fmt17(r.tolerance) << '\n';
  }
  out.stream() << (all_pass ? "PASS" : "FAIL") << " " << family
               << " verification suite\n";
  return all_pass ? 0 : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein geometry of location-scale-shape models"};
  app.require_subcommand(1);

  std::string family = "gpd", out_path, grid = "0:5:101", chart = "theta";
  std::string theta = "0,1,0", which = "mu", xi_list, t_list = "0;0.5;1";
  std::string mode = "both", chart_interval;
  std::vector<std::string> thetas;
  std::uint64_t seed = 0;
  bool verify_flag = false;
  double corrupt = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", family, "gev, gpd");
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--seed", seed, "deterministic seed");
  };

  auto* density = app.add_subcommand("density", "density curves as CSV");
  add_common(density);
  density->add_option("--theta", theta, "mu,sigma,xi");
  density->add_option("--xi-list", xi_list, "semicolon-separated shape list");
  density->add_option("--grid", grid, "LO:HI:N");

  auto* wim = app.add_subcommand("wim", "Wasserstein information matrix");
  add_common(wim);
  wim->add_option("--theta", theta, "mu,sigma,xi");
  wim->add_option("--chart", chart, "theta or omega");
  wim->add_flag("--verify", verify_flag, "also run the quadrature oracle");
  wim->add_option("--corrupt-wim", corrupt, "test hook")->group("");

  auto* score = app.add_subcommand("score", "Wasserstein score on a grid");
  add_common(score);
  score->add_option("--theta", theta, "mu,sigma,xi");
  score->add_option("--which", which, "mu, sigma or xi");
  score->add_option("--grid", grid, "LO:HI:N");

  auto* geo = app.add_subcommand("geodesic", "intrinsic/extrinsic geodesics");
  add_common(geo);
  geo->add_option("--theta", thetas, "mu,sigma,xi (twice)")->expected(0, 2);
  geo->add_option("--mode", mode, "intrinsic, extrinsic or both");
  geo->add_option("--t-list", t_list, "semicolon-separated t values");
  geo->add_option("--grid", grid, "x grid LO:HI:N for density rows");
  geo->add_option("--chart-interval", chart_interval, "xi interval LO:HI");

  auto* w2 = app.add_subcommand("w2", "exact L2-Wasserstein distance");
  add_common(w2);
  w2->add_option("--theta", thetas, "mu,sigma,xi (twice)")->expected(0, 2);

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(verify);
  verify->add_option("--corrupt-wim", corrupt, "test hook")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadParams;
  }

  try {
    if (density->parsed())
      return cmd_density(family, theta, xi_list, grid, out_path);
    if (wim->parsed())
      return cmd_wim(family, theta, chart, verify_flag, corrupt, out_path);
    if (score->parsed())
      return cmd_score(family, theta, which, grid, out_path);
    if (geo->parsed())
      return cmd_geodesic(family, thetas, mode, t_list, grid, chart_interval,
                          out_path);
    if (w2->parsed()) return cmd_w2(family, thetas, out_path);
    if (verify->parsed()) return cmd_verify(family, corrupt, out_path);
  } catch (const lssw::ChartError& e) {
    std::cerr << "chart error: " << e.what() << '\n';
    return kExitChart;
  } catch (const lssw::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const lssw::ValidationError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitBadParams;
  } catch (const lssw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitBadParams;
}
