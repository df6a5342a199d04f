#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "lssw/lss_model.hpp"

using namespace lssw;

namespace {
constexpr double kEulerGamma = 0.5772156649015329;
constexpr double kPi = 3.141592653589793;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("support endpoints follow the shape sign") {
  LssModel gev = gev_model();
  ThetaParams pos{0.0, 1.0, 0.5}, neg{0.0, 1.0, -0.5}, zero{0.0, 1.0, 0.0};

  SupportInterval s = support(gev, pos);
  CHECK(s.lo == Catch::Approx(-2.0));
  CHECK(s.lo_closed);
  CHECK(s.hi == kInf);

  s = support(gev, neg);
  CHECK(s.lo == -kInf);
  CHECK(s.hi == Catch::Approx(2.0));
  CHECK(s.hi_closed);

  s = support(gev, zero);
  CHECK(s.lo == -kInf);
  CHECK(s.hi == kInf);

  LssModel gpd = gpd_model();
  s = support(gpd, ThetaParams{1.0, 2.0, 0.3});
  CHECK(s.lo == Catch::Approx(1.0));
  CHECK(s.hi == kInf);
  s = support(gpd, ThetaParams{1.0, 2.0, -0.4});
  CHECK(s.lo == Catch::Approx(1.0));
  CHECK(s.hi == Catch::Approx(1.0 + 2.0 / 0.4));
}

TEST_CASE("densities match the textbook closed forms") {
  LssModel gpd = gpd_model();
  // GPD(0,1,xi): (1 + xi x)^{-1/xi - 1}
  CHECK(density(gpd, ThetaParams{0.0, 1.0, 0.25}, 1.0) ==
        Catch::Approx(std::pow(1.25, -5.0)).epsilon(1e-14));
  CHECK(density(gpd, ThetaParams{0.0, 1.0, 0.0}, 1.3) ==
        Catch::Approx(std::exp(-1.3)).epsilon(1e-14));
  CHECK(density(gpd, ThetaParams{0.0, 1.0, 0.25}, -0.5) == 0.0);

  LssModel gev = gev_model();
  // GEV cdf: exp(-(1 + xi x)^{-1/xi})
  ThetaParams th{0.0, 1.0, 0.2};
  for (double x : {-1.0, 0.0, 1.5, 4.0}) {
    double t = 1.0 + 0.2 * x;
    CHECK(cdf(gev, th, x) ==
          Catch::Approx(std::exp(-std::pow(t, -5.0))).epsilon(1e-13));
  }
  // left of the lower endpoint for xi > 0
  CHECK(cdf(gev, th, -6.0) == 0.0);
  CHECK(density(gev, th, -6.0) == 0.0);
  // right of the upper endpoint for xi < 0
  CHECK(cdf(gev, ThetaParams{0.0, 1.0, -0.25}, 5.0) == 1.0);
}

TEST_CASE("quantile inverts the cdf across shapes") {
  for (const LssModel& model : {gev_model(), gpd_model()}) {
    for (double xi : {-0.4, -1e-4, 0.0, 1e-4, 0.4}) {
      ThetaParams th{-0.7, 1.9, xi};
      for (double u : {0.001, 0.2, 0.5, 0.8, 0.999}) {
        double x = quantile(model, th, u);
        CHECK(cdf(model, th, x) == Catch::Approx(u).margin(1e-11));
      }
    }
  }
  CHECK_THROWS_AS(quantile(gpd_model(), ThetaParams{}, 0.0), DomainError);
  CHECK_THROWS_AS(quantile(gpd_model(), ThetaParams{}, 1.0), DomainError);
}

TEST_CASE("sampling is deterministic and respects the support") {
  LssModel gpd = gpd_model();
  ThetaParams th{1.0, 2.0, -0.3};
  auto a = sample(gpd, th, 500, 42u);
  auto b = sample(gpd, th, 500, 42u);
  CHECK(a == b);
  auto c = sample(gpd, th, 500, 43u);
  CHECK(a != c);
  SupportInterval s = support(gpd, th);
  for (double x : a) {
    CHECK(x >= s.lo);
    CHECK(x <= s.hi);
  }
}

TEST_CASE("mean and variance from the MGF displays") {
  LssModel gpd = gpd_model();
  {
    auto [m, v] = mean_var(gpd, ThetaParams{0.0, 1.0, 0.0});
    CHECK(m == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(v == Catch::Approx(1.0).epsilon(1e-13));
  }
  {
    // xi = 1/4: m = 4/3, s^2 = 32/9
    auto [m, v] = mean_var(gpd, ThetaParams{0.0, 1.0, 0.25});
    CHECK(m == Catch::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(v == Catch::Approx(32.0 / 9.0).epsilon(1e-13));
  }
  {
    auto [m, v] = mean_var(gpd, ThetaParams{2.0, 3.0, 0.25});
    CHECK(m == Catch::Approx(2.0 + 4.0).epsilon(1e-13));
    CHECK(v == Catch::Approx(32.0).epsilon(1e-13));
  }
  LssModel gev = gev_model();
  {
    auto [m, v] = mean_var(gev, ThetaParams{0.0, 1.0, 0.0});
    CHECK(m == Catch::Approx(kEulerGamma).epsilon(1e-12));
    CHECK(v == Catch::Approx(kPi * kPi / 6.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(mean_var(gpd, ThetaParams{0.0, 1.0, 0.6}), DomainError);
}

TEST_CASE("mean and variance are continuous across the series switch") {
  // straddle the series/direct switch at |xi| = 1e-3 so closely that the
  // genuine xi-variation is negligible against the tolerance
  for (const LssModel& model : {gev_model(), gpd_model()}) {
    for (double sign : {-1.0, 1.0}) {
      double below = sign * 1e-3 * (1.0 - 1e-9);
      double above = sign * 1e-3 * (1.0 + 1e-9);
      auto [mb, vb] = mean_var(model, ThetaParams{0.0, 1.0, below});
      auto [ma, va] = mean_var(model, ThetaParams{0.0, 1.0, above});
      CHECK(std::abs(ma - mb) < 1e-6);
      CHECK(std::abs(va - vb) < 1e-6);
    }
  }
}

TEST_CASE("log-moment identity against closed MGF values") {
  LssModel gpd = gpd_model();
  ThetaParams th{0.0, 1.0, 0.2};
  // E[T^r (log T)^k] = xi^k M^{(k)}(r xi)
  CHECK(moment_T(gpd, th, 1.0, 0) == Catch::Approx(1.25).epsilon(1e-14));
  CHECK(moment_T(gpd, th, 1.0, 1) ==
        Catch::Approx(0.2 / (0.8 * 0.8)).epsilon(1e-14));
  CHECK(moment_T(gpd, th, 0.0, 2) == Catch::Approx(0.04 * 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(moment_T(gpd, ThetaParams{0.0, 1.0, 0.0}, 1.0, 1),
                  DomainError);
  CHECK_THROWS_AS(moment_T(gpd, th, -1.0, 1), DomainError);
  CHECK_THROWS_AS(moment_T(gpd, th, 5.0, 0), DomainError);
}

TEST_CASE("model construction validates the shape interval") {
  CHECK_THROWS_AS(make_model(exponential(), 0.1, 0.4), ValidationError);
  CHECK_THROWS_AS(make_model(exponential(), -0.6, 0.6), ValidationError);
  LssModel m = make_model(exponential(), -0.3, 0.3);
  CHECK(m.xi_in_range(0.25));
  CHECK_FALSE(m.xi_in_range(0.35));
}
