#include <cmath>
#include <numbers>

#include "doctest.h"
#include "langevin/densities.hpp"
#include "langevin/quadrature.hpp"

using namespace langevin;
using doctest::Approx;

TEST_CASE("Gauss-Kronrod on smooth and endpoint-singular integrands") {
  const QuadConfig cfg{1e-13, 1e-12, 50};
  CHECK(integrate_interval([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, cfg).value ==
        Approx(2.0).epsilon(1e-12));
  CHECK(integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-9, 1e-9, 60})
            .value ==
        Approx(2.0).epsilon(1e-9));
}

TEST_CASE("half-line integration") {
  const QuadConfig cfg{1e-13, 1e-11, 50};
  // int_0^inf e^{-t} dt and int_0^inf dt / (1 + t^2).
  auto r1 = integrate_half_line([](double s) { const double t = std::exp(s); return std::exp(-t) * t; }, cfg);
  CHECK(r1.value == Approx(1.0).epsilon(1e-10));
  auto r2 = integrate_half_line([](double s) { const double t = std::exp(s); return t / (1 + t * t); }, cfg);
  CHECK(r2.value == Approx(std::numbers::pi / 2).epsilon(1e-9));
}

TEST_CASE("tolerance failure carries the best estimate") {
  const QuadConfig cfg{1e-15, 1e-15, 2};
  try {
    integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, cfg);
    FAIL("expected ToleranceError");
  } catch (const ToleranceError& e) {
    CHECK(std::isfinite(e.best().value));
    CHECK(e.best().err_estimate > 0.0);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(QuadConfig({-1.0, 1e-8, 10}).validate(), DomainError);
  CHECK_THROWS_AS(QuadConfig({1e-10, 1e-8, 0}).validate(), DomainError);
  CHECK_THROWS_AS(DomainD(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(DomainD(-0.1, 1.0), DomainError);
  CHECK(DomainD::contains({0.0, 0.5}));
  CHECK_FALSE(DomainD::contains({0.0, 0.0}));
}

TEST_CASE("exponent R") {
  CHECK(exponent_R(1, 0, 0, 1) == Approx(6.0));
  CHECK(exponent_R(0, 0, 0, 2) == 0.0);
}

TEST_CASE("Phi_0 matches an independent value") {
  CHECK(phi0({0.0, 1.0}, 0.5).value == Approx(0.157522541549083443).epsilon(1e-8));
}

TEST_CASE("d Phi_0 / dv agrees with a central difference") {
  const DomainD z(0.4, -1.0);
  const double h = 1e-4;
  const double fd = (phi0(z.state(), 0.7 + h).value - phi0(z.state(), 0.7 - h).value) / (2 * h);
  CHECK(dphi0_dv(z, 0.7).value == Approx(fd).epsilon(1e-6));
}

TEST_CASE("general h-functions reduce to the boundary formulas") {
  CHECK(h_v_general(DomainD(0.0, 1.0), 1.0).value == Approx(h_v_zero(1.0, 1.0)).epsilon(1e-6));
  CHECK(h_v_general(DomainD(0.0, 2.0), 0.5).value == Approx(h_v_zero(2.0, 0.5)).epsilon(1e-6));
  CHECK(hbar0_general(DomainD(0.0, 1.0)).value == Approx(hbar0_zero(1.0)).epsilon(1e-6));
}

TEST_CASE("hbar_0 scaling") {
  const double k = 2.0;
  const double a = hbar0_general(DomainD(0.5, 0.3)).value;
  const double b = hbar0_general(DomainD(k * k * k * 0.5, k * 0.3)).value;
  CHECK(b == Approx(std::pow(k, -2.5) * a).epsilon(1e-6));
}

TEST_CASE("h_v scaling and positivity off the boundary") {
  const double k = 1.5;
  const double a = h_v_general(DomainD(0.2, -0.4), 1.0).value;
  const double b = h_v_general(DomainD(k * k * k * 0.2, -k * 0.4), k * 1.0).value;
  CHECK(a > 0.0);
  // The exit velocity scales by k, so its density picks up 1/k.
  CHECK(b == Approx(a / k).epsilon(1e-6));
}
