#include <cmath>
#include <numbers>

#include "doctest.h"
#include "langevin/densities.hpp"
#include "langevin/quadrature.hpp"
#include "langevin/types.hpp"

using namespace langevin;
using doctest::Approx;

TEST_CASE("transition density matches independent values") {
  CHECK(transition_density(1.0, {0, 0}, {0, 0}) == Approx(0.551328895421792049).epsilon(1e-12));
  CHECK(transition_density(1.0, {0, 0}, {0, 1}) == Approx(0.0746142522184370454).epsilon(1e-12));
  CHECK(transition_density(0.5, {0.2, -0.3}, {0.1, 0.4}) ==
        Approx(0.638183524915343713).epsilon(1e-12));
}

TEST_CASE("transition density symmetries") {
  const PhaseState a{0.3, -0.7}, b{-0.2, 0.5};
  // Reflection (x,u) -> (-x,-u).
  CHECK(transition_density(0.8, a, b) ==
        Approx(transition_density(0.8, {-a.x, -a.u}, {-b.x, -b.u})).epsilon(1e-13));
  // Time reversal with velocity flip.
  CHECK(transition_density(0.8, a, b) ==
        Approx(transition_density(0.8, {b.x, -b.u}, {a.x, -a.u})).epsilon(1e-13));
  // Scaling: p_{k^2 t}(k^3 x, k u) = k^{-4} p_t(x, u).
  const double k = 1.7;
  CHECK(transition_density(k * k * 0.8, {k * k * k * a.x, k * a.u}, {k * k * k * b.x, k * b.u}) ==
        Approx(std::pow(k, -4) * transition_density(0.8, a, b)).epsilon(1e-12));
}

TEST_CASE("transition density integrates to one") {
  const QuadConfig cfg{1e-12, 1e-10, 40};
  auto inner = [&](double x) {
    return integrate_interval([&](double u) { return transition_density(1.0, {0.1, 0.2}, {x, u}); },
                              -12.0, 12.0, cfg)
        .value;
  };
  CHECK(integrate_interval(inner, -8.0, 8.0, cfg).value == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("McKean densities match independent values") {
  CHECK(mckean_joint_density(1, 1, 1) == Approx(0.0745745570254949866).epsilon(1e-10));
  CHECK(mckean_joint_density(1, 0.5, 2) == Approx(2.70998544798634652e-5).epsilon(1e-9));
  CHECK(mckean_marginal_density(1, 1) == Approx(3.0 / (4.0 * std::numbers::pi)).epsilon(1e-13));
  CHECK(mckean_marginal_density(1, 2) == Approx(0.150052719359517689).epsilon(1e-12));
  CHECK(mckean_marginal_cdf(1, 1) == Approx(0.136961528685717268).epsilon(1e-10));
  CHECK(mckean_marginal_cdf(1, 2) == Approx(0.336072406940073512).epsilon(1e-10));
}

TEST_CASE("McKean joint density integrates to the marginal") {
  const QuadConfig cfg{1e-13, 1e-11, 50};
  const double m = integrate_half_line(
                       [](double s) {
                         const double t = std::exp(s);
                         return mckean_joint_density(1.0, t, 2.0) * t;
                       },
                       cfg)
                       .value;
  CHECK(m == Approx(mckean_marginal_density(1.0, 2.0)).epsilon(1e-8));
}

TEST_CASE("McKean marginal scaling and cdf consistency") {
  CHECK(mckean_marginal_density(2.0, 3.0) ==
        Approx(mckean_marginal_density(1.0, 1.5) / 2.0).epsilon(1e-12));
  const double h = 1e-5;
  const double d = (mckean_marginal_cdf(1.0, 1.3 + h) - mckean_marginal_cdf(1.0, 1.3 - h)) / (2 * h);
  CHECK(d == Approx(mckean_marginal_density(1.0, 1.3)).epsilon(1e-6));
  // Heavy tail: 1 - F(v) decays like v^{-1/2}.
  const double t1 = 1.0 - mckean_marginal_cdf(1.0, 1e8), t2 = 1.0 - mckean_marginal_cdf(1.0, 4e8);
  CHECK(t1 < 1e-4);
  CHECK(t2 / t1 == Approx(0.5).epsilon(1e-3));
}

TEST_CASE("phi is the speed-weighted McKean marginal") {
  for (double u : {0.5, 0.7, 3.0})
    for (double v : {0.1, 1.0, 4.0}) {
      CHECK(phi_density(u, v) == Approx(u * mckean_marginal_density(u, v)));
      CHECK(phi_density(-u, -v) == Approx(phi_density(u, v)));
      CHECK(phi_density(u, v) == Approx(phi_density(v, u)).epsilon(1e-12));
      CHECK(phi_density(-u, v) == 0.0);
    }
}

TEST_CASE("h-functions on the boundary") {
  CHECK(h_v_zero(1.0, 1.0) == Approx(0.238732414637843).epsilon(1e-12));
  CHECK(hbar0_zero(1.0) == Approx(3.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(hbar0_zero(4.0) == Approx(hbar0_zero(1.0) / 32.0).epsilon(1e-12));
}

TEST_CASE("n-prime joint density and Lefebvre law") {
  CHECK(nprime_joint_density(1, 1) == Approx(0.206230300869188908).epsilon(1e-10));
  CHECK(lefebvre_density(1.0) == Approx(0.181046386524603087).epsilon(1e-10));
  CHECK(c1_constant() == Approx(1.61709806015926736).epsilon(1e-10));
  const double h = 1e-5;
  const double d = (lefebvre_cdf(0.8 + h) - lefebvre_cdf(0.8 - h)) / (2 * h);
  CHECK(d == Approx(lefebvre_density(0.8)).epsilon(1e-6));
  CHECK(lefebvre_cdf(1e12) == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(transition_density(0.0, {0, 0}, {0, 0}), DomainError);
  CHECK_THROWS_AS(transition_density(-1.0, {0, 0}, {0, 0}), DomainError);
  CHECK_THROWS_AS(mckean_marginal_density(-1.0, 1.0), DomainError);
}
