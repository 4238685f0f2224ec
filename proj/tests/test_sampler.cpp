#include <cmath>
#include <vector>

#include "doctest.h"
#include "langevin/densities.hpp"
#include "langevin/rng.hpp"
#include "langevin/sampler.hpp"
#include "langevin/stats.hpp"

using namespace langevin;
using doctest::Approx;

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(7, 3), b(7, 3), c(7, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs = differs || x != c.normal();
  }
  CHECK(differs);
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("exact step has the Kolmogorov mean and covariance") {
  RngStream rng(11, 0);
  const PhaseState z{0.3, -0.8};
  const double s = 0.5;
  const int n = 200000;
  double mx = 0, mu = 0, sxx = 0, suu = 0, sxu = 0;
  for (int i = 0; i < n; ++i) {
    const PhaseState w = kolmogorov_step(z, s, rng);
    const double dx = w.x - (z.x + z.u * s), du = w.u - z.u;
    mx += dx, mu += du, sxx += dx * dx, suu += du * du, sxu += dx * du;
  }
  mx /= n, mu /= n, sxx /= n, suu /= n, sxu /= n;
  CHECK(std::abs(mx) < 5 * std::sqrt(s * s * s / 3 / n));
  CHECK(std::abs(mu) < 5 * std::sqrt(s / n));
  CHECK(sxx == Approx(s * s * s / 3).epsilon(0.02));
  CHECK(suu == Approx(s).epsilon(0.02));
  CHECK(sxu == Approx(s * s / 2).epsilon(0.02));
}

TEST_CASE("path is deterministic given the stream") {
  StepConfig cfg;
  cfg.step = 0.01;
  RngStream a(5, 1), b(5, 1);
  CHECK(simulate_path({0, 1}, 1.0, cfg, a) == simulate_path({0, 1}, 1.0, cfg, b));
}

TEST_CASE("path operators") {
  StepConfig cfg;
  cfg.step = 0.05;
  RngStream rng(9, 0);
  const Path p = simulate_path({0.2, 0.5}, 1.0, cfg, rng);
  CHECK(conjugate_path(conjugate_path(p)) == p);
  const Path rr = reverse_path(reverse_path(p));
  REQUIRE(rr.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(rr.time(i) == Approx(p.time(i)).epsilon(1e-12));
    CHECK(rr.state(i) == p.state(i));
  }
  const Path r = reverse_path(p);
  CHECK(r.front().x == p.back().x);
  CHECK(r.front().u == -p.back().u);
  const Path sc = scale_path(scale_path(p, 2.0), 0.5);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(sc.time(i) == Approx(p.time(i)).epsilon(1e-14));
    CHECK(sc.state(i).x == Approx(p.state(i).x).epsilon(1e-14));
  }
  const Path s2 = scale_path(p, 2.0);
  CHECK(s2.times().back() == Approx(p.times().back() / 4));
  CHECK(s2.back().x == Approx(p.back().x / 8));
  CHECK_THROWS_AS(scale_path(p, 0.0), DomainError);
}

TEST_CASE("path rejects non-increasing times") {
  Path p;
  p.push_back(0.0, {0, 0});
  CHECK_THROWS(p.push_back(0.0, {1, 1}));
}

TEST_CASE("exact first-passage velocity follows the McKean marginal") {
  RngStream rng(3, 0);
  std::vector<double> v;
  for (int i = 0; i < 20000; ++i) v.push_back(sample_first_passage_endpoint(1.0, rng).second);
  const TestStat ks = ks_test(v, [](double x) { return mckean_marginal_cdf(1.0, x); });
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("simulated excursion ends at zero with a recorded path") {
  StepConfig cfg;
  cfg.step = 0.01;
  RngStream rng(4, 0);
  const ExcursionRecord e = simulate_excursion(1.0, cfg, rng, true);
  CHECK(e.zeta > 0.0);
  CHECK(e.v_end >= 0.0);
  REQUIRE(e.path.has_value());
  CHECK(e.path->front() == PhaseState{0.0, 1.0});
  CHECK(e.path->back().x == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(e.max_abs_height > 0.0);
}
