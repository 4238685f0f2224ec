#include <cmath>

#include "doctest.h"
#include "langevin/htransform.hpp"

using namespace langevin;
using doctest::Approx;

TEST_CASE("geometric grid") {
  const auto g = geometric_grid(0.02, 50.0, 49);
  REQUIRE(g.size() == 49);
  CHECK(g.front() == Approx(0.02));
  CHECK(g.back() == Approx(50.0));
  CHECK(g[1] / g[0] == Approx(g[48] / g[47]));
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 5), DomainError);
}

TEST_CASE("weights are one at the starting point") {
  CHECK(quv_weight({0.0, 1.0}, 1.0, 2.0) == Approx(1.0).epsilon(1e-6));
  CHECK(qu0_weight({0.0, 1.5}, 1.5) == Approx(1.0).epsilon(1e-6));
  CHECK(quv_weight({0.3, -0.5}, 1.0, 1.0) > 0.0);
  CHECK(qu0_weight({0.3, -0.5}, 1.0) > 0.0);
}

TEST_CASE("weighted marginal is reproducible and nonnegative") {
  StepConfig cfg;
  cfg.step = 0.01;
  RngStream a(21, 0), b(21, 0);
  const auto ea = sample_quv_marginal(1.0, 1.0, 0.25, 300, cfg, a);
  const auto eb = sample_quv_marginal(1.0, 1.0, 0.25, 300, cfg, b);
  REQUIRE(ea.items.size() == eb.items.size());
  CHECK(ea.draws == 300);
  for (std::size_t i = 0; i < ea.items.size(); ++i) {
    CHECK(ea.items[i] == eb.items[i]);
    CHECK(ea.items[i].x > 0.0);
    CHECK(ea.weights[i] >= 0.0);
  }
}

TEST_CASE("multi-weight sample reuses the same paths") {
  StepConfig cfg;
  cfg.step = 0.01;
  RngStream rng(22, 0);
  const auto m = sample_multi_weight(1.0, {0.0, 1.0}, 0.25, 200, cfg, rng);
  REQUIRE(m.weights.size() == 2);
  CHECK(m.weights[0].size() == m.states.size());
  CHECK(m.weights[1].size() == m.states.size());
}

TEST_CASE("refined maximum dominates the coarse one") {
  StepConfig cfg;
  cfg.step = 0.05;
  RngStream rng(23, 0);
  ExcursionRecord e = simulate_excursion(1.0, cfg, rng, true);
  const double coarse = e.max_abs_height;
  refine_maximum(e, 1e-4, rng);
  CHECK(e.max_abs_height >= coarse);
  CHECK(e.argmax_time >= 0.0);
  CHECK(e.argmax_time <= e.zeta);
}
