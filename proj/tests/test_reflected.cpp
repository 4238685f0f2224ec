#include <cmath>
#include <vector>

#include "doctest.h"
#include "langevin/reflected.hpp"

using namespace langevin;
using doctest::Approx;

namespace {

Path make_path(const std::vector<double>& t, const std::vector<PhaseState>& z) {
  return Path(t, z);
}

}  // namespace

TEST_CASE("Skorokhod reflection subtracts the running minimum") {
  const Path p = make_path({0, 1, 2, 3}, {{0, 1}, {-1, -1}, {0.5, 2}, {-2, 0}});
  const Path r = skorokhod_reflect(p);
  CHECK(r.state(0).x == 0.0);
  CHECK(r.state(1).x == 0.0);
  CHECK(r.state(2).x == 1.5);
  CHECK(r.state(3).x == 0.0);
  CHECK(r.state(2).u == 2.0);
}

TEST_CASE("time change excises boundary runs") {
  // Boundary runs: samples 0..1 and 3..5.
  const Path p = make_path({0, 1, 2, 3, 4, 5, 6},
                           {{0, 0}, {0, 1}, {1, 1}, {0, -1}, {0, 0}, {0, 2}, {2, 1}});
  auto [rp, map] = time_change(p, 1e-9);
  REQUIRE(map.excised.size() == 2);
  CHECK(map.excised[0] == std::pair<double, double>{0, 1});
  CHECK(map.excised[1] == std::pair<double, double>{3, 5});
  CHECK(map.excised_length() == 3.0);
  REQUIRE(rp.path.size() == 4);
  CHECK(rp.path.times() == std::vector<double>{0, 1, 2, 3});
  CHECK(rp.boundary == std::vector<bool>{true, false, true, false});
  CHECK(rp.path.state(2).u == 0.0);
  CHECK(map.to_post(0.5) == 0.0);
  CHECK(map.to_post(2.0) == 1.0);
  CHECK(map.to_post(6.0) == 3.0);
  CHECK(map.to_pre(1.0) == 2.0);
  CHECK(map.to_pre(2.5) == 5.5);
  CHECK(map.to_post(map.to_pre(2.5)) == 2.5);
  CHECK_THROWS_AS(time_change(make_path({0, 1}, {{-1, 0}, {0, 0}}), 1e-9), DomainError);
}

TEST_CASE("excursion extraction") {
  ReflectedPath rp;
  rp.path = make_path({0, 1, 2, 3, 4, 5, 6}, {{0, 0}, {1, 2}, {3, 1}, {0, 0}, {0.1, 1}, {0, 0}, {4, 1}});
  rp.boundary = {true, false, false, true, false, true, false};
  const auto all = extract_excursions(rp, 0.0);
  REQUIRE(all.size() == 2);
  CHECK(all[0].u0 == 2.0);
  CHECK(all[0].zeta == 3.0);
  CHECK(all[0].v_end == -1.0);
  CHECK(all[0].max_abs_height == 3.0);
  CHECK(all[0].argmax_time == 2.0);
  CHECK(all[1].zeta == 2.0);
  CHECK(extract_excursions(rp, 0.5).size() == 1);
}

TEST_CASE("functional tags round-trip") {
  for (const Functional& f :
       {Functional::lifetime_above(1), Functional::height_above(0.5),
        Functional::end_velocity_in(0.5, 2), Functional::lifetime_and_velocity_in(0.5, 1.5, 0.5, 2)}) {
    CHECK(Functional::parse(f.tag()).tag() == f.tag());
  }
  CHECK(Functional::parse("zeta>1").kind == Functional::Kind::kLifetimeAbove);
  CHECK_THROWS_AS(Functional::parse("zeta>1x"), DomainError);
  CHECK_THROWS_AS(Functional::parse("bogus"), DomainError);
}

TEST_CASE("functional scaling") {
  CHECK(Functional::lifetime_above(1).scaled(2).a == 4.0);
  CHECK(Functional::height_above(1).scaled(2).a == 8.0);
  const Functional v = Functional::end_velocity_in(0.5, 2).scaled(2);
  CHECK(v.a == 1.0);
  CHECK(v.b == 4.0);
  const Functional j = Functional::lifetime_and_velocity_in(0.5, 1.5, 0.5, 2).scaled(2);
  CHECK(j.s_lo == 2.0);
  CHECK(j.s_hi == 6.0);
  CHECK_THROWS_AS(Functional::lifetime_above(1).scaled(0), DomainError);
}

TEST_CASE("functional evaluation") {
  ExcursionRecord e;
  e.zeta = 1.2;
  e.v_end = 0.7;
  e.max_abs_height = 0.3;
  CHECK(Functional::lifetime_above(1).evaluate(e) == 1.0);
  CHECK(Functional::height_above(0.5).evaluate(e) == 0.0);
  CHECK(Functional::end_velocity_in(0.5, 2).evaluate(e) == 1.0);
  CHECK(Functional::lifetime_and_velocity_in(0.5, 1.0, 0.5, 2).evaluate(e) == 0.0);
}

TEST_CASE("simulated reflected path is nonnegative with zero boundary velocity") {
  StepConfig cfg;
  cfg.step = 0.01;
  RngStream rng(8, 0);
  const ReflectedPath rp = simulate_reflected(2.0, cfg, rng);
  CHECK(rp.path.times().back() >= 2.0);
  for (std::size_t i = 0; i < rp.path.size(); ++i) {
    CHECK(rp.path.state(i).x >= 0.0);
    if (rp.boundary[i]) CHECK(rp.path.state(i).u == 0.0);
  }
}

TEST_CASE("occupation grids merge additively") {
  StepConfig cfg;
  cfg.step = 0.01;
  const BinGrid2D box{{0, 0.5, 1}, {-1, 0, 1}};
  RngStream rng(12, 0);
  OccupationBudget budget;
  budget.excursions = 200;
  OccupationGrid a = reflected_occupation(budget, box, 1e-2, cfg, rng, 2);
  const OccupationGrid b = a;
  CHECK(a.excursions >= 200);
  a.merge(b);
  CHECK(a.excursions == 2 * b.excursions);
  CHECK(a.total_time == Approx(2 * b.total_time));
  CHECK(a.time_in_cell[0] == Approx(2 * b.time_in_cell[0]));
}
