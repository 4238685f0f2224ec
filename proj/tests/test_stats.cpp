#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "langevin/rng.hpp"
#include "langevin/stats.hpp"

using namespace langevin;
using doctest::Approx;

TEST_CASE("distribution tails") {
  CHECK(chi2_sf(3.841458820694124, 1) == Approx(0.05).epsilon(1e-8));
  CHECK(chi2_sf(18.307038053275146, 10) == Approx(0.05).epsilon(1e-8));
  CHECK(kolmogorov_sf(1.3580986393225507) == Approx(0.05).epsilon(1e-6));
  CHECK(kolmogorov_sf(0.0) == 1.0);
}

TEST_CASE("KS tests accept matching and reject shifted samples") {
  RngStream rng(1, 0);
  std::vector<double> a, b, c;
  for (int i = 0; i < 5000; ++i) {
    a.push_back(rng.uniform());
    b.push_back(rng.uniform());
    c.push_back(rng.uniform() + 0.1);
  }
  CHECK(ks_test(a, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 1e-3);
  CHECK(two_sample_ks(a, b).p_value > 1e-3);
  CHECK(two_sample_ks(a, c).p_value < 1e-6);
  const std::vector<double> ones(a.size(), 1.0);
  CHECK(weighted_two_sample_ks(a, ones, b, ones).statistic ==
        Approx(two_sample_ks(a, b).statistic).epsilon(1e-12));
  CHECK(weighted_ks_distance(a, ones, a, ones) == 0.0);
}

TEST_CASE("grid location") {
  BinGrid2D g{{0, 1, 2}, {0, 1, 2, 3}};
  CHECK(g.cells() == 6);
  CHECK(g.locate(0.5, 0.5) == 0);
  CHECK(g.locate(1.5, 2.5) == 5);
  CHECK(g.locate(-0.1, 0.5) == -1);
  CHECK(g.locate(0.5, 3.1) == -1);
  const auto e = BinGrid2D::linspace(0, 1, 4);
  CHECK(e.size() == 5);
  CHECK(e.back() == 1.0);
}

TEST_CASE("Pearson chi-square with equal weights") {
  // Counts 30, 20, 50 against probabilities 0.25, 0.25, 0.5.
  std::vector<int> bins;
  for (int i = 0; i < 30; ++i) bins.push_back(0);
  for (int i = 0; i < 20; ++i) bins.push_back(1);
  for (int i = 0; i < 50; ++i) bins.push_back(2);
  const std::vector<double> w(bins.size(), 1.0);
  const TestStat t = chi2_binned(bins, w, {0.25, 0.25, 0.5});
  CHECK(t.statistic == Approx(2.0).epsilon(1e-10));
  CHECK(t.dof == 2.0);
  CHECK(t.p_value == Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("sparse bins are reported") {
  std::vector<int> bins(20, 0);
  const std::vector<double> w(bins.size(), 1.0);
  try {
    chi2_binned(bins, w, {0.99, 0.01});
    FAIL("expected SparseBinError");
  } catch (const SparseBinError& e) {
    REQUIRE(e.bins().size() == 1);
    CHECK(e.bins()[0] == 1);
  }
}

TEST_CASE("cell masses of a product density") {
  BinGrid2D g{{0, 0.5, 1}, {0, 1}};
  const auto m = cell_masses([](double x, double y) { return 2 * x * 1.0 + 0 * y; }, g,
                             {1e-12, 1e-10, 30});
  CHECK(m[0] == Approx(0.25).epsilon(1e-10));
  CHECK(m[1] == Approx(0.75).epsilon(1e-10));
}

TEST_CASE("homogeneity of identical samples") {
  RngStream rng(2, 0);
  std::vector<int> a, b;
  for (int i = 0; i < 4000; ++i) {
    a.push_back(static_cast<int>(rng.uniform() * 4));
    b.push_back(static_cast<int>(rng.uniform() * 4));
  }
  const std::vector<double> w(a.size(), 1.0);
  CHECK(chi2_homogeneity(a, w, b, w, 4).p_value > 1e-3);
}

TEST_CASE("exchange symmetry statistic") {
  const TestStat t = symmetry_test({0, 5, 3, 0}, {0, 5, 3, 0}, 2);
  CHECK(t.statistic == Approx(0.5));
  CHECK(t.dof == 1.0);
  CHECK_THROWS_AS(symmetry_test({1, 2, 3}, {1, 2, 3}, 2), DomainError);
}
