#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>

#include <json.hpp>

#include "doctest.h"
#include "langevin/harness.hpp"
#include "langevin/types.hpp"

using namespace langevin;

TEST_CASE("registry ids are unique and criteria are in range") {
  std::set<std::string> ids;
  std::set<int> criteria;
  for (const Claim& c : claim_registry()) {
    CHECK(ids.insert(c.id).second);
    CHECK(c.criterion >= 0);
    CHECK(c.criterion <= 11);
    CHECK(static_cast<bool>(c.run));
    criteria.insert(c.criterion);
  }
  for (int k = 1; k <= 11; ++k) CHECK(criteria.count(k) == 1);
}

TEST_CASE("unknown claims are rejected") {
  CHECK_THROWS_AS(find_claim("no.such.claim"), DomainError);
  ExperimentSpec spec;
  spec.claims = {"no.such.claim"};
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec.claims.clear();
  spec.scale = 0.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("claim seeds depend only on the suite seed and the id") {
  CHECK(claim_seed(42, "a") == claim_seed(42, "a"));
  CHECK(claim_seed(42, "a") != claim_seed(42, "b"));
  CHECK(claim_seed(42, "a") != claim_seed(43, "a"));
}

TEST_CASE("report JSON has sorted fixed keys") {
  TestReport r;
  r.claim = "x.y";
  r.statistic = 0.5;
  r.threshold = 0.01;
  r.pass = true;
  r.seed = 7;
  r.n = 100;
  r.runtime_ms = 1.5;
  r.details = {"not serialized"};
  const std::string s = report_json(r);
  CHECK(s == R"({"claim":"x.y","n":100,"pass":true,"runtime_ms":1.5,"seed":7,"statistic":0.5,"threshold":0.01})");
  r.statistic = std::nan("");
  CHECK(nlohmann::json::parse(report_json(r))["statistic"].is_null());
  CHECK(nlohmann::json::parse(reports_json({r, r})).size() == 2);
}

TEST_CASE("report line") {
  TestReport r;
  r.claim = "x.y";
  r.pass = false;
  CHECK(report_line(r).rfind("[FAIL] x.y", 0) == 0);
}

TEST_CASE("CSV output") {
  const auto path = std::filesystem::temp_directory_path() / "langevin_test.csv";
  write_csv(path.string(), {"a", "b"}, {{0.1, 2.0}, {-3.0, 1e-20}});
  std::ifstream f(path, std::ios::binary);
  const std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(s == "a,b\n0.10000000000000001,2\n-3,9.9999999999999995e-21\n");
  std::filesystem::remove(path);
}

TEST_CASE("quick suite runs and writes artifacts") {
  const auto dir = std::filesystem::temp_directory_path() / "langevin_quick";
  std::filesystem::remove_all(dir);
  ExperimentSpec spec;
  spec.quick = true;
  spec.out_dir = dir.string();
  int seen = 0;
  const auto reports = run_suite(spec, [&](const TestReport&) { ++seen; });
  CHECK(seen == static_cast<int>(reports.size()));
  REQUIRE_FALSE(reports.empty());
  for (const auto& r : reports) {
    CHECK(r.pass);
    CHECK(r.seed == claim_seed(42, r.claim));
  }
  std::ifstream f(dir / "report.json");
  REQUIRE(f.good());
  CHECK(nlohmann::json::parse(f).size() == reports.size());
  std::filesystem::remove_all(dir);
}

TEST_CASE("a claim's result does not depend on which other claims run") {
  ExperimentSpec one;
  one.claims = {"identities.transition"};
  ExperimentSpec quick;
  quick.quick = true;
  const auto a = run_suite(one);
  double stat = NAN;
  for (const auto& r : run_suite(quick))
    if (r.claim == "identities.transition") stat = r.statistic;
  REQUIRE(a.size() == 1);
  CHECK(a[0].statistic == stat);
}
