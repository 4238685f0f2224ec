#include "langevin/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "langevin/rng.hpp"
#include "langevin/types.hpp"

namespace langevin {

const Claim& find_claim(const std::string& id) {
  for (const auto& c : claim_registry())
    if (c.id == id) return c;
  throw DomainError("unknown claim id: " + id);
}

void ExperimentSpec::validate() const {
  if (id.empty()) throw DomainError("experiment id must not be empty");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale must be > 0");
  std::set<std::string> seen;
  for (const auto& c : claims) {
    find_claim(c);
    if (!seen.insert(c).second) throw DomainError("claim listed twice: " + c);
  }
}

std::uint64_t claim_seed(std::uint64_t suite_seed, const std::string& claim_id) {
  // FNV-1a of the id keeps the seed independent of registry order.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : claim_id) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return derive_seed(suite_seed, h);
}

namespace {

nlohmann::json to_json(const TestReport& r) {
  nlohmann::json j;
  j["claim"] = r.claim;
  j["statistic"] = std::isfinite(r.statistic) ? nlohmann::json(r.statistic) : nlohmann::json(nullptr);
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::string report_json(const TestReport& r) { return to_json(r).dump(); }

std::string reports_json(const std::vector<TestReport>& rs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a.dump(2);
}

std::string report_line(const TestReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "[%s] %-32s statistic=%-12.6g threshold=%-10.4g n=%-9zu %.0f ms",
                r.pass ? "PASS" : "FAIL", r.claim.c_str(), r.statistic, r.threshold, r.n,
                r.runtime_ms);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << csv_number(row[i]);
    f << '\n';
  }
}

std::vector<TestReport> run_suite(const ExperimentSpec& spec,
                                  const std::function<void(const TestReport&)>& on_report) {
  spec.validate();
  std::vector<const Claim*> selected;
  if (!spec.claims.empty()) {
    for (const auto& id : spec.claims) selected.push_back(&find_claim(id));
  } else {
    for (const auto& c : claim_registry())
      if (!spec.quick || c.quick) selected.push_back(&c);
  }
  if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);

  std::vector<TestReport> reports;
  for (const Claim* c : selected) {
    TestReport r;
    r.claim = c->id;
    r.criterion = c->criterion;
    r.seed = claim_seed(spec.seed, c->id);
    const auto t0 = std::chrono::steady_clock::now();
    ClaimOutcome o;
    try {
      o = c->run(ClaimContext{r.seed, spec.scale});
      r.statistic = o.statistic;
      r.threshold = o.threshold;
      r.pass = o.pass;
      r.n = o.n;
      r.details = o.details;
    } catch (const std::exception& e) {
      r.pass = false;
      r.statistic = std::numeric_limits<double>::quiet_NaN();
      r.details.push_back(std::string("error: ") + e.what());
    }
    r.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!spec.out_dir.empty() && !o.csv_header.empty())
      write_csv(spec.out_dir + "/" + c->id + ".csv", o.csv_header, o.csv_rows);
    if (on_report) on_report(r);
    reports.push_back(std::move(r));
  }
  if (!spec.out_dir.empty()) {
    std::ofstream f(spec.out_dir + "/report.json", std::ios::binary);
    f << reports_json(reports) << '\n';
  }
  return reports;
}

}  // namespace langevin
