#ifndef LANGEVIN_HARNESS_HPP
#define LANGEVIN_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace langevin {

/// What a claim check hands back to the runner.
struct ClaimOutcome {
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t n = 0;
  /// Human-readable lines printed under the report line.
  std::vector<std::string> details;
  /// Optional per-claim CSV artifact: header and rows.
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
};

struct ClaimContext {
  std::uint64_t seed = 42;
  /// Multiplies Monte Carlo sizes; 1 is the registered size.
  double scale = 1.0;
};

struct Claim {
  std::string id;
  /// Acceptance criterion 1-11; 0 marks a supplementary check.
  int criterion = 0;
  std::string description;
  /// Part of the fast analytic subset run by `verify --quick`.
  bool quick = false;
  std::function<ClaimOutcome(const ClaimContext&)> run;
};

/// All registered claims.
const std::vector<Claim>& claim_registry();
const Claim& find_claim(const std::string& id);

struct TestReport {
  std::string claim;
  int criterion = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double runtime_ms = 0.0;
  std::vector<std::string> details;
};

struct ExperimentSpec {
  std::string id = "verify";
  std::vector<std::string> claims;  ///< empty means all selected by `quick`
  bool quick = false;
  std::uint64_t seed = 42;
  double scale = 1.0;
  std::string out_dir;  ///< empty: write nothing

  /// Throws DomainError on unknown claims or bad parameters.
  void validate() const;
};

/// Seed of one claim: fixed by the suite seed and the claim id only.
std::uint64_t claim_seed(std::uint64_t suite_seed, const std::string& claim_id);

/// Runs the selected claims. A claim that throws is reported as failed with
/// the error in its details. Writes report.json and per-claim CSVs when
/// out_dir is set. `on_report` sees each report as soon as it is ready.
std::vector<TestReport> run_suite(const ExperimentSpec& spec,
                                  const std::function<void(const TestReport&)>& on_report = {});

/// JSON object with sorted keys: claim, n, pass, runtime_ms, seed, statistic, threshold.
std::string report_json(const TestReport& r);
std::string reports_json(const std::vector<TestReport>& rs);
std::string report_line(const TestReport& r);

/// Writes rows as CSV ('.' decimal, header row, LF endings).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace langevin

#endif  // LANGEVIN_HARNESS_HPP
