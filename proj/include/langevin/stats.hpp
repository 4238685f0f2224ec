#ifndef LANGEVIN_STATS_HPP
#define LANGEVIN_STATS_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "langevin/quadrature.hpp"

namespace langevin {

struct TestStat {
  double statistic = 0.0;
  double p_value = 1.0;
  double dof = 0.0;
};

/// Some bins have too little expected mass for the chi-square approximation.
class SparseBinError : public std::runtime_error {
 public:
  SparseBinError(const std::string& what, std::vector<int> bins)
      : std::runtime_error(what), bins_(std::move(bins)) {}
  const std::vector<int>& bins() const { return bins_; }

 private:
  std::vector<int> bins_;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_sf(double lambda);
/// Upper tail of the chi-square distribution.
double chi2_sf(double x, double dof);

/// One-sample KS with the Stephens small-sample correction.
TestStat ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

TestStat two_sample_ks(std::vector<double> a, std::vector<double> b);

/// Weighted two-sample KS; sample sizes are replaced by Kish effective sizes.
TestStat weighted_two_sample_ks(const std::vector<double>& a, const std::vector<double>& wa,
                                const std::vector<double>& b, const std::vector<double>& wb);

/// Largest gap between the weighted empirical CDFs.
double weighted_ks_distance(const std::vector<double>& a, const std::vector<double>& wa,
                            const std::vector<double>& b, const std::vector<double>& wb);

/// Rectangular grid with sorted edges. Cell index is ix * (ny) + iy; -1 if outside.
struct BinGrid2D {
  std::vector<double> x_edges;
  std::vector<double> y_edges;

  int nx() const { return static_cast<int>(x_edges.size()) - 1; }
  int ny() const { return static_cast<int>(y_edges.size()) - 1; }
  int cells() const { return nx() * ny(); }
  int locate(double x, double y) const;
  static std::vector<double> linspace(double lo, double hi, int n);
};

/// Goodness of fit of binned weighted data to cell probabilities `probs`
/// (conditional on landing in the grid). Equal weights give Pearson's
/// statistic; otherwise the ratio-estimator (delta-method) covariance is used.
/// Throws SparseBinError if some n_eff * prob < min_expected.
TestStat chi2_binned(const std::vector<int>& bin_of_sample, const std::vector<double>& weights,
                     const std::vector<double>& probs, double min_expected = 5.0);

/// chi2_binned against a 2-D density integrated numerically over each cell.
TestStat chi2_weighted(const std::vector<std::array<double, 2>>& points,
                       const std::vector<double>& weights,
                       const std::function<double(double, double)>& density, const BinGrid2D& grid,
                       const QuadConfig& cfg = {1e-9, 1e-7, 30});

/// Cell masses of a density over the grid, each cell by nested adaptive quadrature.
std::vector<double> cell_masses(const std::function<double(double, double)>& density,
                                const BinGrid2D& grid, const QuadConfig& cfg);

/// Exchange symmetry of a square binned weighted sample: H0 says cell (i, j)
/// and cell (j, i) have the same mass. Uses the pairs i < j.
TestStat symmetry_test(const std::vector<double>& w, const std::vector<double>& w2, int k);

/// Homogeneity of two independent weighted binned samples.
TestStat chi2_homogeneity(const std::vector<int>& bins_a, const std::vector<double>& wa,
                          const std::vector<int>& bins_b, const std::vector<double>& wb, int cells,
                          double min_expected = 5.0);

}  // namespace langevin

#endif  // LANGEVIN_STATS_HPP
