#include "langevin/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

namespace langevin {

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double chi2_sf(double x, double dof) {
  if (!(dof > 0.0)) throw DomainError("chi2_sf: dof must be > 0");
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

namespace {

double ks_p(double d, double n) {
  const double sn = std::sqrt(n);
  return kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
}

}  // namespace

TestStat ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < 10) throw DomainError("ks_test: need at least 10 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    if (!std::isfinite(f)) throw DomainError("ks_test: cdf returned a non-finite value");
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return {d, ks_p(d, n), 0.0};
}

double weighted_ks_distance(const std::vector<double>& a, const std::vector<double>& wa,
                            const std::vector<double>& b, const std::vector<double>& wb) {
  if (a.size() != wa.size() || b.size() != wb.size())
    throw DomainError("weighted KS: weight length mismatch");
  struct Item {
    double x;
    double w;
    int side;
  };
  std::vector<Item> all;
  all.reserve(a.size() + b.size());
  const double sa = std::accumulate(wa.begin(), wa.end(), 0.0);
  const double sb = std::accumulate(wb.begin(), wb.end(), 0.0);
  if (!(sa > 0.0) || !(sb > 0.0)) throw DomainError("weighted KS: empty sample");
  for (std::size_t i = 0; i < a.size(); ++i) all.push_back({a[i], wa[i] / sa, 0});
  for (std::size_t i = 0; i < b.size(); ++i) all.push_back({b[i], wb[i] / sb, 1});
  std::sort(all.begin(), all.end(), [](const Item& p, const Item& q) { return p.x < q.x; });
  double fa = 0.0, fb = 0.0, d = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    const double x = all[i].x;
    for (; i < all.size() && all[i].x == x; ++i) (all[i].side == 0 ? fa : fb) += all[i].w;
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

TestStat two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("two_sample_ks: samples too small");
  const std::vector<double> wa(a.size(), 1.0), wb(b.size(), 1.0);
  const double d = weighted_ks_distance(a, wa, b, wb);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  return {d, ks_p(d, na * nb / (na + nb)), 0.0};
}

namespace {

double kish(const std::vector<double>& w) {
  double s = 0.0, s2 = 0.0;
  for (double x : w) {
    s += x;
    s2 += x * x;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

}  // namespace

TestStat weighted_two_sample_ks(const std::vector<double>& a, const std::vector<double>& wa,
                                const std::vector<double>& b, const std::vector<double>& wb) {
  const double d = weighted_ks_distance(a, wa, b, wb);
  const double na = kish(wa), nb = kish(wb);
  if (na < 2.0 || nb < 2.0) throw DomainError("weighted KS: effective sample too small");
  return {d, ks_p(d, na * nb / (na + nb)), 0.0};
}

int BinGrid2D::locate(double x, double y) const {
  if (x_edges.size() < 2 || y_edges.size() < 2) return -1;
  if (!(x >= x_edges.front() && x < x_edges.back())) return -1;
  if (!(y >= y_edges.front() && y < y_edges.back())) return -1;
  const int ix = static_cast<int>(std::upper_bound(x_edges.begin(), x_edges.end(), x) -
                                  x_edges.begin()) - 1;
  const int iy = static_cast<int>(std::upper_bound(y_edges.begin(), y_edges.end(), y) -
                                  y_edges.begin()) - 1;
  return ix * ny() + iy;
}

std::vector<double> BinGrid2D::linspace(double lo, double hi, int n) {
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) e[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;
  return e;
}

namespace {

// Covariance of the weighted cell proportions (first k-1 cells) from per-sample
// influence terms (w/wbar)(1{cell} - centre).
Eigen::MatrixXd proportion_cov(const std::vector<int>& bins, const std::vector<double>& w,
                               const std::vector<double>& centre, double& n_in) {
  const int k = static_cast<int>(centre.size());
  double sw = 0.0;
  n_in = 0.0;
  for (std::size_t j = 0; j < bins.size(); ++j)
    if (bins[j] >= 0) {
      sw += w[j];
      n_in += 1.0;
    }
  const double wbar = sw / n_in;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k - 1, k - 1);
  Eigen::VectorXd psi(k - 1);
  for (std::size_t j = 0; j < bins.size(); ++j) {
    if (bins[j] < 0) continue;
    const double r = w[j] / wbar;
    for (int i = 0; i < k - 1; ++i) psi(i) = r * ((bins[j] == i ? 1.0 : 0.0) - centre[i]);
    c.selfadjointView<Eigen::Lower>().rankUpdate(psi);
  }
  c = c.selfadjointView<Eigen::Lower>();
  return c / (n_in * n_in);
}

std::vector<double> proportions(const std::vector<int>& bins, const std::vector<double>& w,
                                int k) {
  std::vector<double> p(static_cast<std::size_t>(k), 0.0);
  double s = 0.0;
  for (std::size_t j = 0; j < bins.size(); ++j)
    if (bins[j] >= 0) {
      p[static_cast<std::size_t>(bins[j])] += w[j];
      s += w[j];
    }
  if (!(s > 0.0)) throw DomainError("chi2: no weight inside the grid");
  for (double& x : p) x /= s;
  return p;
}

double kish_inside(const std::vector<int>& bins, const std::vector<double>& w) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < bins.size(); ++j)
    if (bins[j] >= 0) {
      s += w[j];
      s2 += w[j] * w[j];
    }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

double quad_form(const Eigen::VectorXd& d, const Eigen::MatrixXd& c) {
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
  if (ldlt.info() != Eigen::Success) throw DomainError("chi2: singular covariance");
  return d.dot(ldlt.solve(d));
}

}  // namespace

TestStat chi2_binned(const std::vector<int>& bin_of_sample, const std::vector<double>& weights,
                     const std::vector<double>& probs, double min_expected) {
  if (bin_of_sample.size() != weights.size()) throw DomainError("chi2: weight length mismatch");
  const int k = static_cast<int>(probs.size());
  if (k < 2) throw DomainError("chi2: need at least two bins");
  const double psum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(psum > 0.0)) throw DomainError("chi2: probabilities sum to zero");
  std::vector<double> pi(probs);
  for (double& x : pi) x /= psum;
  for (int b : bin_of_sample)
    if (b >= k) throw DomainError("chi2: bin index out of range");

  const double ne = kish_inside(bin_of_sample, weights);
  std::vector<int> sparse;
  for (int i = 0; i < k; ++i)
    if (ne * pi[static_cast<std::size_t>(i)] < min_expected) sparse.push_back(i);
  if (!sparse.empty()) {
    std::string msg = "chi2: sparse bins:";
    for (int i : sparse) msg += " " + std::to_string(i);
    throw SparseBinError(msg, sparse);
  }

  const std::vector<double> p = proportions(bin_of_sample, weights, k);
  bool equal = true;
  double w0 = -1.0;
  for (std::size_t j = 0; j < weights.size() && equal; ++j) {
    if (bin_of_sample[j] < 0) continue;
    if (w0 < 0.0) w0 = weights[j];
    equal = weights[j] == w0;
  }
  if (equal) {
    double x2 = 0.0;
    for (int i = 0; i < k; ++i) {
      const double e = ne * pi[static_cast<std::size_t>(i)];
      const double o = ne * p[static_cast<std::size_t>(i)];
      x2 += (o - e) * (o - e) / e;
    }
    return {x2, chi2_sf(x2, k - 1), static_cast<double>(k - 1)};
  }
  double n_in = 0.0;
  const Eigen::MatrixXd c = proportion_cov(bin_of_sample, weights, pi, n_in);
  Eigen::VectorXd d(k - 1);
  for (int i = 0; i < k - 1; ++i) d(i) = p[static_cast<std::size_t>(i)] - pi[static_cast<std::size_t>(i)];
  const double x2 = quad_form(d, c);
  return {x2, chi2_sf(x2, k - 1), static_cast<double>(k - 1)};
}

std::vector<double> cell_masses(const std::function<double(double, double)>& density,
                                const BinGrid2D& grid, const QuadConfig& cfg) {
  std::vector<double> m(static_cast<std::size_t>(grid.cells()));
  QuadConfig inner = cfg;
  inner.abs_tol *= 0.1;
  inner.rel_tol *= 0.1;
  for (int ix = 0; ix < grid.nx(); ++ix)
    for (int iy = 0; iy < grid.ny(); ++iy) {
      const double y0 = grid.y_edges[iy], y1 = grid.y_edges[iy + 1];
      auto fx = [&](double x) {
        return integrate_interval([&](double y) { return density(x, y); }, y0, y1, inner).value;
      };
      m[static_cast<std::size_t>(ix * grid.ny() + iy)] =
          integrate_interval(fx, grid.x_edges[ix], grid.x_edges[ix + 1], cfg).value;
    }
  return m;
}

TestStat chi2_weighted(const std::vector<std::array<double, 2>>& points,
                       const std::vector<double>& weights,
                       const std::function<double(double, double)>& density, const BinGrid2D& grid,
                       const QuadConfig& cfg) {
  if (points.size() != weights.size()) throw DomainError("chi2: weight length mismatch");
  std::vector<int> bins(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) bins[j] = grid.locate(points[j][0], points[j][1]);
  return chi2_binned(bins, weights, cell_masses(density, grid, cfg));
}

TestStat symmetry_test(const std::vector<double>& w, const std::vector<double>& w2, int k) {
  if (w.size() != static_cast<std::size_t>(k * k) || w2.size() != w.size())
    throw DomainError("symmetry_test: expected k*k cells");
  double x2 = 0.0;
  int dof = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double v = w2[i * k + j] + w2[j * k + i];
      if (!(v > 0.0)) continue;
      const double d = w[i * k + j] - w[j * k + i];
      x2 += d * d / v;
      ++dof;
    }
  if (dof == 0) throw DomainError("symmetry_test: no populated off-diagonal pairs");
  return {x2, chi2_sf(x2, dof), static_cast<double>(dof)};
}

TestStat chi2_homogeneity(const std::vector<int>& bins_a, const std::vector<double>& wa,
                          const std::vector<int>& bins_b, const std::vector<double>& wb, int cells,
                          double min_expected) {
  if (bins_a.size() != wa.size() || bins_b.size() != wb.size())
    throw DomainError("chi2_homogeneity: weight length mismatch");
  if (cells < 2) throw DomainError("chi2_homogeneity: need at least two bins");
  const std::vector<double> pa = proportions(bins_a, wa, cells);
  const std::vector<double> pb = proportions(bins_b, wb, cells);
  const double na = kish_inside(bins_a, wa), nb = kish_inside(bins_b, wb);
  std::vector<int> sparse;
  for (int i = 0; i < cells; ++i) {
    const double pool = 0.5 * (pa[i] + pb[i]);
    if (na * pool < min_expected || nb * pool < min_expected) sparse.push_back(i);
  }
  if (!sparse.empty()) {
    std::string msg = "chi2_homogeneity: sparse bins:";
    for (int i : sparse) msg += " " + std::to_string(i);
    throw SparseBinError(msg, sparse);
  }
  double n1 = 0.0, n2 = 0.0;
  const Eigen::MatrixXd c = proportion_cov(bins_a, wa, pa, n1) + proportion_cov(bins_b, wb, pb, n2);
  Eigen::VectorXd d(cells - 1);
  for (int i = 0; i < cells - 1; ++i) d(i) = pa[i] - pb[i];
  const double x2 = quad_form(d, c);
  return {x2, chi2_sf(x2, cells - 1), static_cast<double>(cells - 1)};
}

}  // namespace langevin
