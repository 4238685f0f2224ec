#ifndef LANGEVIN_ENSEMBLE_HPP
#define LANGEVIN_ENSEMBLE_HPP

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "langevin/types.hpp"

namespace langevin {

enum class Normalization { kSelf, kAbsolute };

/// Samples with nonnegative importance weights. Under kAbsolute the weights
/// estimate a measure (sum / n is the estimate); under kSelf only ratios matter.
template <class T>
struct WeightedEnsemble {
  std::vector<T> items;
  std::vector<double> weights;
  Normalization normalization = Normalization::kSelf;
  /// Number of raw draws behind the ensemble (>= items.size() when some
  /// draws were discarded with zero weight).
  std::size_t draws = 0;

  void push_back(T item, double w) {
    items.push_back(std::move(item));
    weights.push_back(w);
  }
  std::size_t size() const { return items.size(); }

  void validate() const {
    if (items.size() != weights.size()) throw DomainError("WeightedEnsemble: length mismatch");
    bool any = false;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) throw DomainError("WeightedEnsemble: bad weight");
      any = any || w > 0.0;
    }
    if (!any) throw DomainError("WeightedEnsemble: all weights zero");
  }

  double total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

  /// Kish effective sample size (sum w)^2 / sum w^2.
  double effective_size() const {
    double s = 0.0, s2 = 0.0;
    for (double w : weights) {
      s += w;
      s2 += w * w;
    }
    return s2 > 0.0 ? s * s / s2 : 0.0;
  }

  /// Appends another ensemble; associative, so merging in a fixed order is
  /// deterministic.
  void merge(const WeightedEnsemble& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
    draws += other.draws;
  }
};

/// Mean and standard error of a Monte Carlo estimate.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

/// Running mean/variance (Welford), mergeable across streams.
class MeanAccumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  void merge(const MeanAccumulator& o) {
    if (o.n_ == 0) return;
    const double n = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  Estimate estimate(double scale = 1.0) const {
    return {scale * mean_, scale * std::sqrt(variance() / std::max<std::size_t>(n_, 1)), n_};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace langevin

#endif  // LANGEVIN_ENSEMBLE_HPP
