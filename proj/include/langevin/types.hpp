#ifndef LANGEVIN_TYPES_HPP
#define LANGEVIN_TYPES_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace langevin {

/// Invalid argument to a density, integrator or sampler.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A simulation gave up (step cap reached, rejection sampler stalled, ...).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position and velocity of the Kolmogorov pair (Y, W).
struct PhaseState {
  double x = 0.0;
  double u = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(u); }
  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Initial velocity u and negated terminal velocity v = -W_{zeta-} of an excursion.
struct VelocityPair {
  double u = 0.0;
  double v = 0.0;
};

/// Discretized trajectory. Times strictly increase; one state per time.
class Path {
 public:
  Path() = default;
  Path(std::vector<double> times, std::vector<PhaseState> states);

  void push_back(double t, PhaseState z);
  void reserve(std::size_t n) {
    times_.reserve(n);
    states_.reserve(n);
  }

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<PhaseState>& states() const { return states_; }
  double time(std::size_t i) const { return times_[i]; }
  const PhaseState& state(std::size_t i) const { return states_[i]; }
  const PhaseState& front() const { return states_.front(); }
  const PhaseState& back() const { return states_.back(); }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::vector<double> times_;
  std::vector<PhaseState> states_;
};

/// One excursion of the position away from zero.
struct ExcursionRecord {
  double u0 = 0.0;     ///< initial velocity
  double zeta = 0.0;   ///< lifetime
  double v_end = 0.0;  ///< -W at the return to zero
  double max_abs_height = 0.0;
  double argmax_time = 0.0;
  std::optional<Path> path;
};

}  // namespace langevin

#endif  // LANGEVIN_TYPES_HPP
