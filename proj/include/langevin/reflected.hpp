#ifndef LANGEVIN_REFLECTED_HPP
#define LANGEVIN_REFLECTED_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "langevin/ensemble.hpp"
#include "langevin/rng.hpp"
#include "langevin/sampler.hpp"
#include "langevin/stats.hpp"
#include "langevin/types.hpp"

namespace langevin {

/// Reflected path after the time change: positions >= 0, and a sample is a
/// boundary sample exactly when its position is <= boundary_tol. Boundary
/// samples carry velocity 0.
struct ReflectedPath {
  Path path;
  std::vector<bool> boundary;
  double boundary_tol = 0.0;
};

/// Pre-change intervals removed by the time change.
struct TimeChangeMap {
  std::vector<std::pair<double, double>> excised;

  double excised_length() const;
  /// Post-change clock at pre-change time t (continuous, nondecreasing).
  double to_post(double t_pre) const;
  /// Right-continuous inverse: first pre-change time whose post-change clock
  /// exceeds t_post.
  double to_pre(double t_post) const;
};

/// X_t = Y_t - min_{s <= t} Y_s on the grid; velocities unchanged.
Path skorokhod_reflect(const Path& p);

/// Removes the time spent at the boundary. Each maximal run i..j of boundary
/// samples is collapsed onto sample j, excising [t_i, t_j).
std::pair<ReflectedPath, TimeChangeMap> time_change(const Path& reflected, double boundary_tol);

/// Reflected process from (0, 0) covering at least [0, horizon] of post-change
/// time. Uses a uniform grid of spacing cfg.step and tolerance step^{3/2}.
ReflectedPath simulate_reflected(double horizon, const StepConfig& cfg, RngStream& rng);

/// Excursions away from 0 that reach height min_height. Each record's path
/// runs from the boundary sample before to the boundary sample after.
std::vector<ExcursionRecord> extract_excursions(const ReflectedPath& p, double min_height);

/// Bounded functionals of an excursion that vanish near the zero path.
struct Functional {
  enum class Kind { kLifetimeAbove, kHeightAbove, kEndVelocityIn, kLifetimeAndVelocityIn };
  Kind kind = Kind::kLifetimeAbove;
  double a = 0.0, b = 0.0;  ///< threshold (a), or velocity window [a, b]
  double s_lo = 0.0, s_hi = 0.0;

  static Functional lifetime_above(double s0);
  static Functional height_above(double h0);
  static Functional end_velocity_in(double lo, double hi);
  static Functional lifetime_and_velocity_in(double s_lo, double s_hi, double lo, double hi);
  static Functional parse(const std::string& tag);

  /// The same event for the path k^{-3} Y_{k^2 t}.
  Functional scaled(double k) const;
  double evaluate(const ExcursionRecord& e) const;
  std::string tag() const;
};

/// Indicator of the functional on one killed path from `start`, using early
/// stopping where the event is decided before death.
double evaluate_killed(const Functional& f, PhaseState start, const StepConfig& cfg,
                       RngStream& rng);

/// x^{-1/6} E_{x,0}[F] for the killed process. Simulated from (1, 0) with the
/// functional rescaled, which is the same law by the scaling property.
Estimate estimate_n_position_limit(double x, const Functional& f, std::size_t n,
                                   const StepConfig& cfg, RngStream& rng);

/// u^{-1/2} E_{0,u}[F]; simulated from (0, 1) with the functional rescaled.
Estimate estimate_nprime_velocity_limit(double u, const Functional& f, std::size_t n,
                                        const StepConfig& cfg, RngStream& rng);

/// Occupation of the reflected process in the cells of a box.
struct OccupationGrid {
  BinGrid2D grid;
  std::vector<double> time_in_cell;
  std::vector<long> count;
  double total_time = 0.0;
  long excursions = 0;
  long steps = 0;

  void merge(const OccupationGrid& o);
};

/// Stopping rule for reflected_occupation; whichever is reached first. The
/// excursion in progress is always completed.
struct OccupationBudget {
  double horizon = std::numeric_limits<double>::infinity();
  long excursions = std::numeric_limits<long>::max();
};

/// Streams the reflected process as a sequence of excursions from (0, 0),
/// skipping the boundary time exactly, and accumulates the post-change time
/// spent in each cell (left-point sums, steps at most box_step near the box).
/// The budget is split evenly over `streams` independent replicas.
OccupationGrid reflected_occupation(const OccupationBudget& budget, const BinGrid2D& box,
                                    double box_step, const StepConfig& cfg, RngStream& rng,
                                    std::size_t streams);

}  // namespace langevin

#endif  // LANGEVIN_REFLECTED_HPP
