#ifndef LANGEVIN_SAMPLER_HPP
#define LANGEVIN_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "langevin/ensemble.hpp"
#include "langevin/rng.hpp"
#include "langevin/types.hpp"

namespace langevin {

/// Time stepping for killed paths. Steps are exact Gaussian increments; the
/// step length adapts to the distance from the killing level but never drops
/// below `step`, which is the resolution used next to the boundary.
struct StepConfig {
  double step = 1e-3;
  int refine_depth = 20;
  double boundary_tol = 1e-9;
  /// Upper bound on any single step.
  double max_step = std::numeric_limits<double>::infinity();
  /// Far from the boundary a step of length s moves the position by about
  /// s^{3/2}; steps are limited so this stays below `resolution` times the
  /// distance to the boundary.
  double resolution = 0.05;
  /// Hard cap on the number of steps of one killed path.
  long max_steps = 1'000'000;

  void validate() const;
};

/// One exact step of length s.
PhaseState kolmogorov_step(PhaseState z, double s, RngStream& rng);

/// Draws Z_{s/2} given Z_0 = z0 and Z_s = z1 (Gaussian bridge).
PhaseState bridge_midpoint(PhaseState z0, PhaseState z1, double s, RngStream& rng);

/// Path on the grid 0, step, 2 step, ..., covering [0, horizon].
Path simulate_path(PhaseState from, double horizon, const StepConfig& cfg, RngStream& rng);

/// Excursion from (0, u0) until the position changes sign.
ExcursionRecord simulate_excursion(double u0, const StepConfig& cfg, RngStream& rng,
                                   bool record_path = false);

/// Exact draw of (zeta, -W_{zeta-}) for the process started at (0, u0).
std::pair<double, double> sample_first_passage_endpoint(double u0, RngStream& rng);

/// Acceptance counters of the exact endpoint sampler since program start.
struct EndpointSamplerStats {
  std::uint64_t v_proposals = 0, v_accepted = 0;
  std::uint64_t s_proposals = 0, s_accepted = 0;
};
EndpointSamplerStats endpoint_sampler_stats();

Path reverse_path(const Path& p);
Path conjugate_path(const Path& p);
Path scale_path(const Path& p, double k);

/// Two-sided path on [-horizon, horizon] through `origin` at time 0.
Path simulate_two_sided(PhaseState origin, double horizon, const StepConfig& cfg,
                        RngStream& rng);

/// Excursions with u0 uniform on [-u_max,-u_min] u [u_min,u_max], weighted by
/// |u0| * 2 (u_max - u_min). Work is split into fixed chunks on sub-streams of
/// `rng`, so the result does not depend on the thread count.
WeightedEnsemble<ExcursionRecord> sample_qex_window(double u_min, double u_max, std::size_t n,
                                                    const StepConfig& cfg, RngStream& rng);

/// Position at the first zero of the velocity, started from (0, u0), u0 > 0.
double sample_position_at_velocity_zero(double u0, const StepConfig& cfg, RngStream& rng);

/// n independent streams derived from one draw of `rng`. Sub-stream i only
/// depends on that draw and i.
std::vector<RngStream> split_streams(RngStream& rng, std::size_t n);

}  // namespace langevin

#endif  // LANGEVIN_SAMPLER_HPP
