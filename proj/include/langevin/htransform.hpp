#ifndef LANGEVIN_HTRANSFORM_HPP
#define LANGEVIN_HTRANSFORM_HPP

#include <optional>
#include <vector>

#include "langevin/ensemble.hpp"
#include "langevin/quadrature.hpp"
#include "langevin/reflected.hpp"
#include "langevin/rng.hpp"
#include "langevin/sampler.hpp"
#include "langevin/stats.hpp"

namespace langevin {

/// Default accuracy for h-function weights inside Monte Carlo loops.
inline QuadConfig weight_quad_config() { return {1e-9, 1e-6, 40}; }

/// h_v(z) / h_v(0,u).
double quv_weight(PhaseState z, double u, double v, const QuadConfig& cfg = weight_quad_config());
/// hbar_0(z) / hbar_0(0,u).
double qu0_weight(PhaseState z, double u, const QuadConfig& cfg = weight_quad_config());

/// Killed paths from (0,u) observed at time t. Survivors carry the weight
/// h_v(Z_t)/h_v(0,u); the self-normalized ensemble is the law of Z_t under
/// the excursion conditioned on terminal velocity -v. `draws` counts all paths.
WeightedEnsemble<PhaseState> sample_quv_marginal(double u, double v, double t, std::size_t n,
                                                 const StepConfig& cfg, RngStream& rng,
                                                 const QuadConfig& qcfg = weight_quad_config());

/// Same with the hbar_0 weight (terminal velocity 0).
WeightedEnsemble<PhaseState> sample_qu0_marginal(double u, double t, std::size_t n,
                                                 const StepConfig& cfg, RngStream& rng,
                                                 const QuadConfig& qcfg = weight_quad_config());

/// Survivors at time t of killed paths from (0,u), weighted with several
/// terminal velocities at once (common random numbers). Entry 0 of `weights`
/// corresponds to vs[0]; v = 0 selects the hbar_0 weight.
struct MultiWeightSample {
  std::vector<PhaseState> states;
  std::vector<std::vector<double>> weights;
  std::size_t draws = 0;
};
MultiWeightSample sample_multi_weight(double u, const std::vector<double>& vs, double t,
                                      std::size_t n, const StepConfig& cfg, RngStream& rng,
                                      const QuadConfig& qcfg = weight_quad_config());

/// An excursion together with its state at a fixed time, if alive then.
struct SnapshotExcursion {
  ExcursionRecord record;
  std::optional<PhaseState> at_t;
};

/// Excursions from (0,u) with v_end in [v(1-delta), v(1+delta)] (endpoint
/// binning); keeps simulating until `target` are accepted or `max_draws`
/// paths are used. Maxima are refined by bridge sampling; snapshots are taken
/// at time t when t > 0.
struct BinnedConditional {
  std::vector<SnapshotExcursion> items;
  std::size_t draws = 0;
};
BinnedConditional sample_binned_conditional(double u, double v, std::size_t target,
                                            const StepConfig& cfg, RngStream& rng,
                                            double t = 0.0, double delta = 0.05,
                                            std::size_t max_draws = 20'000'000);

/// Inserts bridge points around the running maximum of |position| until both
/// neighbouring intervals are shorter than dt. Sets the record's max fields.
void refine_maximum(ExcursionRecord& e, double dt, RngStream& rng);

struct DualityResult {
  TestStat lifetime;        ///< zeta under (u;v) vs (v;u)
  TestStat max_height;      ///< max height under (u;v) vs (v;u)
  TestStat argmax_reversal; ///< argmax/zeta of (u;v) vs 1 - argmax/zeta of (v;u)
  std::size_t n_uv = 0, n_vu = 0;
  std::size_t draws = 0;
};

/// Compares time-reversed (u;v)-excursions with (v;u)-excursions.
DualityResult check_quv_duality(double u, double v, std::size_t n, const StepConfig& cfg,
                                RngStream& rng);

struct ReconstructionResult {
  double lifetime_ks = 0.0;        ///< recombined conditionals vs a fresh unconditioned sample
  double lifetime_p = 0.0;
  double mixing_mass = 0.0;        ///< integral of |u|^{-1} phi(u, .) over (0, inf)
  TestStat endpoint_marginal;      ///< v_end vs |u|^{-1} phi(u, .)
  std::size_t n = 0;
  int bins = 0;
};

/// Rebuilds the excursion law from (0,u) by mixing endpoint-binned
/// conditionals with density |u|^{-1} phi(u, v).
ReconstructionResult reconstruct_p0u(double u, std::size_t n, const StepConfig& cfg,
                                     RngStream& rng);

struct MixtureResult {
  Estimate estimate;         ///< grid part plus both tail corrections
  double grid_part = 0.0;
  double head_tail = 0.0;    ///< extrapolated mass below the grid
  double upper_tail = 0.0;   ///< extrapolated mass above the grid
  double coarse_estimate = 0.0;  ///< same data on every other node
  std::vector<double> u_grid;
  std::vector<Estimate> integrand;
};

/// n'(F) as the mixture over initial speeds u of the conditioned laws
/// Q_{u;0}, weighted by the n' law of the terminal velocity. Only
/// F = height_above(h0) is supported; then Q_{u;0}(F) is the hbar_0
/// h-transform evaluated at the hitting time of h0.
MixtureResult mixture_nprime(const Functional& f, const std::vector<double>& u_grid,
                             std::size_t n, const StepConfig& cfg, RngStream& rng);

/// Geometric grid of m points on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int m);

}  // namespace langevin

#endif  // LANGEVIN_HTRANSFORM_HPP
