#ifndef LANGEVIN_CLAIMS_INTERNAL_HPP
#define LANGEVIN_CLAIMS_INTERNAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>

#include "langevin/harness.hpp"
#include "langevin/rng.hpp"
#include "langevin/sampler.hpp"

namespace langevin::claims {

inline std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

inline std::size_t sized(std::size_t n, const ClaimContext& ctx, std::size_t floor = 100) {
  return std::max<std::size_t>(floor, static_cast<std::size_t>(std::llround(n * ctx.scale)));
}

inline RngStream stream(const ClaimContext& ctx, std::uint64_t salt) {
  return RngStream(derive_seed(ctx.seed, salt), salt);
}

std::vector<ExcursionRecord> simulate_excursions(double u0, std::size_t n, const StepConfig& cfg,
                                                 RngStream& rng);

// Criterion 1-3: closed forms and quadrature.
ClaimOutcome identities_transition(const ClaimContext&);
ClaimOutcome stationarity_fixed_point(const ClaimContext&);
ClaimOutcome lemma3_hv_zero_grid(const ClaimContext&);
ClaimOutcome lemma3_hbar0_zero(const ClaimContext&);
ClaimOutcome lemma3_small_v(const ClaimContext&);
// 4, 5, 6, 11: excursions of the killed process.
ClaimOutcome mckean_marginal_ks(const ClaimContext&);
ClaimOutcome mckean_joint_chi2(const ClaimContext&);
ClaimOutcome mckean_exact_vs_discrete(const ClaimContext&);
ClaimOutcome theorem1_phi_chi2(const ClaimContext&);
ClaimOutcome theorem1_reversal(const ClaimContext&);
ClaimOutcome potential_lebesgue(const ClaimContext&);
ClaimOutcome lachal_relation(const ClaimContext&);
ClaimOutcome scaling_paths(const ClaimContext&);
ClaimOutcome scaling_excursions(const ClaimContext&);
ClaimOutcome scaling_corollary2(const ClaimContext&);
// 7, 8, 9: Ito measures and the reflected process.
ClaimOutcome theorem2_lefebvre(const ClaimContext&);
ClaimOutcome theorem2_c1_monte_carlo(const ClaimContext&);
ClaimOutcome theorem2_c1_ratio(const ClaimContext&);
ClaimOutcome limits_cauchy(const ClaimContext&);
ClaimOutcome corollary3_constant(const ClaimContext&);
ClaimOutcome corollary3_joint(const ClaimContext&);
ClaimOutcome corollary4_occupation(const ClaimContext&);
// 10: conditioned laws.
ClaimOutcome htransform_weighted_vs_binned(const ClaimContext&);
ClaimOutcome htransform_duality(const ClaimContext&);
ClaimOutcome htransform_weak_limit(const ClaimContext&);
ClaimOutcome htransform_scaling(const ClaimContext&);
ClaimOutcome htransform_mixture(const ClaimContext&);
ClaimOutcome htransform_reconstruction(const ClaimContext&);

}  // namespace langevin::claims

#endif  // LANGEVIN_CLAIMS_INTERNAL_HPP
