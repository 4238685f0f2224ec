#include "claims_internal.hpp"
#include "langevin/harness.hpp"

namespace langevin {

const std::vector<Claim>& claim_registry() {
  using namespace claims;
  static const std::vector<Claim> registry{
      {"identities.transition", 1, "translation, reflection, velocity swap and duality of the transition density", true, identities_transition},
      {"stationarity.fixed_point", 2, "speed-weighted first-passage law maps |u|du to itself", true, stationarity_fixed_point},
      {"hfun.zero_position", 3, "general h_v quadrature equals the closed form at position 0", true, lemma3_hv_zero_grid},
      {"hfun.hbar0_zero", 3, "hbar_0 quadrature at position 0", true, lemma3_hbar0_zero},
      {"hfun.small_v", 3, "h_v ~ hbar_0 v^(3/2) as v -> 0", true, lemma3_small_v},
      {"mckean.marginal_ks", 4, "terminal velocity of excursions from (0,1) vs the closed-form marginal", false, mckean_marginal_ks},
      {"mckean.joint_chi2", 4, "(lifetime, terminal velocity) vs the closed-form joint density", false, mckean_joint_chi2},
      {"mckean.exact_vs_discrete", 4, "exact endpoint sampler vs discretized excursions", false, mckean_exact_vs_discrete},
      {"qex.phi_chi2", 5, "speed-weighted window ensemble vs the density phi", false, theorem1_phi_chi2},
      {"qex.reversal", 5, "exchange symmetry of (initial, terminal) speeds", false, theorem1_reversal},
      {"qex.potential", 6, "occupation under the stationary excursion measure is Lebesgue measure", false, potential_lebesgue},
      {"qex.lachal", 6, "speed-weighted occupation vs the reversed endpoint law", false, lachal_relation},
      {"ito.lefebvre", 7, "c1 as the 1/6 moment of the closed-form law", true, theorem2_lefebvre},
      {"ito.c1_monte_carlo", 7, "c1 from the position at the first zero of the velocity", false, theorem2_c1_monte_carlo},
      {"ito.c1_ratio", 7, "n'/n ratio for two functionals", false, theorem2_c1_ratio},
      {"ito.limit_sweeps", 0, "position and velocity sweeps form Cauchy sequences", false, limits_cauchy},
      {"ito.speed_constant", 8, "n' terminal speed law decides between 3/(2pi) and 45/(8pi)", false, corollary3_constant},
      {"ito.joint_density", 8, "n' (lifetime, terminal speed) vs the joint density", false, corollary3_joint},
      {"reflected.invariant_measure", 9, "long-run occupation of the reflected process vs hbar_0(x,-u)", false, corollary4_occupation},
      {"conditioned.weighted_vs_binned", 10, "h-transform weights vs endpoint binning", false, htransform_weighted_vs_binned},
      {"conditioned.duality", 10, "reversed (u;v) excursions vs (v;u) excursions", false, htransform_duality},
      {"conditioned.weak_limit", 10, "(u;v) laws approach (u;0) as v -> 0", false, htransform_weak_limit},
      {"conditioned.scaling", 10, "(u;v) vs rescaled (2u;2v), including v = 0", false, htransform_scaling},
      {"conditioned.mixture", 10, "n'(height > 1) as a mixture of (u;0) laws vs the direct estimate", false, htransform_mixture},
      {"conditioned.reconstruction", 10, "endpoint-binned conditionals recombine to the excursion law", false, htransform_reconstruction},
      {"scaling.paths", 11, "paths from (8x,2u) rescaled vs paths from (x,u)", false, scaling_paths},
      {"scaling.excursions", 11, "excursions and the stationary excursion measure under rescaling", false, scaling_excursions},
      {"scaling.ito", 11, "n(height > 1) = sqrt(2) n(height > 8)", false, scaling_corollary2},
  };
  return registry;
}

}  // namespace langevin
