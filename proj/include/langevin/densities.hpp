#ifndef LANGEVIN_DENSITIES_HPP
#define LANGEVIN_DENSITIES_HPP

// Closed-form densities and constants of the Kolmogorov process and of its
// excursions. Everything here is pure and thread-safe. Densities return 0 on
// the boundary of their support; non-finite input or arguments outside the
// domain throw DomainError.

#include "langevin/types.hpp"

namespace langevin {

/// Gaussian transition density p_t(x,u; y,v) of (Y, W) after time t.
double transition_density(double t, PhaseState from, PhaseState to);

/// Joint density of (zeta, -W_{zeta-}) for the excursion started at (0,u), u > 0.
/// The inner theta integral is evaluated as sqrt(2/3) erf(sqrt(6uv/s)).
double mckean_joint_density(double u, double s, double v);

/// Density of -W_{zeta-} for the excursion started at (0,u):
/// (3/2pi) u^{1/2} v^{3/2} / (u^3 + v^3).
double mckean_marginal_density(double u, double v);

/// Closed-form CDF of mckean_marginal_density in v (u > 0, v >= 0).
double mckean_marginal_cdf(double u, double v);

/// Density of (W_0, -W_{zeta-}) under the stationary excursion measure.
/// Supported on uv > 0 and symmetric in its arguments.
double phi_density(double u, double v);

/// h_v(0,u): density of -W_{zeta-} at v from the start (0,u).
double h_v_zero(double u, double v);

/// Small-v coefficient of h_v(0,u): lim_{v->0} h_v(0,u) / v^{3/2}
/// = (3/2pi) u^{-5/2}.
double hbar0_zero(double u);

/// Joint density of (zeta, |V_{zeta-}|) under n' as printed:
/// 6 sqrt(2 v^3 / (pi^3 s^5)) exp(-2 v^2 / s).
/// Its v-marginal integrates to (3/2pi) v^{-3/2}; see the constants below.
double nprime_joint_density(double s, double v);

/// Two candidate constants for the n'-density of |V_{zeta-}| (times v^{-3/2}).
/// The first is what the joint density integrates to, the second the
/// alternative printed constant. The harness decides between them by simulation.
inline constexpr double kNprimeSpeedConstantFromJoint = 3.0 / (2.0 * 3.14159265358979323846);
inline constexpr double kNprimeSpeedConstantPrinted = 45.0 / (8.0 * 3.14159265358979323846);

/// Density of X_{tau_0} (position when the velocity first hits 0) from (0,1).
double lefebvre_density(double xi);

/// CDF of lefebvre_density, via the regularized upper incomplete gamma function.
double lefebvre_cdf(double xi);

/// c_1 = (3/2)^{1/6} Gamma(1/3) / sqrt(pi) = E_{0,1}[X_{tau_0}^{1/6}].
double c1_constant();

}  // namespace langevin

#endif  // LANGEVIN_DENSITIES_HPP
