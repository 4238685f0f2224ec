#ifndef LANGEVIN_QUADRATURE_HPP
#define LANGEVIN_QUADRATURE_HPP

// Semi-infinite quadrature and the functions of the killed process that are
// only available as integrals: Phi_0, dPhi_0/dv, h_v and hbar_0.

#include <functional>
#include <stdexcept>
#include <string>

#include "langevin/types.hpp"

namespace langevin {

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_refinements = 60;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  long evaluations = 0;
};

/// Requested tolerance was not reached; carries the best available estimate.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, QuadResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadResult& best() const { return best_; }

 private:
  QuadResult best_;
};

/// A start in D = {x > 0} u {x = 0, u > 0}; checked on construction.
class DomainD {
 public:
  explicit DomainD(PhaseState z);
  DomainD(double x, double u) : DomainD(PhaseState{x, u}) {}
  static bool contains(PhaseState z);

  const PhaseState& state() const { return z_; }
  double x() const { return z_.x; }
  double u() const { return z_.u; }

 private:
  PhaseState z_;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadConfig& cfg);

/// Integral of g over (0, inf) through the substitution t = e^s.
/// `g_times_t(s)` must return g(e^s) * e^s. The s-window is truncated where
/// the integrand is negligible; `tail_bound(t_hi)`, when given, bounds the
/// neglected mass on (t_hi, inf) and is added to the error estimate.
QuadResult integrate_half_line(const std::function<double(double)>& g_times_t,
                               const QuadConfig& cfg,
                               const std::function<double(double)>& tail_bound = {});

/// R(x,u,v,t) = (1/t^3) [ (3x + tu + 2tv)^2 / 2 + 3 (x + tu)^2 / 2 ] >= 0,
/// so that p_t(x,u; 0,v) = sqrt(3)/(pi t^2) exp(-R).
double exponent_R(double x, double u, double v, double t);

/// Phi_0(x,u; v) = int_0^inf p_t(x,u; 0,v) dt. Requires (x,u) in D, or x = 0
/// with (u,v) != (0,0).
QuadResult phi0(PhaseState z, double v, const QuadConfig& cfg = {});

/// d Phi_0 / dv from the analytic derivative of the integrand.
QuadResult dphi0_dv(const DomainD& z, double v, const QuadConfig& cfg = {});

/// h_v(x,u): density at v > 0 of -W_{zeta-} for the process started at (x,u)
/// and killed when the position returns to 0:
///   h_v = v [ Phi_0(x,u;-v) - (3/2pi) int_0^inf mu^{3/2}/(mu^3+1) Phi_0(x,u; mu v) dmu ].
QuadResult h_v_general(const DomainD& z, double v, const QuadConfig& cfg = {});

/// hbar_0(x,u) = (3/pi) int_0^inf a^{-1/2} (-dPhi_0/dv)(x,u; a) da, the
/// coefficient with h_v(x,u) ~ hbar_0(x,u) v^{3/2} as v -> 0. The sign is
/// fixed so that hbar_0 > 0 and hbar_0(0,u) = (3/2pi) u^{-5/2}.
QuadResult hbar0_general(const DomainD& z, const QuadConfig& cfg = {});

}  // namespace langevin

#endif  // LANGEVIN_QUADRATURE_HPP
