#include "langevin/densities.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

namespace langevin {
namespace {

using std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool finite(double a) { return std::isfinite(a); }

}  // namespace

double transition_density(double t, PhaseState from, PhaseState to) {
  require(finite(t) && t > 0.0, "transition_density: t must be positive and finite");
  require(from.finite() && to.finite(), "transition_density: non-finite state");
  // Reduce to the start (0,0) first: this is exactly the translation identity.
  const double a = to.x - from.x - t * from.u;
  const double b = to.u - from.u;
  // Sum-of-squares form of the exponent, nonnegative by construction.
  const double c = 2.0 * t * b - 3.0 * a;
  const double q = (0.5 * c * c + 1.5 * a * a) / (t * t * t);
  return std::sqrt(3.0) / (pi * t * t) * std::exp(-q);
}

double mckean_joint_density(double u, double s, double v) {
  require(finite(u) && finite(s) && finite(v), "mckean_joint_density: non-finite input");
  require(u > 0.0 && s > 0.0 && v >= 0.0, "mckean_joint_density: need u > 0, s > 0, v >= 0");
  if (v == 0.0) return 0.0;
  // int_0^{4uv/s} e^{-3 theta/2} dtheta / sqrt(pi theta) = sqrt(2/3) erf(sqrt(6uv/s))
  const double inner = std::sqrt(2.0 / 3.0) * std::erf(std::sqrt(6.0 * u * v / s));
  return 3.0 * v / (pi * std::sqrt(2.0) * s * s) *
         std::exp(-2.0 * (v * v - u * v + u * u) / s) * inner;
}

double mckean_marginal_density(double u, double v) {
  require(finite(u) && finite(v), "mckean_marginal_density: non-finite input");
  require(u > 0.0 && v >= 0.0, "mckean_marginal_density: need u > 0, v >= 0");
  if (v == 0.0) return 0.0;
  // Divide through by the larger cube to avoid overflow for extreme ratios.
  const double r = v / u;
  if (r <= 1.0) return 1.5 / pi * std::pow(r, 1.5) / (u * (1.0 + r * r * r));
  return 1.5 / pi * std::pow(r, -1.5) / (u * (1.0 + 1.0 / (r * r * r)));
}

double mckean_marginal_cdf(double u, double v) {
  require(finite(u) && u > 0.0 && !std::isnan(v), "mckean_marginal_cdf: need u > 0");
  if (v <= 0.0) return 0.0;
  if (std::isinf(v)) return 1.0;
  // With z = sqrt(v/u) the CDF is (3/pi) int_0^z w^4 / (1 + w^6) dw.
  const double z = std::sqrt(v / u);
  const double s3 = std::sqrt(3.0);
  const double anti = s3 / 12.0 * std::log((z * z - s3 * z + 1.0) / (z * z + s3 * z + 1.0)) +
                      std::atan(z) / 3.0 + std::atan(2.0 * z - s3) / 6.0 +
                      std::atan(2.0 * z + s3) / 6.0;
  return 3.0 / pi * anti;
}

double phi_density(double u, double v) {
  require(finite(u) && finite(v), "phi_density: non-finite input");
  if (u * v <= 0.0) return 0.0;
  const double au = std::abs(u), av = std::abs(v);
  return au * mckean_marginal_density(au, av);
}

double h_v_zero(double u, double v) {
  require(finite(u) && finite(v) && u > 0.0 && v > 0.0, "h_v_zero: need u, v > 0");
  return mckean_marginal_density(u, v);
}

double hbar0_zero(double u) {
  require(finite(u) && u > 0.0, "hbar0_zero: need u > 0");
  return 1.5 / pi * std::pow(u, -2.5);
}

double nprime_joint_density(double s, double v) {
  require(finite(s) && finite(v) && s > 0.0 && v >= 0.0, "nprime_joint_density: need s > 0, v >= 0");
  if (v == 0.0) return 0.0;
  return 6.0 * std::sqrt(2.0 * v * v * v / (pi * pi * pi * std::pow(s, 5))) *
         std::exp(-2.0 * v * v / s);
}

namespace {
const double kLefebvreNorm =
    std::tgamma(2.0 / 3.0) / (std::pow(3.0, 1.0 / 6.0) * std::pow(2.0, 2.0 / 3.0) * pi);
}

double lefebvre_density(double xi) {
  require(finite(xi) && xi >= 0.0, "lefebvre_density: need xi >= 0");
  if (xi == 0.0) return 0.0;
  return kLefebvreNorm * std::pow(xi, -4.0 / 3.0) * std::exp(-2.0 / (9.0 * xi));
}

double lefebvre_cdf(double xi) {
  require(!std::isnan(xi), "lefebvre_cdf: NaN");
  if (xi <= 0.0) return 0.0;
  if (std::isinf(xi)) return 1.0;
  // With r = 2/(9 xi): int_0^xi = Gamma(1/3, 2/(9 xi)) / Gamma(1/3).
  return boost::math::gamma_q(1.0 / 3.0, 2.0 / (9.0 * xi));
}

double c1_constant() {
  return std::pow(1.5, 1.0 / 6.0) * std::tgamma(1.0 / 3.0) / std::sqrt(pi);
}

}  // namespace langevin
