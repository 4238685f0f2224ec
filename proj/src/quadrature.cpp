#include "langevin/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace langevin {
namespace {

using std::numbers::pi;

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, err;
  int depth;
  double absval;  ///< integral of |f|, for the roundoff floor
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double absval = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fl = f(c - dx), fr = f(c + dx);
    const double fsum = fl + fr;
    kron += kWgk[j] * fsum;
    absval += kWgk[j] * (std::abs(fl) + std::abs(fr));
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  double err = std::abs(kron - gauss);
  if (!std::isfinite(kron)) err = std::numeric_limits<double>::infinity();
  return {a, b, kron, err, depth, absval * std::abs(h)};
}

QuadResult adapt(const std::function<double(double)>& f, const std::vector<double>& breaks,
                 const QuadConfig& cfg, double extra_err, long extra_evals) {
  std::priority_queue<Panel> heap;
  double total = 0.0, total_err = 0.0, total_abs = 0.0;
  long evals = extra_evals;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p = gk15(f, breaks[i], breaks[i + 1], 0);
    evals += 15;
    total += p.value;
    total_err += p.err;
    total_abs += p.absval;
    heap.push(p);
  }
  std::vector<Panel> frozen;
  const long max_evals = 15L * 4000L;
  // Cancellation between positive and negative parts limits the reachable
  // accuracy to a multiple of eps times the integral of |f|.
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total), kRoundoff * total_abs});
  };
  while (total_err + extra_err > target() && !heap.empty()) {
    Panel p = heap.top();
    heap.pop();
    if (p.depth >= cfg.max_refinements || evals >= max_evals) {
      frozen.push_back(p);
      if (evals >= max_evals) break;
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    Panel l = gk15(f, p.a, m, p.depth + 1);
    Panel r = gk15(f, m, p.b, p.depth + 1);
    evals += 30;
    total += l.value + r.value - p.value;
    total_err += l.err + r.err - p.err;
    total_abs += l.absval + r.absval - p.absval;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to limit cancellation drift from the running updates.
  double value = 0.0, err = extra_err;
  auto absorb = [&](const Panel& p) {
    value += p.value;
    err += p.err;
  };
  for (const auto& p : frozen) absorb(p);
  while (!heap.empty()) {
    absorb(heap.top());
    heap.pop();
  }
  QuadResult res{value, err, evals};
  if (!std::isfinite(value) ||
      err > std::max({cfg.abs_tol, cfg.rel_tol * std::abs(value), kRoundoff * total_abs})) {
    throw ToleranceError("quadrature: tolerance not met (err " + std::to_string(err) + ")", res);
  }
  return res;
}

}  // namespace

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_refinements < 1) {
    throw DomainError("QuadConfig: tolerances must be positive and max_refinements >= 1");
  }
}

DomainD::DomainD(PhaseState z) : z_(z) {
  if (!contains(z)) throw DomainError("DomainD: state must satisfy x > 0, or x = 0 and u > 0");
}

bool DomainD::contains(PhaseState z) {
  return z.finite() && (z.x > 0.0 || (z.x == 0.0 && z.u > 0.0));
}

QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadConfig& cfg) {
  cfg.validate();
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integrate_interval: bounds");
  if (a == b) return {0.0, 0.0, 1};
  if (a > b) {
    QuadResult r = integrate_interval(f, b, a, cfg);
    r.value = -r.value;
    return r;
  }
  return adapt(f, {a, b}, cfg, 0.0, 0);
}

QuadResult integrate_half_line(const std::function<double(double)>& g_times_t,
                               const QuadConfig& cfg,
                               const std::function<double(double)>& tail_bound) {
  cfg.validate();
  // Coarse scan of the log axis to locate the mass.
  constexpr double kScanLo = -60.0, kScanHi = 60.0, kScanStep = 1.0;
  constexpr int kScan = static_cast<int>((kScanHi - kScanLo) / kScanStep) + 1;
  std::array<double, kScan> scan{};
  double peak = 0.0;
  for (int i = 0; i < kScan; ++i) {
    const double v = g_times_t(kScanLo + i * kScanStep);
    scan[i] = std::isfinite(v) ? std::abs(v) : std::numeric_limits<double>::infinity();
    peak = std::max(peak, scan[i]);
  }
  if (!std::isfinite(peak)) throw DomainError("integrate_half_line: integrand not finite");
  if (peak == 0.0) return {0.0, 0.0, kScan};
  const double thresh = 1e-3 * std::max(cfg.abs_tol, cfg.rel_tol * peak);
  int lo = 0, hi = kScan - 1;
  while (lo < kScan && scan[lo] <= thresh) ++lo;
  while (hi > lo && scan[hi] <= thresh) --hi;
  const double s_lo = std::max(kScanLo, kScanLo + (lo - 1) * kScanStep);
  const double s_hi = std::min(kScanHi, kScanLo + (hi + 1) * kScanStep);

  double extra = 0.0;
  if (tail_bound) extra += tail_bound(std::exp(s_hi));
  // Mass beyond the scan window, if the integrand had not yet died out there.
  if (hi == kScan - 1) extra += scan[kScan - 1];

  std::vector<double> breaks;
  constexpr double kPanel = 2.0;
  const int n = std::max(1, static_cast<int>(std::ceil((s_hi - s_lo) / kPanel)));
  for (int i = 0; i <= n; ++i) breaks.push_back(s_lo + (s_hi - s_lo) * i / n);
  return adapt(g_times_t, breaks, cfg, extra, kScan);
}

double exponent_R(double x, double u, double v, double t) {
  if (!(std::isfinite(t) && t > 0.0)) throw DomainError("exponent_R: t must be positive");
  const double a = 3.0 * x + t * u + 2.0 * t * v;
  const double b = x + t * u;
  return (0.5 * a * a + 1.5 * b * b) / (t * t * t);
}

namespace {

inline double R_unchecked(double x, double u, double v, double t) {
  const double a = 3.0 * x + t * u + 2.0 * t * v;
  const double b = x + t * u;
  return (0.5 * a * a + 1.5 * b * b) / (t * t * t);
}

const double kSqrt3OverPi = std::sqrt(3.0) / pi;

QuadConfig tighter(const QuadConfig& cfg, double factor) {
  QuadConfig c = cfg;
  c.abs_tol *= factor;
  c.rel_tol *= factor;
  return c;
}

// Inner integrals ask for much less error than the outer one needs; if one
// falls short, its best estimate and error still feed the outer error budget.
template <class Fn>
QuadResult inner_or_best(Fn&& fn) {
  try {
    return fn();
  } catch (const ToleranceError& e) {
    return e.best();
  }
}

}  // namespace

QuadResult phi0(PhaseState z, double v, const QuadConfig& cfg) {
  if (!z.finite() || !std::isfinite(v)) throw DomainError("phi0: non-finite input");
  if (z.x == 0.0 && z.u == 0.0 && v == 0.0) throw DomainError("phi0: not integrable at (0,0;0)");
  const double x = z.x, u = z.u;
  // g(t) t = sqrt(3)/(pi t) exp(-R); log-space exponent keeps it finite.
  auto f = [=](double s) {
    const double t = std::exp(s);
    return kSqrt3OverPi * std::exp(-s - R_unchecked(x, u, v, t));
  };
  // p_t <= sqrt(3)/(pi t^2), so the mass beyond T is at most sqrt(3)/(pi T).
  auto tail = [](double T) { return kSqrt3OverPi / T; };
  return integrate_half_line(f, cfg, tail);
}

QuadResult dphi0_dv(const DomainD& z, double v, const QuadConfig& cfg) {
  if (!std::isfinite(v)) throw DomainError("dphi0_dv: non-finite v");
  const double x = z.x(), u = z.u();
  // -dPhi0/dv = int 2 sqrt(3) (3x + tu + 2tv) / (pi t^4) exp(-R) dt
  auto f = [=](double s) {
    const double t = std::exp(s);
    const double lin = 3.0 * x + t * u + 2.0 * t * v;
    return -2.0 * kSqrt3OverPi * lin * std::exp(-3.0 * s - R_unchecked(x, u, v, t));
  };
  auto tail = [=](double T) {
    return 2.0 * kSqrt3OverPi *
           (std::abs(x) / (T * T * T) + 0.5 * std::abs(u + 2.0 * v) / (T * T));
  };
  return integrate_half_line(f, cfg, tail);
}

QuadResult h_v_general(const DomainD& z, double v, const QuadConfig& cfg) {
  if (!(std::isfinite(v) && v > 0.0)) throw DomainError("h_v_general: need v > 0");
  const QuadConfig inner = tighter(cfg, 0.05);
  const PhaseState st = z.state();

  const QuadResult back = phi0(st, -v, inner);
  double inner_err = 0.0;
  long inner_evals = back.evaluations;
  auto f = [&](double s) {
    const double mu = std::exp(s);
    const QuadResult p = inner_or_best([&] { return phi0(st, mu * v, inner); });
    inner_err = std::max(inner_err, p.err_estimate);
    inner_evals += p.evaluations;
    // mu^{3/2}/(mu^3+1) * mu, written to stay finite for large |s|.
    const double w = s > 0.0 ? std::exp(-0.5 * s) / (1.0 + std::exp(-3.0 * s))
                             : std::exp(2.5 * s) / (1.0 + std::exp(3.0 * s));
    return w * p.value;
  };
  // Phi0(x,u; w) <= (2 sqrt3 / 3pi) w^{-2} for x >= 0 and w > 0.
  auto tail = [=](double M) {
    return 2.0 * std::sqrt(3.0) / (3.0 * pi) / (v * v) * 0.4 * std::pow(M, -2.5);
  };
  const QuadResult mix = integrate_half_line(f, tighter(cfg, 0.5), tail);
  QuadResult res;
  res.value = v * (back.value - 1.5 / pi * mix.value);
  res.err_estimate = v * (back.err_estimate + 1.5 / pi * (mix.err_estimate + inner_err));
  res.evaluations = inner_evals + mix.evaluations;
  if (res.err_estimate > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value)) * 10.0) {
    throw ToleranceError("h_v_general: tolerance not met", res);
  }
  return res;
}

QuadResult hbar0_general(const DomainD& z, const QuadConfig& cfg) {
  const QuadConfig inner = tighter(cfg, 0.05);
  double inner_err = 0.0;
  long inner_evals = 0;
  auto f = [&](double s) {
    const double a = std::exp(s);
    const QuadResult d = inner_or_best([&] { return dphi0_dv(z, a, inner); });
    inner_err = std::max(inner_err, d.err_estimate);
    inner_evals += d.evaluations;
    // a^{-1/2} * a (Jacobian) * (-dPhi0/dv)
    return -std::exp(0.5 * s) * d.value;
  };
  const QuadResult r = integrate_half_line(f, tighter(cfg, 0.5));
  QuadResult res;
  res.value = 3.0 / pi * r.value;
  res.err_estimate = 3.0 / pi * (r.err_estimate + inner_err);
  res.evaluations = r.evaluations + inner_evals;
  if (res.err_estimate > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value)) * 10.0) {
    throw ToleranceError("hbar0_general: tolerance not met", res);
  }
  return res;
}

}  // namespace langevin
