#include "langevin/sampler.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <numbers>

#include "langevin/killed.hpp"
#include "langevin/parallel.hpp"

namespace langevin {

Path::Path(std::vector<double> times, std::vector<PhaseState> states)
    : times_(std::move(times)), states_(std::move(states)) {
  if (times_.size() != states_.size()) throw DomainError("Path: length mismatch");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !states_[i].finite())
      throw DomainError("Path: non-finite entry");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw DomainError("Path: times must strictly increase");
  }
}

void Path::push_back(double t, PhaseState z) {
  if (!std::isfinite(t) || !z.finite()) throw DomainError("Path: non-finite entry");
  if (!times_.empty() && !(t > times_.back()))
    throw DomainError("Path: times must strictly increase");
  times_.push_back(t);
  states_.push_back(z);
}

void StepConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("StepConfig: step must be > 0");
  if (refine_depth < 0) throw DomainError("StepConfig: refine_depth must be >= 0");
  if (!(boundary_tol > 0.0)) throw DomainError("StepConfig: boundary_tol must be > 0");
  if (!(max_step >= step)) throw DomainError("StepConfig: max_step must be >= step");
  if (!(resolution > 0.0)) throw DomainError("StepConfig: resolution must be > 0");
  if (max_steps < 1) throw DomainError("StepConfig: max_steps must be >= 1");
}

PhaseState kolmogorov_step(PhaseState z, double s, RngStream& rng) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("kolmogorov_step: s must be > 0");
  const double xi1 = rng.normal();
  const double xi2 = rng.normal();
  const double rs = std::sqrt(s);
  const double dw = rs * xi1;
  const double dy = s * rs * (0.5 * xi1 + xi2 / (2.0 * std::numbers::sqrt3));
  return {z.x + s * z.u + dy, z.u + dw};
}

namespace {

Eigen::Matrix2d step_cov(double s) {
  Eigen::Matrix2d c;
  c << s * s * s / 3.0, 0.5 * s * s, 0.5 * s * s, s;
  return c;
}

Eigen::Matrix2d drift(double s) {
  Eigen::Matrix2d a;
  a << 1.0, s, 0.0, 1.0;
  return a;
}

}  // namespace

PhaseState bridge_midpoint(PhaseState z0, PhaseState z1, double s, RngStream& rng) {
  if (!(s > 0.0)) throw DomainError("bridge_midpoint: s must be > 0");
  // Z_h = A z0 + e1, Z_s = A Z_h + e2 with independent e1, e2 ~ N(0, S_h).
  const double h = 0.5 * s;
  const Eigen::Matrix2d a = drift(h);
  const Eigen::Matrix2d sh = step_cov(h);
  const Eigen::Vector2d m = a * Eigen::Vector2d(z0.x, z0.u);
  const Eigen::Matrix2d k = sh * a.transpose() * step_cov(s).inverse();
  const Eigen::Vector2d mean = m + k * (Eigen::Vector2d(z1.x, z1.u) - a * m);
  Eigen::Matrix2d cov = sh - k * a * sh;
  cov = 0.5 * (cov + cov.transpose());
  const Eigen::LLT<Eigen::Matrix2d> llt(cov);
  Eigen::Vector2d noise(rng.normal(), rng.normal());
  const Eigen::Vector2d out = mean + llt.matrixL() * noise;
  return {out(0), out(1)};
}

Path simulate_path(PhaseState from, double horizon, const StepConfig& cfg, RngStream& rng) {
  cfg.validate();
  if (!from.finite()) throw DomainError("simulate_path: non-finite start");
  if (!(horizon >= cfg.step)) throw DomainError("simulate_path: horizon must be >= step");
  const auto n = static_cast<std::size_t>(std::ceil(horizon / cfg.step - 1e-9));
  Path p;
  p.reserve(n + 1);
  p.push_back(0.0, from);
  PhaseState z = from;
  for (std::size_t i = 1; i <= n; ++i) {
    z = kolmogorov_step(z, cfg.step, rng);
    p.push_back(static_cast<double>(i) * cfg.step, z);
  }
  return p;
}

ExcursionRecord simulate_excursion(double u0, const StepConfig& cfg, RngStream& rng,
                                   bool record_path) {
  cfg.validate();
  if (!(u0 != 0.0) || !std::isfinite(u0)) throw DomainError("simulate_excursion: u0 must be nonzero");
  const PhaseState start{0.0, u0};
  MaxObserver mx;
  KilledRun run;
  ExcursionRecord rec;
  if (record_path) {
    PathObserver po;
    po.path.push_back(0.0, start);
    ObserverSet<MaxObserver, PathObserver> both(mx, po);
    run = run_killed(start, cfg, KillOptions{}, rng, both);
    rec.path = std::move(po.path);
  } else {
    run = run_killed(start, cfg, KillOptions{}, rng, mx);
  }
  rec.u0 = u0;
  rec.zeta = run.t;
  rec.v_end = -run.z.u;
  rec.max_abs_height = mx.max_abs;
  rec.argmax_time = mx.argmax;
  return rec;
}

namespace {

std::atomic<std::uint64_t> g_v_prop{0}, g_v_acc{0}, g_s_prop{0}, g_s_acc{0};
constexpr long kMaxProposals = 1'000'000;

// v for u = 1. Target v^{3/2}/(1+v^3) lies under the envelope v^{3/2} on (0,1)
// and v^{-3/2} on (1,inf), whose masses are 2/5 and 2.
double sample_v_unit(RngStream& rng) {
  std::uint64_t props = 0;
  for (long i = 0; i < kMaxProposals; ++i) {
    ++props;
    double v, acc;
    if (rng.uniform() < 1.0 / 6.0) {
      v = std::pow(rng.uniform(), 0.4);
      acc = 1.0 / (1.0 + v * v * v);
    } else {
      const double w = rng.uniform();
      v = 1.0 / (w * w);
      acc = 1.0 / (1.0 + 1.0 / (v * v * v));
    }
    if (rng.uniform() < acc) {
      g_v_prop += props;
      ++g_v_acc;
      return v;
    }
  }
  throw SimulationError("endpoint sampler: v rejection stalled");
}

// zeta given v for u = 1: density in s proportional to
// s^{-2} exp(-a/s) erf(sqrt(6v/s)), a = 2(v^2 - v + 1).
// erf <= 1 gives the envelope a/E, E ~ Exp(1); erf(x) <= 2x/sqrt(pi) gives
// s^{-5/2} exp(-a/s), i.e. a/G with G ~ Gamma(3/2). The second is used when
// r = 6v/a < 1, where the first would mostly reject.
double sample_zeta_unit(double v, RngStream& rng) {
  const double a = 2.0 * (v * v - v + 1.0);
  const double r = 6.0 * v / a;
  std::uint64_t props = 0;
  for (long i = 0; i < kMaxProposals; ++i) {
    ++props;
    double s, acc;
    if (r >= 1.0) {
      s = a / rng.exponential();
      acc = std::erf(std::sqrt(6.0 * v / s));
    } else {
      const double zn = rng.normal();
      const double g = rng.exponential() + 0.5 * zn * zn;
      s = a / g;
      const double x = std::sqrt(6.0 * v / s);
      acc = std::erf(x) * std::sqrt(std::numbers::pi) / (2.0 * x);
    }
    if (rng.uniform() < acc) {
      g_s_prop += props;
      ++g_s_acc;
      return s;
    }
  }
  throw SimulationError("endpoint sampler: zeta rejection stalled");
}

}  // namespace

std::pair<double, double> sample_first_passage_endpoint(double u0, RngStream& rng) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw DomainError("endpoint sampler: u0 must be > 0");
  const double v = sample_v_unit(rng);
  const double s = sample_zeta_unit(v, rng);
  return {u0 * u0 * s, u0 * v};
}

EndpointSamplerStats endpoint_sampler_stats() {
  return {g_v_prop.load(), g_v_acc.load(), g_s_prop.load(), g_s_acc.load()};
}

Path reverse_path(const Path& p) {
  if (p.empty()) return p;
  const std::size_t n = p.size();
  const double t0 = p.times().front(), t1 = p.times().back();
  std::vector<double> times(n);
  std::vector<PhaseState> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    times[i] = t0 + t1 - p.time(j);
    states[i] = {p.state(j).x, -p.state(j).u};
  }
  times.front() = t0;
  times.back() = t1;
  return Path(std::move(times), std::move(states));
}

Path conjugate_path(const Path& p) {
  std::vector<PhaseState> states = p.states();
  for (auto& z : states) z.u = -z.u;
  return Path(p.times(), std::move(states));
}

Path scale_path(const Path& p, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("scale_path: k must be > 0");
  std::vector<double> times = p.times();
  std::vector<PhaseState> states = p.states();
  const double k2 = k * k, k3 = k2 * k;
  for (auto& t : times) t /= k2;
  for (auto& z : states) z = {z.x / k3, z.u / k};
  return Path(std::move(times), std::move(states));
}

Path simulate_two_sided(PhaseState origin, double horizon, const StepConfig& cfg,
                        RngStream& rng) {
  if (!(horizon > 0.0)) throw DomainError("simulate_two_sided: horizon must be > 0");
  const Path fwd = simulate_path(origin, horizon, cfg, rng);
  const Path bwd = simulate_path({origin.x, -origin.u}, horizon, cfg, rng);
  Path out;
  out.reserve(fwd.size() + bwd.size() - 1);
  for (std::size_t i = bwd.size() - 1; i >= 1; --i)
    out.push_back(-bwd.time(i), {bwd.state(i).x, -bwd.state(i).u});
  for (std::size_t i = 0; i < fwd.size(); ++i) out.push_back(fwd.time(i), fwd.state(i));
  return out;
}

std::vector<RngStream> split_streams(RngStream& rng, std::size_t n) {
  const std::uint64_t base = rng.engine()();
  std::vector<RngStream> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(derive_seed(base, rng.stream_id()), i);
  return out;
}

WeightedEnsemble<ExcursionRecord> sample_qex_window(double u_min, double u_max, std::size_t n,
                                                    const StepConfig& cfg, RngStream& rng) {
  if (!(u_min > 0.0) || !(u_max > u_min)) throw DomainError("sample_qex_window: need 0 < u_min < u_max");
  cfg.validate();
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto streams = split_streams(rng, chunks);
  const double width = u_max - u_min;
  auto parts = parallel_map<WeightedEnsemble<ExcursionRecord>>(chunks, [&](std::size_t c) {
    WeightedEnsemble<ExcursionRecord> e;
    e.normalization = Normalization::kAbsolute;
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    RngStream& r = streams[c];
    for (std::size_t i = lo; i < hi; ++i) {
      const double sgn = r.uniform() < 0.5 ? -1.0 : 1.0;
      const double a = u_min + width * r.uniform();
      e.push_back(simulate_excursion(sgn * a, cfg, r), a * 2.0 * width);
      ++e.draws;
    }
    return e;
  });
  WeightedEnsemble<ExcursionRecord> out;
  out.normalization = Normalization::kAbsolute;
  for (auto& p : parts) out.merge(p);
  return out;
}

double sample_position_at_velocity_zero(double u0, const StepConfig& cfg, RngStream& rng) {
  cfg.validate();
  if (!(u0 > 0.0)) throw DomainError("velocity-zero sampler: u0 must be > 0");
  PhaseState z{0.0, u0};
  for (long steps = 0; steps < cfg.max_steps; ++steps) {
    // W is Brownian: a step of (w/10)^2 crosses zero with negligible probability.
    const double s = std::max(cfg.step, std::min(cfg.max_step, 0.01 * z.u * z.u));
    const PhaseState z1 = kolmogorov_step(z, s, rng);
    if (z1.u > 0.0) {
      z = z1;
      continue;
    }
    PhaseState zl = z, zr = z1;
    double h = s;
    for (int depth = 0; depth < cfg.refine_depth + 60; ++depth) {
      if (depth >= cfg.refine_depth && std::abs(zr.u) <= cfg.boundary_tol) break;
      const PhaseState zm = bridge_midpoint(zl, zr, h, rng);
      h *= 0.5;
      if (zm.u <= 0.0)
        zr = zm;
      else
        zl = zm;
    }
    return zr.x;
  }
  throw SimulationError("velocity-zero sampler: step cap reached");
}

}  // namespace langevin
