#include "langevin/reflected.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "langevin/killed.hpp"
#include "langevin/parallel.hpp"

namespace langevin {

double TimeChangeMap::excised_length() const {
  double s = 0.0;
  for (const auto& [a, b] : excised) s += b - a;
  return s;
}

double TimeChangeMap::to_post(double t_pre) const {
  double cut = 0.0;
  for (const auto& [a, b] : excised) {
    if (t_pre <= a) break;
    cut += std::min(t_pre, b) - a;
  }
  return t_pre - cut;
}

double TimeChangeMap::to_pre(double t_post) const {
  double t = t_post;
  for (const auto& [a, b] : excised) {
    if (t < a) break;
    t += b - a;
  }
  return t;
}

Path skorokhod_reflect(const Path& p) {
  std::vector<PhaseState> states = p.states();
  double m = std::numeric_limits<double>::infinity();
  for (auto& z : states) {
    m = std::min(m, z.x);
    z.x -= m;
  }
  return Path(p.times(), std::move(states));
}

std::pair<ReflectedPath, TimeChangeMap> time_change(const Path& reflected, double boundary_tol) {
  if (!(boundary_tol > 0.0)) throw DomainError("time_change: boundary_tol must be > 0");
  ReflectedPath out;
  out.boundary_tol = boundary_tol;
  TimeChangeMap map;
  const std::size_t n = reflected.size();
  double shift = 0.0;
  for (std::size_t i = 0; i < n;) {
    PhaseState z = reflected.state(i);
    if (z.x < 0.0) throw DomainError("time_change: path must be nonnegative");
    if (z.x > boundary_tol) {
      out.path.push_back(reflected.time(i) - shift, z);
      out.boundary.push_back(false);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && reflected.state(j + 1).x <= boundary_tol) ++j;
    if (j > i) {
      map.excised.emplace_back(reflected.time(i), reflected.time(j));
      shift += reflected.time(j) - reflected.time(i);
    }
    out.path.push_back(reflected.time(j) - shift, {reflected.state(j).x, 0.0});
    out.boundary.push_back(true);
    i = j + 1;
  }
  return {std::move(out), std::move(map)};
}

ReflectedPath simulate_reflected(double horizon, const StepConfig& cfg, RngStream& rng) {
  if (!(horizon > 0.0)) throw DomainError("simulate_reflected: horizon must be > 0");
  cfg.validate();
  const double tol = std::pow(cfg.step, 1.5);
  double pre = std::max(horizon, cfg.step);
  Path raw = simulate_path({0.0, 0.0}, pre, cfg, rng);
  for (;;) {
    auto [rp, map] = time_change(skorokhod_reflect(raw), tol);
    if (rp.path.times().back() >= horizon) return rp;
    // Extend the raw path from its last state and try again.
    const Path more = simulate_path(raw.back(), pre, cfg, rng);
    const double t0 = raw.times().back();
    for (std::size_t i = 1; i < more.size(); ++i) raw.push_back(t0 + more.time(i), more.state(i));
    pre *= 2.0;
  }
}

std::vector<ExcursionRecord> extract_excursions(const ReflectedPath& p, double min_height) {
  std::vector<ExcursionRecord> out;
  const std::size_t n = p.path.size();
  std::size_t i = 0;
  while (i < n && !p.boundary[i]) ++i;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && !p.boundary[j]) ++j;
    if (j >= n) break;
    if (j > i + 1) {
      ExcursionRecord e;
      Path sub;
      for (std::size_t k = i; k <= j; ++k) {
        const PhaseState& z = p.path.state(k);
        sub.push_back(p.path.time(k), z);
        if (z.x > e.max_abs_height) {
          e.max_abs_height = z.x;
          e.argmax_time = p.path.time(k) - p.path.time(i);
        }
      }
      if (e.max_abs_height >= min_height) {
        e.u0 = p.path.state(i + 1).u;
        e.zeta = p.path.time(j) - p.path.time(i);
        e.v_end = -p.path.state(j - 1).u;
        e.path = std::move(sub);
        out.push_back(std::move(e));
      }
    }
    i = j;
  }
  return out;
}

Functional Functional::lifetime_above(double s0) {
  if (!(s0 > 0.0)) throw DomainError("functional: threshold must be > 0");
  Functional f;
  f.kind = Kind::kLifetimeAbove;
  f.a = s0;
  return f;
}

Functional Functional::height_above(double h0) {
  if (!(h0 > 0.0)) throw DomainError("functional: threshold must be > 0");
  Functional f;
  f.kind = Kind::kHeightAbove;
  f.a = h0;
  return f;
}

Functional Functional::end_velocity_in(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("functional: need 0 < lo < hi");
  Functional f;
  f.kind = Kind::kEndVelocityIn;
  f.a = lo;
  f.b = hi;
  return f;
}

Functional Functional::lifetime_and_velocity_in(double s_lo, double s_hi, double lo, double hi) {
  if (!(s_lo > 0.0) || !(s_hi > s_lo) || !(lo > 0.0) || !(hi > lo))
    throw DomainError("functional: need positive increasing windows");
  Functional f;
  f.kind = Kind::kLifetimeAndVelocityIn;
  f.a = lo;
  f.b = hi;
  f.s_lo = s_lo;
  f.s_hi = s_hi;
  return f;
}

Functional Functional::parse(const std::string& tag) {
  double a, b, c, d;
  char tail;
  if (std::sscanf(tag.c_str(), "zeta_in[%lf,%lf]&v_in[%lf,%lf]%c", &a, &b, &c, &d, &tail) == 4)
    return lifetime_and_velocity_in(a, b, c, d);
  if (std::sscanf(tag.c_str(), "zeta>%lf%c", &a, &tail) == 1) return lifetime_above(a);
  if (std::sscanf(tag.c_str(), "height>%lf%c", &a, &tail) == 1) return height_above(a);
  if (std::sscanf(tag.c_str(), "v_in[%lf,%lf]%c", &a, &b, &tail) == 2) return end_velocity_in(a, b);
  throw DomainError("functional: unknown tag '" + tag + "'");
}

Functional Functional::scaled(double k) const {
  if (!(k > 0.0)) throw DomainError("functional: scale must be > 0");
  Functional f = *this;
  switch (kind) {
    case Kind::kLifetimeAbove:
      f.a *= k * k;
      break;
    case Kind::kHeightAbove:
      f.a *= k * k * k;
      break;
    case Kind::kEndVelocityIn:
      f.a *= k;
      f.b *= k;
      break;
    case Kind::kLifetimeAndVelocityIn:
      f.a *= k;
      f.b *= k;
      f.s_lo *= k * k;
      f.s_hi *= k * k;
      break;
  }
  return f;
}

double Functional::evaluate(const ExcursionRecord& e) const {
  const double v = std::abs(e.v_end);
  switch (kind) {
    case Kind::kLifetimeAbove:
      return e.zeta > a ? 1.0 : 0.0;
    case Kind::kHeightAbove:
      return e.max_abs_height > a ? 1.0 : 0.0;
    case Kind::kEndVelocityIn:
      return v >= a && v <= b ? 1.0 : 0.0;
    case Kind::kLifetimeAndVelocityIn:
      return e.zeta >= s_lo && e.zeta <= s_hi && v >= a && v <= b ? 1.0 : 0.0;
  }
  return 0.0;
}

std::string Functional::tag() const {
  char buf[160];
  switch (kind) {
    case Kind::kLifetimeAbove:
      std::snprintf(buf, sizeof buf, "zeta>%g", a);
      break;
    case Kind::kHeightAbove:
      std::snprintf(buf, sizeof buf, "height>%g", a);
      break;
    case Kind::kEndVelocityIn:
      std::snprintf(buf, sizeof buf, "v_in[%g,%g]", a, b);
      break;
    case Kind::kLifetimeAndVelocityIn:
      std::snprintf(buf, sizeof buf, "zeta_in[%g,%g]&v_in[%g,%g]", s_lo, s_hi, a, b);
      break;
  }
  return buf;
}

double evaluate_killed(const Functional& f, PhaseState start, const StepConfig& cfg,
                       RngStream& rng) {
  KillOptions opt;
  using K = Functional::Kind;
  switch (f.kind) {
    case K::kLifetimeAbove: {
      opt.t_max = f.a;
      return run_killed(start, cfg, opt, rng).outcome == KillOutcome::kHorizon ? 1.0 : 0.0;
    }
    case K::kHeightAbove: {
      if (std::abs(start.x) >= f.a) return 1.0;
      opt.stop_level = infer_side(start) * f.a;
      return run_killed(start, cfg, opt, rng).outcome == KillOutcome::kLevel ? 1.0 : 0.0;
    }
    case K::kEndVelocityIn: {
      const double v = std::abs(run_killed(start, cfg, opt, rng).z.u);
      return v >= f.a && v <= f.b ? 1.0 : 0.0;
    }
    case K::kLifetimeAndVelocityIn: {
      opt.t_max = f.s_hi;
      const KilledRun r = run_killed(start, cfg, opt, rng);
      if (r.outcome != KillOutcome::kKilled || r.t < f.s_lo) return 0.0;
      const double v = std::abs(r.z.u);
      return v >= f.a && v <= f.b ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

namespace {

MeanAccumulator mean_indicator(const Functional& f, PhaseState start, std::size_t n,
                               const StepConfig& cfg, RngStream& rng) {
  cfg.validate();
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto streams = split_streams(rng, chunks);
  auto parts = parallel_map<MeanAccumulator>(chunks, [&](std::size_t c) {
    MeanAccumulator acc;
    const std::size_t m = std::min(n, (c + 1) * kChunk) - c * kChunk;
    for (std::size_t i = 0; i < m; ++i) acc.add(evaluate_killed(f, start, cfg, streams[c]));
    return acc;
  });
  MeanAccumulator out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace

Estimate estimate_n_position_limit(double x, const Functional& f, std::size_t n,
                                   const StepConfig& cfg, RngStream& rng) {
  if (!(x > 0.0)) throw DomainError("n estimator: x must be > 0");
  const double k = std::cbrt(1.0 / x);
  return mean_indicator(f.scaled(k), {1.0, 0.0}, n, cfg, rng).estimate(std::pow(x, -1.0 / 6.0));
}

Estimate estimate_nprime_velocity_limit(double u, const Functional& f, std::size_t n,
                                        const StepConfig& cfg, RngStream& rng) {
  if (!(u > 0.0)) throw DomainError("n' estimator: u must be > 0");
  return mean_indicator(f.scaled(1.0 / u), {0.0, 1.0}, n, cfg, rng).estimate(1.0 / std::sqrt(u));
}

void OccupationGrid::merge(const OccupationGrid& o) {
  if (time_in_cell.empty()) {
    *this = o;
    return;
  }
  for (std::size_t i = 0; i < time_in_cell.size(); ++i) {
    time_in_cell[i] += o.time_in_cell[i];
    count[i] += o.count[i];
  }
  total_time += o.total_time;
  excursions += o.excursions;
  steps += o.steps;
}

OccupationGrid reflected_occupation(const OccupationBudget& budget, const BinGrid2D& box,
                                    double box_step, const StepConfig& cfg, RngStream& rng,
                                    std::size_t streams) {
  cfg.validate();
  if (streams == 0) throw DomainError("reflected_occupation: need at least one stream");
  if (!(box_step > 0.0)) throw DomainError("reflected_occupation: box_step must be > 0");
  auto rs = split_streams(rng, streams);
  const double horizon = budget.horizon / static_cast<double>(streams);
  const long per_stream =
      budget.excursions == std::numeric_limits<long>::max()
          ? budget.excursions
          : std::max<long>(1, budget.excursions / static_cast<long>(streams));
  auto parts = parallel_map<OccupationGrid>(streams, [&](std::size_t c) {
    RngStream& r = rs[c];
    CellOccupation occ(box, box_step);
    OccupationGrid g;
    g.grid = box;
    const PhaseState origin{0.0, 0.0};
    while (occ.total_time < horizon && g.excursions < per_stream) {
      const double s = std::min(cfg.step, box_step);
      const PhaseState z1 = kolmogorov_step(origin, s, r);
      ++g.steps;
      // A first step below zero is a new running minimum: boundary time.
      if (z1.x <= 0.0) continue;
      occ.on_step(0.0, origin, s, z1);
      KillOptions opt;
      opt.t0 = s;
      opt.side = 1;
      g.steps += run_killed(z1, cfg, opt, r, occ).steps;
      ++g.excursions;
    }
    g.time_in_cell = occ.time_in_cell;
    g.count = occ.count;
    g.total_time = occ.total_time;
    return g;
  });
  OccupationGrid out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace langevin
