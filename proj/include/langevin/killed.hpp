#ifndef LANGEVIN_KILLED_HPP
#define LANGEVIN_KILLED_HPP

// Engine for the process killed when the position returns to 0. Observers see
// every exactly sampled segment, in time order.

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "langevin/rng.hpp"
#include "langevin/sampler.hpp"
#include "langevin/stats.hpp"
#include "langevin/types.hpp"

namespace langevin {

enum class KillOutcome { kKilled, kLevel, kHorizon };

struct KillOptions {
  double t0 = 0.0;
  /// Stop alive at this absolute time.
  double t_max = std::numeric_limits<double>::infinity();
  /// Stop when the position reaches this level (on the side of the start).
  double stop_level = std::numeric_limits<double>::quiet_NaN();
  /// +1 or -1: side of zero the path lives on. 0 infers it from the start.
  int side = 0;
};

struct KilledRun {
  KillOutcome outcome = KillOutcome::kHorizon;
  double t = 0.0;
  PhaseState z;
  long steps = 0;
};

struct NullObserver {
  double step_limit(double, const PhaseState&) const {
    return std::numeric_limits<double>::infinity();
  }
  void on_step(double, const PhaseState&, double, const PhaseState&) {}
};

/// Largest step for which a crossing of a level at distance d is negligible
/// when moving at speed `speed`.
inline double safe_step(double d, double speed, const StepConfig& cfg) {
  double s = std::pow(cfg.resolution * d, 2.0 / 3.0);
  if (speed > 0.0) s = std::min(s, 0.5 * d / speed);
  return std::max(cfg.step, std::min(s, cfg.max_step));
}

inline int infer_side(PhaseState z) {
  if (z.x > 0.0) return 1;
  if (z.x < 0.0) return -1;
  if (z.u > 0.0) return 1;
  if (z.u < 0.0) return -1;
  throw DomainError("killed path: start (0, 0) has no side");
}

template <class Obs>
KilledRun run_killed(PhaseState start, const StepConfig& cfg, const KillOptions& opt,
                     RngStream& rng, Obs& obs) {
  const int side = opt.side != 0 ? opt.side : infer_side(start);
  const double sg = static_cast<double>(side);
  const bool has_level = std::isfinite(opt.stop_level);
  if (has_level && sg * opt.stop_level <= sg * start.x)
    throw DomainError("killed path: stop level must lie beyond the start");
  auto beyond = [&](const PhaseState& z) {
    return sg * z.x <= 0.0 || (has_level && sg * (z.x - opt.stop_level) >= 0.0);
  };
  auto gap = [&](const PhaseState& z) {
    const double g0 = std::abs(z.x);
    return has_level ? std::min(g0, std::abs(z.x - opt.stop_level)) : g0;
  };

  KilledRun run;
  double t = opt.t0;
  PhaseState z = start;
  for (;;) {
    if (run.steps >= cfg.max_steps)
      throw SimulationError("killed path: step cap reached before the boundary");
    const double speed = std::abs(z.u);
    double s = safe_step(sg * z.x, speed, cfg);
    if (has_level) s = std::min(s, safe_step(sg * (opt.stop_level - z.x), speed, cfg));
    s = std::min(s, obs.step_limit(t, z));
    // Very long excursions reach clock values where a small step would not
    // advance t at all.
    s = std::max(s, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(t));
    bool to_horizon = false;
    if (t + s >= opt.t_max) {
      s = opt.t_max - t;
      to_horizon = true;
    }
    if (!(s > 0.0)) {
      run.outcome = KillOutcome::kHorizon;
      run.t = t;
      run.z = z;
      return run;
    }
    PhaseState z1 = kolmogorov_step(z, s, rng);
    ++run.steps;
    if (!beyond(z1)) {
      const double t1 = to_horizon ? opt.t_max : t + s;
      obs.on_step(t, z, t1, z1);
      t = t1;
      z = z1;
      if (to_horizon) {
        run.outcome = KillOutcome::kHorizon;
        run.t = t;
        run.z = z;
        return run;
      }
      continue;
    }
    // Bisect the crossing step with bridge draws.
    // Interval lengths are tracked separately: tl + h can round to tl.
    double tl = t, h = s;
    PhaseState zl = z, zr = z1;
    for (int depth = 0;; ++depth) {
      if (depth >= cfg.refine_depth && gap(zr) <= cfg.boundary_tol) break;
      if (depth >= cfg.refine_depth + 60) break;
      const PhaseState zm = bridge_midpoint(zl, zr, h, rng);
      h *= 0.5;
      if (beyond(zm)) {
        zr = zm;
      } else {
        if (tl + h > tl) obs.on_step(tl, zl, tl + h, zm);
        zl = zm;
        tl += h;
      }
    }
    const double tr = tl + h;
    if (tr > tl) obs.on_step(tl, zl, tr, zr);
    run.outcome = sg * zr.x <= 0.0 ? KillOutcome::kKilled : KillOutcome::kLevel;
    run.t = tr;
    run.z = zr;
    return run;
  }
}

template <class Obs>
KilledRun run_killed(PhaseState start, const StepConfig& cfg, const KillOptions& opt,
                     RngStream& rng, Obs&& obs) {
  Obs& o = obs;
  return run_killed(start, cfg, opt, rng, o);
}

inline KilledRun run_killed(PhaseState start, const StepConfig& cfg, const KillOptions& opt,
                            RngStream& rng) {
  NullObserver obs;
  return run_killed(start, cfg, opt, rng, obs);
}

/// Tracks the largest |position| on the visited states and its time.
struct MaxObserver {
  double max_abs = 0.0;
  double argmax = 0.0;
  double step_limit(double, const PhaseState&) const {
    return std::numeric_limits<double>::infinity();
  }
  void on_step(double, const PhaseState&, double t1, const PhaseState& z1) {
    if (std::abs(z1.x) > max_abs) {
      max_abs = std::abs(z1.x);
      argmax = t1;
    }
  }
};

/// Records the visited states.
struct PathObserver {
  Path path;
  double step_limit(double, const PhaseState&) const {
    return std::numeric_limits<double>::infinity();
  }
  void on_step(double, const PhaseState&, double t1, const PhaseState& z1) {
    path.push_back(t1, z1);
  }
};

/// Time spent in the cells of a grid (x = position, y = velocity), by
/// left-point sums over [t_lo, t_hi]. Steps are limited to box_step while the
/// position is within `margin` of the grid's x-range.
struct CellOccupation {
  const BinGrid2D* grid = nullptr;
  double box_step = 1e-3;
  double margin = 0.05;
  double t_lo = 0.0;
  double t_hi = std::numeric_limits<double>::infinity();
  std::vector<double> time_in_cell;
  std::vector<long> count;
  double total_time = 0.0;

  CellOccupation(const BinGrid2D& g, double step, double margin_ = 0.05)
      : grid(&g), box_step(step), margin(margin_),
        time_in_cell(static_cast<std::size_t>(g.cells()), 0.0),
        count(static_cast<std::size_t>(g.cells()), 0) {}

  double step_limit(double, const PhaseState& z) const {
    const double lo = grid->x_edges.front() - margin;
    const double hi = grid->x_edges.back() + margin;
    if (z.x >= lo && z.x <= hi) return box_step;
    const double d = z.x > hi ? z.x - hi : lo - z.x;
    double s = std::pow(0.25 * d, 2.0 / 3.0);
    if (z.u != 0.0) s = std::min(s, 0.5 * d / std::abs(z.u));
    return std::max(s, box_step);
  }
  void on_step(double t0, const PhaseState& z0, double t1, const PhaseState&) {
    const double a = std::max(t0, t_lo), b = std::min(t1, t_hi);
    if (!(b > a)) return;
    total_time += b - a;
    const int c = grid->locate(z0.x, z0.u);
    if (c >= 0) {
      time_in_cell[static_cast<std::size_t>(c)] += b - a;
      ++count[static_cast<std::size_t>(c)];
    }
  }
};

/// Fans one segment out to several observers; step limit is the minimum.
template <class... Obs>
struct ObserverSet {
  std::tuple<Obs&...> obs;
  explicit ObserverSet(Obs&... o) : obs(o...) {}
  double step_limit(double t, const PhaseState& z) const {
    double s = std::numeric_limits<double>::infinity();
    std::apply([&](auto&... o) { ((s = std::min(s, o.step_limit(t, z))), ...); }, obs);
    return s;
  }
  void on_step(double t0, const PhaseState& z0, double t1, const PhaseState& z1) {
    std::apply([&](auto&... o) { (o.on_step(t0, z0, t1, z1), ...); }, obs);
  }
};

}  // namespace langevin

#endif  // LANGEVIN_KILLED_HPP
