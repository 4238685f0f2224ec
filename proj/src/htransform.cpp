#include "langevin/htransform.hpp"

#include <cstdio>
#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <iostream>
#include <numbers>

#include "langevin/densities.hpp"
#include "langevin/killed.hpp"
#include "langevin/parallel.hpp"

namespace langevin {

namespace {

// A weight only needs a few digits: a quadrature that misses its requested
// tolerance is still used while its error is below 1e-3 of the larger of the
// value and the normalizer.
template <class Fn>
double weight_value(Fn&& fn, PhaseState z, double scale) {
  try {
    return fn().value;
  } catch (const ToleranceError& e) {
    const QuadResult& b = e.best();
    if (std::isfinite(b.value) && b.err_estimate <= 1e-3 * std::max(std::abs(b.value), scale))
      return b.value;
    char buf[160];
    std::snprintf(buf, sizeof buf, "h-transform weight at (%.6g, %.6g): value %.3g, error %.3g", z.x,
                  z.u, b.value, b.err_estimate);
    throw ToleranceError(buf, b);
  }
}

}  // namespace

double quv_weight(PhaseState z, double u, double v, const QuadConfig& cfg) {
  if (!(u > 0.0) || !(v > 0.0)) throw DomainError("quv_weight: need u, v > 0");
  if (z.x == 0.0 && z.u == u) return 1.0;
  const double norm = h_v_zero(u, v);
  return weight_value([&] { return h_v_general(DomainD(z), v, cfg); }, z, norm) / norm;
}

double qu0_weight(PhaseState z, double u, const QuadConfig& cfg) {
  if (!(u > 0.0)) throw DomainError("qu0_weight: need u > 0");
  if (z.x == 0.0 && z.u == u) return 1.0;
  const double norm = hbar0_zero(u);
  return weight_value([&] { return hbar0_general(DomainD(z), cfg); }, z, norm) / norm;
}

namespace {

void warn_starvation(std::size_t survivors, const char* what) {
  if (survivors < 100)
    std::cerr << "warning: " << what << ": only " << survivors << " survivors\n";
}

}  // namespace

MultiWeightSample sample_multi_weight(double u, const std::vector<double>& vs, double t,
                                      std::size_t n, const StepConfig& cfg, RngStream& rng,
                                      const QuadConfig& qcfg) {
  if (!(u > 0.0) || !(t > 0.0)) throw DomainError("h-transform sampler: need u, t > 0");
  for (double v : vs)
    if (!(v >= 0.0)) throw DomainError("h-transform sampler: need v >= 0");
  cfg.validate();
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto streams = split_streams(rng, chunks);
  auto parts = parallel_map<MultiWeightSample>(chunks, [&](std::size_t c) {
    MultiWeightSample part;
    part.weights.resize(vs.size());
    const std::size_t m = std::min(n, (c + 1) * kChunk) - c * kChunk;
    KillOptions opt;
    opt.t_max = t;
    for (std::size_t i = 0; i < m; ++i) {
      const KilledRun r = run_killed({0.0, u}, cfg, opt, streams[c]);
      if (r.outcome != KillOutcome::kHorizon) continue;
      part.states.push_back(r.z);
      for (std::size_t k = 0; k < vs.size(); ++k)
        part.weights[k].push_back(vs[k] > 0.0 ? quv_weight(r.z, u, vs[k], qcfg)
                                              : qu0_weight(r.z, u, qcfg));
    }
    part.draws = m;
    return part;
  });
  MultiWeightSample out;
  out.weights.resize(vs.size());
  for (auto& p : parts) {
    out.states.insert(out.states.end(), p.states.begin(), p.states.end());
    for (std::size_t k = 0; k < vs.size(); ++k)
      out.weights[k].insert(out.weights[k].end(), p.weights[k].begin(), p.weights[k].end());
    out.draws += p.draws;
  }
  warn_starvation(out.states.size(), "h-transform sampler");
  return out;
}

namespace {

WeightedEnsemble<PhaseState> single(MultiWeightSample s) {
  WeightedEnsemble<PhaseState> e;
  e.items = std::move(s.states);
  e.weights = std::move(s.weights.front());
  e.draws = s.draws;
  e.normalization = Normalization::kSelf;
  return e;
}

}  // namespace

WeightedEnsemble<PhaseState> sample_quv_marginal(double u, double v, double t, std::size_t n,
                                                 const StepConfig& cfg, RngStream& rng,
                                                 const QuadConfig& qcfg) {
  if (!(v > 0.0)) throw DomainError("sample_quv_marginal: need v > 0");
  return single(sample_multi_weight(u, {v}, t, n, cfg, rng, qcfg));
}

WeightedEnsemble<PhaseState> sample_qu0_marginal(double u, double t, std::size_t n,
                                                 const StepConfig& cfg, RngStream& rng,
                                                 const QuadConfig& qcfg) {
  return single(sample_multi_weight(u, {0.0}, t, n, cfg, rng, qcfg));
}

void refine_maximum(ExcursionRecord& e, double dt, RngStream& rng) {
  if (!e.path || e.path->size() < 2) throw DomainError("refine_maximum: record has no path");
  std::vector<double> ts = e.path->times();
  std::vector<PhaseState> zs = e.path->states();
  auto argmax = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < zs.size(); ++i)
      if (std::abs(zs[i].x) > std::abs(zs[best].x)) best = i;
    return best;
  };
  // An interval can be split if it is longer than dt and its midpoint is
  // representable strictly inside it.
  auto splittable = [&](std::size_t a) {
    const double m = ts[a] + 0.5 * (ts[a + 1] - ts[a]);
    return ts[a + 1] - ts[a] > dt && m > ts[a] && m < ts[a + 1];
  };
  for (int guard = 0; guard < 100000; ++guard) {
    const std::size_t i = argmax();
    // Split the longer neighbouring interval that is still too long.
    std::size_t lo = zs.size();
    if (i + 1 < zs.size() && splittable(i)) lo = i;
    if (i > 0 && splittable(i - 1) && (lo == zs.size() || ts[i] - ts[i - 1] > ts[i + 1] - ts[i]))
      lo = i - 1;
    if (lo == zs.size()) break;
    const double h = ts[lo + 1] - ts[lo];
    const PhaseState zm = bridge_midpoint(zs[lo], zs[lo + 1], h, rng);
    ts.insert(ts.begin() + static_cast<std::ptrdiff_t>(lo + 1), ts[lo] + 0.5 * h);
    zs.insert(zs.begin() + static_cast<std::ptrdiff_t>(lo + 1), zm);
  }
  const std::size_t i = argmax();
  e.max_abs_height = std::abs(zs[i].x);
  e.argmax_time = ts[i] - ts.front();
  e.path = Path(std::move(ts), std::move(zs));
}

namespace {

SnapshotExcursion excursion_with_snapshot(double u0, double t, const StepConfig& cfg,
                                          RngStream& rng) {
  SnapshotExcursion out;
  PathObserver po;
  po.path.push_back(0.0, {0.0, u0});
  KillOptions opt;
  KilledRun r;
  if (t > 0.0) {
    opt.t_max = t;
    r = run_killed({0.0, u0}, cfg, opt, rng, po);
    if (r.outcome == KillOutcome::kHorizon) {
      out.at_t = r.z;
      KillOptions rest;
      rest.t0 = t;
      rest.side = u0 > 0.0 ? 1 : -1;
      r = run_killed(r.z, cfg, rest, rng, po);
    }
  } else {
    r = run_killed({0.0, u0}, cfg, opt, rng, po);
  }
  out.record.u0 = u0;
  out.record.zeta = r.t;
  out.record.v_end = -r.z.u;
  out.record.path = std::move(po.path);
  return out;
}

}  // namespace

BinnedConditional sample_binned_conditional(double u, double v, std::size_t target,
                                            const StepConfig& cfg, RngStream& rng, double t,
                                            double delta, std::size_t max_draws) {
  if (!(u > 0.0) || !(v > 0.0)) throw DomainError("binned conditional: need u, v > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("binned conditional: need 0 < delta < 1");
  cfg.validate();
  const double lo = v * (1.0 - delta), hi = v * (1.0 + delta);
  // Refine maxima to a small fraction of the natural time scale.
  const double dt = 1e-5 * u * u;
  BinnedConditional out;
  constexpr std::size_t kChunk = 512;
  const std::size_t per_batch = kChunk * static_cast<std::size_t>(std::max(1, thread_count()));
  while (out.items.size() < target && out.draws < max_draws) {
    const std::size_t batch = std::min(per_batch, max_draws - out.draws);
    const std::size_t chunks = (batch + kChunk - 1) / kChunk;
    auto streams = split_streams(rng, chunks);
    auto parts = parallel_map<std::vector<SnapshotExcursion>>(chunks, [&](std::size_t c) {
      std::vector<SnapshotExcursion> acc;
      const std::size_t m = std::min(batch, (c + 1) * kChunk) - c * kChunk;
      for (std::size_t i = 0; i < m; ++i) {
        SnapshotExcursion s = excursion_with_snapshot(u, t, cfg, streams[c]);
        if (s.record.v_end < lo || s.record.v_end > hi) continue;
        refine_maximum(s.record, dt, streams[c]);
        acc.push_back(std::move(s));
      }
      return acc;
    });
    for (auto& p : parts)
      for (auto& s : p)
        if (out.items.size() < target) out.items.push_back(std::move(s));
    out.draws += batch;
  }
  if (out.items.size() < target)
    std::cerr << "warning: binned conditional (" << u << ";" << v << "): only "
              << out.items.size() << " of " << target << " accepted\n";
  return out;
}

DualityResult check_quv_duality(double u, double v, std::size_t n, const StepConfig& cfg,
                                RngStream& rng) {
  auto a = sample_binned_conditional(u, v, n, cfg, rng);
  auto b = sample_binned_conditional(v, u, n, cfg, rng);
  std::vector<double> za, zb, ha, hb, ra, rb;
  for (const auto& s : a.items) {
    za.push_back(s.record.zeta);
    ha.push_back(s.record.max_abs_height);
    ra.push_back(s.record.argmax_time / s.record.zeta);
  }
  for (const auto& s : b.items) {
    zb.push_back(s.record.zeta);
    hb.push_back(s.record.max_abs_height);
    rb.push_back(1.0 - s.record.argmax_time / s.record.zeta);
  }
  DualityResult r;
  r.n_uv = za.size();
  r.n_vu = zb.size();
  r.draws = a.draws + b.draws;
  r.lifetime = two_sample_ks(za, zb);
  r.max_height = two_sample_ks(ha, hb);
  r.argmax_reversal = two_sample_ks(ra, rb);
  return r;
}

namespace {

// v with P(v_end <= v) = q under the excursion law from (0,u).
double marginal_quantile(double u, double q) {
  double lo = 0.0, hi = u;
  while (mckean_marginal_cdf(u, hi) < q) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mckean_marginal_cdf(u, mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ReconstructionResult reconstruct_p0u(double u, std::size_t n, const StepConfig& cfg,
                                     RngStream& rng) {
  if (!(u > 0.0)) throw DomainError("reconstruct_p0u: need u > 0");
  if (n < 1000) throw DomainError("reconstruct_p0u: need n >= 1000");
  ReconstructionResult res;
  res.n = n;
  res.bins = 20;
  std::vector<double> edges{0.0};
  for (int b = 1; b < res.bins; ++b) edges.push_back(marginal_quantile(u, double(b) / res.bins));
  edges.push_back(std::numeric_limits<double>::infinity());

  auto simulate = [&](std::size_t m) {
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (m + kChunk - 1) / kChunk;
    auto streams = split_streams(rng, chunks);
    auto parts = parallel_map<std::vector<ExcursionRecord>>(chunks, [&](std::size_t c) {
      std::vector<ExcursionRecord> acc;
      const std::size_t k = std::min(m, (c + 1) * kChunk) - c * kChunk;
      for (std::size_t i = 0; i < k; ++i) acc.push_back(simulate_excursion(u, cfg, streams[c]));
      return acc;
    });
    std::vector<ExcursionRecord> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
  };
  const auto binned = simulate(n);
  const auto fresh = simulate(n);

  // Conditionals: the excursions in each endpoint bin. Mixing mass per bin is
  // 1/bins by construction of the edges.
  std::vector<int> bin(binned.size());
  std::vector<double> count(static_cast<std::size_t>(res.bins), 0.0);
  for (std::size_t i = 0; i < binned.size(); ++i) {
    const double v = binned[i].v_end;
    int b = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) - 1;
    b = std::clamp(b, 0, res.bins - 1);
    bin[i] = b;
    count[static_cast<std::size_t>(b)] += 1.0;
  }
  std::vector<double> za, wa, zb, wb, ve;
  for (std::size_t i = 0; i < binned.size(); ++i) {
    za.push_back(binned[i].zeta);
    wa.push_back(1.0 / (res.bins * count[static_cast<std::size_t>(bin[i])]));
    ve.push_back(binned[i].v_end);
  }
  for (const auto& e : fresh) {
    zb.push_back(e.zeta);
    wb.push_back(1.0);
  }
  const TestStat ks = weighted_two_sample_ks(za, wa, zb, wb);
  res.lifetime_ks = ks.statistic;
  res.lifetime_p = ks.p_value;
  res.mixing_mass =
      integrate_half_line([&](double s) {
        const double v = std::exp(s);
        return phi_density(u, v) / u * v;
      }, {1e-12, 1e-10, 60}).value;
  res.endpoint_marginal = ks_test(ve, [&](double v) { return mckean_marginal_cdf(u, v); });
  return res;
}

std::vector<double> geometric_grid(double lo, double hi, int m) {
  if (!(lo > 0.0) || !(hi > lo) || m < 2) throw DomainError("geometric_grid: need 0 < lo < hi, m >= 2");
  std::vector<double> g(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, double(i) / (m - 1));
  return g;
}

namespace {

// hbar_0(1, w) on a log grid, cubic B-spline in (log w, log hbar_0).
class HbarLevelTable {
 public:
  HbarLevelTable() {
    const int m = 241;
    lo_ = std::log(1e-3);
    hi_ = std::log(1e3);
    h_ = (hi_ - lo_) / (m - 1);
    std::vector<double> ys(static_cast<std::size_t>(m));
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
      ys[i] = std::log(direct(std::exp(lo_ + h_ * static_cast<double>(i))));
    });
    spline_ = boost::math::interpolators::cardinal_cubic_b_spline<double>(ys.begin(), ys.end(), lo_, h_);
  }
  static double direct(double w) {
    return hbar0_general(DomainD(1.0, w), {1e-12, 1e-9, 60}).value;
  }
  double operator()(double w) const {
    const double s = std::log(w);
    if (!(s >= lo_ && s <= hi_)) return direct(w);
    return std::exp(spline_(s));
  }

 private:
  double lo_, hi_, h_;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline_;
};

const HbarLevelTable& hbar_level_table() {
  static const HbarLevelTable table;
  return table;
}

}  // namespace

MixtureResult mixture_nprime(const Functional& f, const std::vector<double>& u_grid,
                             std::size_t n, const StepConfig& cfg, RngStream& rng) {
  if (f.kind != Functional::Kind::kHeightAbove)
    throw DomainError("mixture_nprime: only height_above functionals are supported");
  if (u_grid.size() < 3) throw DomainError("mixture_nprime: need at least 3 grid points");
  for (std::size_t i = 1; i < u_grid.size(); ++i)
    if (!(u_grid[i] > u_grid[i - 1]) || !(u_grid[0] > 0.0))
      throw DomainError("mixture_nprime: grid must be positive and increasing");
  cfg.validate();
  const double h0 = f.a;
  const double k = std::cbrt(h0);
  const HbarLevelTable& table = hbar_level_table();
  // hbar_0(h0, w) = k^{-5/2} hbar_0(1, w/k) by scaling.
  auto hbar_level = [&](double w) { return std::pow(k, -2.5) * table(w / k); };

  MixtureResult res;
  res.u_grid = u_grid;
  const std::size_t m = u_grid.size();
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  for (std::size_t g = 0; g < m; ++g) {
    const double u = u_grid[g];
    auto streams = split_streams(rng, chunks);
    auto parts = parallel_map<MeanAccumulator>(chunks, [&](std::size_t c) {
      MeanAccumulator acc;
      KillOptions opt;
      opt.stop_level = h0;
      const std::size_t cnt = std::min(n, (c + 1) * kChunk) - c * kChunk;
      for (std::size_t i = 0; i < cnt; ++i) {
        const KilledRun r = run_killed({0.0, u}, cfg, opt, streams[c]);
        acc.add(r.outcome == KillOutcome::kLevel ? u * hbar_level(std::max(r.z.u, 1e-12)) : 0.0);
      }
      return acc;
    });
    MeanAccumulator acc;
    for (const auto& p : parts) acc.merge(p);
    res.integrand.push_back(acc.estimate());
  }

  // Trapezoid in log u: the integral of g(u) du is that of g(u) u d(log u).
  // Below the grid g(u) ~ c u^{3/2} and above it g(u) ~ C u^{-3/2}; both
  // tails are extrapolated from the end nodes.
  const double u0 = u_grid.front(), u1 = u_grid.back();
  res.head_tail = res.integrand.front().value * u0 / 2.5;
  res.upper_tail = 2.0 * res.integrand.back().value * u1;
  auto integrate = [&](std::size_t stride) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; i += stride) idx.push_back(i);
    if (idx.back() != m - 1) idx.push_back(m - 1);
    std::vector<double> coef(idx.size(), 0.0);
    for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
      const double d = std::log(u_grid[idx[j + 1]] / u_grid[idx[j]]);
      coef[j] += 0.5 * d * u_grid[idx[j]];
      coef[j + 1] += 0.5 * d * u_grid[idx[j + 1]];
    }
    const double grid = [&] {
      double s = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) s += coef[j] * res.integrand[idx[j]].value;
      return s;
    }();
    coef.front() += u0 / 2.5;
    coef.back() += 2.0 * u1;
    double val = 0.0, var = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      val += coef[j] * res.integrand[idx[j]].value;
      var += std::pow(coef[j] * res.integrand[idx[j]].stderr_, 2);
    }
    return std::tuple{grid, val, var};
  };
  const auto [grid_val, total, var] = integrate(1);
  res.grid_part = grid_val;
  res.estimate = {total, std::sqrt(var), n * m};
  res.coarse_estimate = std::get<1>(integrate(2));
  return res;
}

}  // namespace langevin
