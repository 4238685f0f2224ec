#include <array>
#include <functional>
#include <cmath>
#include <numbers>
#include <vector>

#include "claims_internal.hpp"
#include "langevin/densities.hpp"
#include "langevin/killed.hpp"
#include "langevin/parallel.hpp"
#include "langevin/sampler.hpp"
#include "langevin/stats.hpp"

namespace langevin::claims {

namespace {

StepConfig excursion_config() {
  StepConfig cfg;
  cfg.step = 1e-3;
  return cfg;
}

}  // namespace

std::vector<ExcursionRecord> simulate_excursions(double u0, std::size_t n, const StepConfig& cfg,
                                                 RngStream& rng) {
  constexpr std::size_t kChunk = 1000;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto streams = split_streams(rng, chunks);
  auto parts = parallel_map<std::vector<ExcursionRecord>>(chunks, [&](std::size_t c) {
    std::vector<ExcursionRecord> out;
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) out.push_back(simulate_excursion(u0, cfg, streams[c]));
    return out;
  });
  std::vector<ExcursionRecord> all;
  all.reserve(n);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

ClaimOutcome mckean_marginal_ks(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 401);
  const std::size_t n = sized(100000, ctx);
  const auto ex = simulate_excursions(1.0, n, excursion_config(), rng);
  std::vector<double> v;
  for (const auto& e : ex) v.push_back(e.v_end);
  const TestStat ks = ks_test(v, [](double x) { return mckean_marginal_cdf(1.0, x); });
  ClaimOutcome out;
  out.statistic = ks.statistic;
  out.threshold = 0.01;
  out.pass = ks.statistic < 0.01;
  out.n = n;
  out.details.push_back(fmt("KS distance of -W at death vs the marginal: %.5f (p = %.3g)",
                            ks.statistic, ks.p_value));
  return out;
}

ClaimOutcome mckean_joint_chi2(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 402);
  const std::size_t n = sized(100000, ctx);
  const auto ex = simulate_excursions(1.0, n, excursion_config(), rng);
  std::vector<std::array<double, 2>> pts;
  for (const auto& e : ex) pts.push_back({e.zeta, e.v_end});
  const BinGrid2D grid{{0.0, 0.75, 1.5, 2.25, 3.0, 4.0}, {0.0, 0.5, 1.0, 1.5, 3.0}};
  const TestStat t = chi2_weighted(pts, std::vector<double>(pts.size(), 1.0),
                                   [](double s, double v) { return mckean_joint_density(1.0, s, v); },
                                   grid);
  ClaimOutcome out;
  out.statistic = t.p_value;
  out.threshold = 0.001;
  out.pass = t.p_value > 0.001;
  out.n = n;
  out.details.push_back(fmt("joint (zeta, -W) chi2 = %.2f on %g dof, p = %.4f", t.statistic, t.dof,
                            t.p_value));
  return out;
}

ClaimOutcome mckean_exact_vs_discrete(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 403);
  const std::size_t n = sized(100000, ctx);
  const auto ex = simulate_excursions(1.0, n, excursion_config(), rng);
  std::vector<double> za, va, zb, vb;
  for (const auto& e : ex) {
    za.push_back(e.zeta);
    va.push_back(e.v_end);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto [z, v] = sample_first_passage_endpoint(1.0, rng);
    zb.push_back(z);
    vb.push_back(v);
  }
  const TestStat kz = two_sample_ks(za, zb), kv = two_sample_ks(va, vb);
  const TestStat kx = ks_test(vb, [](double x) { return mckean_marginal_cdf(1.0, x); });
  ClaimOutcome out;
  out.statistic = std::min(kz.p_value, kv.p_value);
  out.threshold = 0.001;
  out.pass = out.statistic > 0.001;
  out.n = 2 * n;
  out.details.push_back(fmt("two-sample KS, exact vs discretized: zeta D=%.4f p=%.4f; -W D=%.4f p=%.4f",
                            kz.statistic, kz.p_value, kv.statistic, kv.p_value));
  out.details.push_back(fmt("exact sampler -W vs the marginal: D=%.4f p=%.4f", kx.statistic, kx.p_value));
  const auto st = endpoint_sampler_stats();
  out.details.push_back(fmt("exact sampler acceptance: velocity %.3f, lifetime %.3f",
                            double(st.v_accepted) / double(std::max<std::uint64_t>(st.v_proposals, 1)),
                            double(st.s_accepted) / double(std::max<std::uint64_t>(st.s_proposals, 1))));
  return out;
}

ClaimOutcome theorem1_phi_chi2(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 501);
  const std::size_t n = sized(100000, ctx);
  const auto ens = sample_qex_window(0.5, 2.0, n, excursion_config(), rng);
  const BinGrid2D grid{{0.5, 1.0, 1.5, 2.0}, {0.0, 0.4, 0.8, 1.2, 1.6, 2.0, 2.5, 3.0, 4.0}};
  const int cells = grid.cells();
  std::vector<int> bins;
  for (const auto& e : ens.items) {
    const int c = grid.locate(std::abs(e.u0), std::abs(e.v_end));
    bins.push_back(c < 0 ? -1 : (e.u0 < 0.0 ? cells : 0) + c);
  }
  auto mass = cell_masses(phi_density, grid, {1e-10, 1e-8, 40});
  mass.insert(mass.end(), mass.begin(), mass.end());
  const TestStat t = chi2_binned(bins, ens.weights, mass);
  ClaimOutcome out;
  out.statistic = t.p_value;
  out.threshold = 0.001;
  out.pass = t.p_value > 0.001;
  out.n = n;
  out.details.push_back(fmt("|u|-weighted window [0.5,2], both signs: chi2 = %.2f on %g dof, p = %.4f",
                            t.statistic, t.dof, t.p_value));
  out.csv_header = {"u_lo", "u_hi", "v_lo", "v_hi", "prob"};
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.ny(); ++j)
      out.csv_rows.push_back({grid.x_edges[i], grid.x_edges[i + 1], grid.y_edges[j],
                              grid.y_edges[j + 1], mass[static_cast<std::size_t>(i * grid.ny() + j)]});
  return out;
}

ClaimOutcome theorem1_reversal(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 502);
  const std::size_t n = sized(100000, ctx);
  const auto ens = sample_qex_window(0.5, 2.0, n, excursion_config(), rng);
  constexpr int k = 6;
  const auto edges = BinGrid2D::linspace(0.5, 2.0, k);
  const BinGrid2D grid{edges, edges};
  std::vector<double> w(k * k, 0.0), w2(k * k, 0.0);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto& e = ens.items[i];
    const int c = grid.locate(std::abs(e.u0), std::abs(e.v_end));
    if (c < 0) continue;
    ++inside;
    w[static_cast<std::size_t>(c)] += ens.weights[i];
    w2[static_cast<std::size_t>(c)] += ens.weights[i] * ens.weights[i];
  }
  const TestStat t = symmetry_test(w, w2, k);
  ClaimOutcome out;
  out.statistic = t.p_value;
  out.threshold = 0.001;
  out.pass = t.p_value > 0.001;
  out.n = n;
  out.details.push_back(fmt("(u0, v_end) vs (v_end, u0) on [0.5,2]^2, %d bins per axis, %zu samples inside: "
                            "chi2 = %.2f on %g dof, p = %.4f",
                            k, inside, t.statistic, t.dof, t.p_value));
  return out;
}

namespace {

// Uniform draw in one cell of the grid.
PhaseState uniform_in_cell(const BinGrid2D& g, int c, RngStream& r) {
  const int i = c / g.ny(), j = c % g.ny();
  const double x = g.x_edges[i] + (g.x_edges[i + 1] - g.x_edges[i]) * r.uniform();
  const double u = g.y_edges[j] + (g.y_edges[j + 1] - g.y_edges[j]) * r.uniform();
  return {x, u};
}

double cell_area(const BinGrid2D& g, int c) {
  const int i = c / g.ny(), j = c % g.ny();
  return (g.x_edges[i + 1] - g.x_edges[i]) * (g.y_edges[j + 1] - g.y_edges[j]);
}

// Per-cell mean of `fn(stream, cell-occupation)` over n draws, chunked.
template <class Fn>
std::vector<MeanAccumulator> cell_means(std::size_t n, int cells, RngStream& rng, Fn&& fn) {
  constexpr std::size_t kChunk = 2000;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto streams = split_streams(rng, chunks);
  auto parts = parallel_map<std::vector<MeanAccumulator>>(chunks, [&](std::size_t c) {
    std::vector<MeanAccumulator> acc(static_cast<std::size_t>(cells));
    std::vector<double> vals(static_cast<std::size_t>(cells));
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) {
      fn(streams[c], vals);
      for (int j = 0; j < cells; ++j) acc[static_cast<std::size_t>(j)].add(vals[static_cast<std::size_t>(j)]);
    }
    return acc;
  });
  std::vector<MeanAccumulator> all(static_cast<std::size_t>(cells));
  for (const auto& p : parts)
    for (int j = 0; j < cells; ++j) all[static_cast<std::size_t>(j)].merge(p[static_cast<std::size_t>(j)]);
  return all;
}

// Per-cell mean of a killed-path indicator from uniform starts (x, -w) in the cell.
std::vector<MeanAccumulator> reversed_starts(const BinGrid2D& g, std::size_t per_cell,
                                             const StepConfig& cfg, const KillOptions& opt,
                                             RngStream& rng,
                                             const std::function<double(const KilledRun&)>& event) {
  const int cells = g.cells();
  auto streams = split_streams(rng, static_cast<std::size_t>(cells));
  return parallel_map<MeanAccumulator>(static_cast<std::size_t>(cells), [&](std::size_t c) {
    MeanAccumulator acc;
    RngStream& r = streams[c];
    for (std::size_t i = 0; i < per_cell; ++i) {
      const PhaseState z = uniform_in_cell(g, static_cast<int>(c), r);
      acc.add(event(run_killed({z.x, -z.u}, cfg, opt, r)));
    }
    return acc;
  });
}

ClaimOutcome cellwise_z(const BinGrid2D& g, const std::vector<Estimate>& lhs,
                        const std::vector<Estimate>& rhs) {
  ClaimOutcome out;
  out.threshold = 3.0;
  out.csv_header = {"x_lo", "x_hi", "u_lo", "u_hi", "lhs", "lhs_se", "rhs", "rhs_se", "z"};
  for (int c = 0; c < g.cells(); ++c) {
    const auto& a = lhs[static_cast<std::size_t>(c)];
    const auto& b = rhs[static_cast<std::size_t>(c)];
    const double se = std::hypot(a.stderr_, b.stderr_);
    const double z = se > 0.0 ? (a.value - b.value) / se : 0.0;
    out.statistic = std::max(out.statistic, std::abs(z));
    const int i = c / g.ny(), j = c % g.ny();
    out.csv_rows.push_back({g.x_edges[i], g.x_edges[i + 1], g.y_edges[j], g.y_edges[j + 1], a.value,
                            a.stderr_, b.value, b.stderr_, z});
  }
  out.pass = out.statistic < out.threshold;
  return out;
}

}  // namespace

ClaimOutcome potential_lebesgue(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 601);
  const BinGrid2D g{BinGrid2D::linspace(0.2, 1.0, 4), BinGrid2D::linspace(-1.0, 1.0, 4)};
  const int cells = g.cells();
  const StepConfig cfg = excursion_config();
  constexpr double kU = 3.0;
  const std::size_t n = sized(200000, ctx);
  // Speeds up to kU: occupation of |u|-weighted excursions directly.
  const auto bulk = cell_means(n, cells, rng, [&](RngStream& r, std::vector<double>& vals) {
    const double u0 = kU * r.uniform();
    CellOccupation occ(g, 2e-3);
    run_killed({0.0, u0}, cfg, KillOptions{}, r, occ);
    for (int j = 0; j < cells; ++j)
      vals[static_cast<std::size_t>(j)] = kU * u0 * occ.time_in_cell[static_cast<std::size_t>(j)];
  });
  // Speeds above kU by time reversal: the cell area times the chance that
  // the path from (x, -u) dies with speed above kU.
  const std::size_t per_cell = sized(4000, ctx);
  const auto tail = reversed_starts(g, per_cell, cfg, KillOptions{}, rng,
                                    [](const KilledRun& run) { return -run.z.u > kU ? 1.0 : 0.0; });
  std::vector<Estimate> lhs, rhs;
  for (int c = 0; c < cells; ++c) {
    const auto b = bulk[static_cast<std::size_t>(c)].estimate();
    const auto t = tail[static_cast<std::size_t>(c)].estimate(cell_area(g, c));
    lhs.push_back({b.value + t.value, std::hypot(b.stderr_, t.stderr_), b.n + t.n});
    rhs.push_back({cell_area(g, c), 0.0, 0});
  }
  ClaimOutcome out = cellwise_z(g, lhs, rhs);
  out.n = n + per_cell * static_cast<std::size_t>(cells);
  out.details.push_back(fmt("occupation under the stationary excursion measure vs cell area on "
                            "[0.2,1]x[-1,1], 4x4 cells: max |z| = %.2f",
                            out.statistic));
  double worst_rel = 0.0;
  for (int c = 0; c < cells; ++c)
    worst_rel = std::max(worst_rel, std::abs(lhs[static_cast<std::size_t>(c)].value / cell_area(g, c) - 1.0));
  out.details.push_back(fmt("largest relative deviation %.3f (cell area %.2f)", worst_rel, cell_area(g, 0)));
  return out;
}

ClaimOutcome lachal_relation(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 602);
  const BinGrid2D g{BinGrid2D::linspace(0.1, 0.9, 4), BinGrid2D::linspace(-1.0, 1.0, 4)};
  const int cells = g.cells();
  const StepConfig cfg = excursion_config();
  constexpr double kT0 = 0.5, kT1 = 1.5, kV0 = 0.5, kV1 = 2.0;
  const std::size_t n = sized(200000, ctx);
  const auto lhs_acc = cell_means(n, cells, rng, [&](RngStream& r, std::vector<double>& vals) {
    const double v = kV0 + (kV1 - kV0) * r.uniform();
    CellOccupation occ(g, 2e-3);
    occ.t_lo = kT0;
    occ.t_hi = kT1;
    KillOptions opt;
    opt.t_max = kT1;
    run_killed({0.0, v}, cfg, opt, r, occ);
    for (int j = 0; j < cells; ++j)
      vals[static_cast<std::size_t>(j)] = (kV1 - kV0) * v * occ.time_in_cell[static_cast<std::size_t>(j)];
  });
  const std::size_t per_cell = sized(10000, ctx);
  KillOptions ropt;
  ropt.t_max = kT1;
  const auto rhs_acc = reversed_starts(g, per_cell, cfg, ropt, rng, [&](const KilledRun& run) {
    const double v = -run.z.u;
    return run.outcome == KillOutcome::kKilled && run.t >= kT0 && v >= kV0 && v <= kV1 ? 1.0 : 0.0;
  });
  std::vector<Estimate> lhs, rhs;
  for (int c = 0; c < cells; ++c) {
    lhs.push_back(lhs_acc[static_cast<std::size_t>(c)].estimate());
    rhs.push_back(rhs_acc[static_cast<std::size_t>(c)].estimate(cell_area(g, c)));
  }
  ClaimOutcome out = cellwise_z(g, lhs, rhs);
  out.n = n + per_cell * static_cast<std::size_t>(cells);
  out.details.push_back(fmt("speed-weighted occupation in t in [0.5,1.5] vs reversed endpoint law "
                            "(zeta in [0.5,1.5], -W in [0.5,2]), 4x4 cells: max |z| = %.2f",
                            out.statistic));
  return out;
}

ClaimOutcome scaling_paths(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1101);
  const std::size_t n = sized(20000, ctx);
  constexpr double k = 2.0;
  const PhaseState z0{0.3, -0.5};
  StepConfig small, big;
  small.step = 0.01;
  big.step = 0.01 * k * k;
  auto streams = split_streams(rng, 2);
  std::vector<double> ya, wa, ma, yb, wb, mb;
  for (std::size_t i = 0; i < n; ++i) {
    const Path a = simulate_path(z0, 1.0, small, streams[0]);
    const Path b = scale_path(simulate_path({k * k * k * z0.x, k * z0.u}, k * k, big, streams[1]), k);
    auto push = [](const Path& p, std::vector<double>& y, std::vector<double>& w, std::vector<double>& m) {
      y.push_back(p.states().back().x);
      w.push_back(p.states().back().u);
      double mx = -INFINITY;
      for (const auto& s : p.states()) mx = std::max(mx, s.x);
      m.push_back(mx);
    };
    push(a, ya, wa, ma);
    push(b, yb, wb, mb);
  }
  const TestStat ty = two_sample_ks(ya, yb), tw = two_sample_ks(wa, wb), tm = two_sample_ks(ma, mb);
  ClaimOutcome out;
  out.statistic = std::min({ty.p_value, tw.p_value, tm.p_value});
  out.threshold = 0.001;
  out.pass = out.statistic > 0.001;
  out.n = 2 * n;
  out.details.push_back(fmt("paths from (8x, 2u) over [0,4] rescaled vs paths from (x, u) over [0,1]: "
                            "Y_1 p=%.4f, W_1 p=%.4f, max Y p=%.4f",
                            ty.p_value, tw.p_value, tm.p_value));
  return out;
}

ClaimOutcome scaling_excursions(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1102);
  const std::size_t n = sized(50000, ctx);
  constexpr double k = 2.0;
  const StepConfig cfg = excursion_config();
  const auto a = simulate_excursions(1.0, n, cfg, rng);
  const auto b = simulate_excursions(k, n, cfg, rng);
  std::vector<double> za, va, ha, zb, vb, hb;
  for (const auto& e : a) {
    za.push_back(e.zeta);
    va.push_back(e.v_end);
    ha.push_back(e.max_abs_height);
  }
  for (const auto& e : b) {
    zb.push_back(e.zeta / (k * k));
    vb.push_back(e.v_end / k);
    hb.push_back(e.max_abs_height / (k * k * k));
  }
  const TestStat tz = two_sample_ks(za, zb), tv = two_sample_ks(va, vb), th = two_sample_ks(ha, hb);
  // Stationary excursion measure: the window [1,4] rescaled is the window [0.5,2].
  const auto qa = sample_qex_window(0.5, 2.0, n, cfg, rng);
  const auto qb = sample_qex_window(0.5 * k, 2.0 * k, n, cfg, rng);
  std::vector<double> qza, qva, qzb, qvb;
  for (const auto& e : qa.items) {
    qza.push_back(e.zeta);
    qva.push_back(std::abs(e.v_end));
  }
  for (const auto& e : qb.items) {
    qzb.push_back(e.zeta / (k * k));
    qvb.push_back(std::abs(e.v_end) / k);
  }
  const TestStat qz = weighted_two_sample_ks(qza, qa.weights, qzb, qb.weights);
  const TestStat qv = weighted_two_sample_ks(qva, qa.weights, qvb, qb.weights);
  ClaimOutcome out;
  out.statistic = std::min({tz.p_value, tv.p_value, th.p_value, qz.p_value, qv.p_value});
  out.threshold = 0.001;
  out.pass = out.statistic > 0.001;
  out.n = 4 * n;
  out.details.push_back(fmt("excursions from (0,2) rescaled vs from (0,1): zeta p=%.4f, -W p=%.4f, "
                            "height p=%.4f",
                            tz.p_value, tv.p_value, th.p_value));
  out.details.push_back(fmt("window [1,4] rescaled vs window [0.5,2]: zeta p=%.4f, |W| p=%.4f",
                            qz.p_value, qv.p_value));
  return out;
}

}  // namespace langevin::claims
