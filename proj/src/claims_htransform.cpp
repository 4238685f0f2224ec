#include <cmath>
#include <vector>

#include "claims_internal.hpp"
#include "langevin/htransform.hpp"
#include "langevin/reflected.hpp"

namespace langevin::claims {

namespace {

StepConfig conditioned_config() {
  StepConfig cfg;
  cfg.step = 1e-3;
  return cfg;
}

struct Columns {
  std::vector<double> x, u, w;
};

Columns columns(const WeightedEnsemble<PhaseState>& e, double k = 1.0) {
  Columns c;
  for (std::size_t i = 0; i < e.size(); ++i) {
    c.x.push_back(e.items[i].x / (k * k * k));
    c.u.push_back(e.items[i].u / k);
    c.w.push_back(e.weights[i]);
  }
  return c;
}

}  // namespace

ClaimOutcome htransform_weighted_vs_binned(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1001);
  const std::size_t n = sized(2000, ctx);
  const StepConfig cfg = conditioned_config();
  ClaimOutcome out;
  out.statistic = 1.0;
  out.threshold = 0.001;
  out.csv_header = {"u", "v", "t", "p_position", "p_velocity", "n_weighted", "n_binned"};
  for (double u : {0.5, 1.0, 2.0})
    for (double v : {0.5, 1.0, 2.0}) {
      const double t = 0.25 * u * v;
      const auto bin = sample_binned_conditional(u, v, n, cfg, rng, t);
      Columns b;
      for (const auto& s : bin.items)
        if (s.at_t) {
          b.x.push_back(s.at_t->x);
          b.u.push_back(s.at_t->u);
          b.w.push_back(1.0);
        }
      const Columns a = columns(sample_quv_marginal(u, v, t, b.x.size(), cfg, rng));
      const TestStat tx = weighted_two_sample_ks(a.x, a.w, b.x, b.w);
      const TestStat tu = weighted_two_sample_ks(a.u, a.w, b.u, b.w);
      out.statistic = std::min({out.statistic, tx.p_value, tu.p_value});
      out.n += a.x.size() + bin.draws;
      out.csv_rows.push_back({u, v, t, tx.p_value, tu.p_value, double(a.x.size()), double(b.x.size())});
      out.details.push_back(fmt("u=%g v=%g t=%g: position p=%.4f, velocity p=%.4f (%zu alive of %zu binned)",
                                u, v, t, tx.p_value, tu.p_value, b.x.size(), bin.items.size()));
    }
  out.pass = out.statistic > out.threshold;
  return out;
}

ClaimOutcome htransform_duality(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1002);
  const std::size_t n = sized(10000, ctx);
  const DualityResult d = check_quv_duality(1.0, 2.0, n, conditioned_config(), rng);
  ClaimOutcome out;
  out.statistic = std::min({d.lifetime.p_value, d.max_height.p_value, d.argmax_reversal.p_value});
  out.threshold = 0.001;
  out.pass = out.statistic > out.threshold;
  out.n = d.draws;
  out.details.push_back(fmt("(1;2) reversed vs (2;1), %zu and %zu excursions: lifetime p=%.4f, "
                            "height p=%.4f, argmax position p=%.4f",
                            d.n_uv, d.n_vu, d.lifetime.p_value, d.max_height.p_value,
                            d.argmax_reversal.p_value));
  return out;
}

ClaimOutcome htransform_weak_limit(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1003);
  const std::size_t n = sized(4000, ctx);
  const StepConfig cfg = conditioned_config();
  constexpr double u = 1.0, t = 0.25;
  const std::vector<double> vs{0.2, 0.1, 0.05, 0.0};
  const MultiWeightSample m = sample_multi_weight(u, vs, t, n, cfg, rng);
  ClaimOutcome out;
  out.threshold = 0.001;
  std::string line = "common-sample KS distance to the zero-velocity law:";
  std::vector<double> dist;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    std::vector<double> xa, xb;
    for (const auto& s : m.states) xa.push_back(s.x);
    xb = xa;
    const double dx = weighted_ks_distance(xa, m.weights[i], xb, m.weights.back());
    dist.push_back(dx);
    line += fmt(" v=%g: %.4f", vs[i], dx);
  }
  out.details.push_back(line);
  const bool shrinking = dist[0] > dist[1] && dist[1] > dist[2];
  // Independent samples at the smallest v against the limit law.
  const Columns a = columns(sample_quv_marginal(u, vs[2], t, n, cfg, rng));
  const Columns b = columns(sample_qu0_marginal(u, t, n, cfg, rng));
  const TestStat tx = weighted_two_sample_ks(a.x, a.w, b.x, b.w);
  const TestStat tu = weighted_two_sample_ks(a.u, a.w, b.u, b.w);
  out.statistic = std::min(tx.p_value, tu.p_value);
  out.pass = out.statistic > out.threshold && shrinking;
  out.n = m.states.size() + a.x.size() + b.x.size();
  out.details.push_back(fmt("v=%g vs zero terminal velocity, independent samples at t=%g: position "
                            "p=%.4f, velocity p=%.4f",
                            vs[2], t, tx.p_value, tu.p_value));
  out.details.push_back(shrinking ? "distances decrease as v -> 0" : "distances do not decrease as v -> 0");
  return out;
}

ClaimOutcome htransform_scaling(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1004);
  const std::size_t n = sized(4000, ctx);
  const StepConfig cfg = conditioned_config();
  constexpr double k = 2.0, u = 1.0, t = 0.25;
  ClaimOutcome out;
  out.statistic = 1.0;
  out.threshold = 0.001;
  for (double v : {1.0, 0.0}) {
    auto draw = [&](double kk) {
      return v > 0.0 ? sample_quv_marginal(kk * u, kk * v, kk * kk * t, n, cfg, rng)
                     : sample_qu0_marginal(kk * u, kk * kk * t, n, cfg, rng);
    };
    const Columns a = columns(draw(1.0));
    const Columns b = columns(draw(k), k);
    const TestStat tx = weighted_two_sample_ks(a.x, a.w, b.x, b.w);
    const TestStat tu = weighted_two_sample_ks(a.u, a.w, b.u, b.w);
    out.statistic = std::min({out.statistic, tx.p_value, tu.p_value});
    out.n += a.x.size() + b.x.size();
    out.details.push_back(fmt("(%g;%g) at t=%g vs (%g;%g) at t=%g rescaled: position p=%.4f, velocity p=%.4f",
                              u, v, t, k * u, k * v, k * k * t, tx.p_value, tu.p_value));
  }
  out.pass = out.statistic > out.threshold;
  return out;
}

ClaimOutcome htransform_mixture(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1005);
  const std::size_t n = sized(5000, ctx);
  const StepConfig cfg = conditioned_config();
  const Functional f = Functional::height_above(1.0);
  const MixtureResult m = mixture_nprime(f, geometric_grid(0.02, 50.0, 49), n, cfg, rng);
  const Estimate direct = estimate_nprime_velocity_limit(0.05, f, sized(200000, ctx), cfg, rng);
  const double rel = std::abs(m.estimate.value / direct.value - 1.0);
  ClaimOutcome out;
  out.statistic = rel;
  out.threshold = 0.15;
  out.pass = rel < 0.15;
  out.n = n * m.u_grid.size() + direct.n;
  out.details.push_back(fmt("mixture over initial speeds: %.4f +- %.4f (grid %.4f, lower tail %.4f, "
                            "upper tail %.4f, every other node %.4f)",
                            m.estimate.value, m.estimate.stderr_, m.grid_part, m.head_tail,
                            m.upper_tail, m.coarse_estimate));
  out.details.push_back(fmt("direct n'(%s) at u=0.05: %.4f +- %.4f; relative difference %.3f",
                            f.tag().c_str(), direct.value, direct.stderr_, rel));
  out.csv_header = {"u", "integrand", "stderr"};
  for (std::size_t i = 0; i < m.u_grid.size(); ++i)
    out.csv_rows.push_back({m.u_grid[i], m.integrand[i].value, m.integrand[i].stderr_});
  return out;
}

ClaimOutcome htransform_reconstruction(const ClaimContext& ctx) {
  RngStream rng = stream(ctx, 1006);
  const std::size_t n = sized(50000, ctx, 1000);
  const ReconstructionResult r = reconstruct_p0u(1.0, n, conditioned_config(), rng);
  ClaimOutcome out;
  out.statistic = std::min(r.lifetime_p, r.endpoint_marginal.p_value);
  out.threshold = 0.001;
  out.pass = out.statistic > out.threshold && std::abs(r.mixing_mass - 1.0) < 1e-6;
  out.n = 2 * n;
  out.details.push_back(fmt("%d endpoint bins recombined vs a fresh sample: lifetime KS %.4f (p=%.4f)",
                            r.bins, r.lifetime_ks, r.lifetime_p));
  out.details.push_back(fmt("endpoint law vs its density: p=%.4f; mixing density mass %.8f",
                            r.endpoint_marginal.p_value, r.mixing_mass));
  return out;
}

}  // namespace langevin::claims
