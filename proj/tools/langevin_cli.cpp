// Command-line front end: closed forms, quadrature, simulation and the
// verification suite. Tables go to stdout, or to <out-dir>/<command>.<ext>.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "langevin/densities.hpp"
#include "langevin/harness.hpp"
#include "langevin/htransform.hpp"
#include "langevin/parallel.hpp"
#include "langevin/quadrature.hpp"
#include "langevin/reflected.hpp"
#include "langevin/sampler.hpp"

using namespace langevin;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Globals {
  std::uint64_t seed = 42;
  int threads = 0;
  std::string out_dir;
  std::string format = "csv";
};

std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  if (format == "json") {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : t.rows) {
      nlohmann::json o;
      for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = r[i];
      a.push_back(o);
    }
    return a.dump(2) + "\n";
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

void emit(const Table& t, const Globals& g, const std::string& name) {
  const std::string text = render(t, g.format);
  if (g.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  const std::string path = g.out_dir + "/" + name + (g.format == "json" ? ".json" : ".csv");
  std::ofstream(path, std::ios::binary) << text;
  std::cerr << "wrote " << path << "\n";
}

std::vector<double> grid(const std::vector<double>& spec) {
  if (spec.size() != 3 || spec[2] < 1) throw DomainError("grid must be lo,hi,n with n >= 1");
  const int n = static_cast<int>(spec[2]);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? spec[0] : spec[0] + (spec[1] - spec[0]) * i / (n - 1));
  return out;
}

StepConfig step_config(double step, double tol) {
  StepConfig cfg;
  cfg.step = step;
  cfg.boundary_tol = tol;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kolmogorov process: densities, excursions, reflection and conditioned laws"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: LANGEVIN_THREADS or all cores)");
  app.add_option("--out-dir", g.out_dir, "Write tables and reports here instead of stdout");
  app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  // density
  auto* density = app.add_subcommand("density", "Evaluate closed-form densities on a grid");
  std::string kind = "mckean-marginal";
  double d_t = 1.0, d_x = 0.0, d_u = 1.0;
  std::vector<double> a_grid{0.0, 4.0, 41}, b_grid{0.0, 4.0, 41};
  density->add_option("--kind", kind, "transition | mckean-joint | mckean-marginal | phi | nprime-joint | lefebvre")
      ->check(CLI::IsMember({"transition", "mckean-joint", "mckean-marginal", "phi", "nprime-joint", "lefebvre"}))
      ->capture_default_str();
  density->add_option("--t", d_t, "Time (transition)");
  density->add_option("--x", d_x, "Start position (transition)");
  density->add_option("--u", d_u, "Start velocity");
  density->add_option("--grid", a_grid, "First axis lo,hi,n")->expected(3);
  density->add_option("--grid2", b_grid, "Second axis lo,hi,n (two-variable densities)")->expected(3);

  // hfun
  auto* hfun = app.add_subcommand("hfun", "h_v and hbar_0 by quadrature");
  double h_x = 0.0, h_u = 1.0;
  std::vector<double> h_v{1.0};
  hfun->add_option("--x", h_x, "Position")->capture_default_str();
  hfun->add_option("--u", h_u, "Velocity")->capture_default_str();
  hfun->add_option("--v", h_v, "Terminal speeds; 0 selects hbar_0")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "One free path on a uniform grid");
  double s_x = 0.0, s_u = 0.0, s_h = 1.0, s_step = 1e-3;
  bool two_sided = false;
  simulate->add_option("--x", s_x, "Start position");
  simulate->add_option("--u", s_u, "Start velocity");
  simulate->add_option("--horizon", s_h, "Horizon")->capture_default_str();
  simulate->add_option("--step", s_step, "Grid spacing")->capture_default_str();
  simulate->add_flag("--two-sided", two_sided, "Path on [-horizon, horizon]");

  // excursions
  auto* excursions = app.add_subcommand("excursions", "Excursions of the killed process");
  double e_u0 = 1.0, e_step = 1e-3;
  std::size_t e_n = 1000;
  bool exact = false;
  std::vector<double> window;
  excursions->add_option("--u0", e_u0, "Initial velocity")->capture_default_str();
  excursions->add_option("--n", e_n, "Number of excursions")->capture_default_str();
  excursions->add_option("--step", e_step, "Minimum step")->capture_default_str();
  excursions->add_flag("--exact", exact, "Sample (lifetime, terminal speed) without a path");
  excursions->add_option("--window", window, "Speed-weighted window lo,hi (both signs)")->expected(2);

  // reflect
  auto* reflect = app.add_subcommand("reflect", "Occupation of the reflected process");
  double r_h = 1000.0, r_step = 1e-3, r_tol = 1e-9;
  long r_exc = 0;
  std::size_t r_streams = 8;
  std::vector<double> box{0.0, 1.0, -2.0, 2.0, 4, 4};
  std::string r_out;
  reflect->add_option("--horizon", r_h, "Post-change time budget")->capture_default_str();
  reflect->add_option("--excursions", r_exc, "Excursion budget (overrides --horizon)");
  reflect->add_option("--step", r_step, "Step inside the box")->capture_default_str();
  reflect->add_option("--tol", r_tol, "Boundary tolerance of the crossing search")->capture_default_str();
  reflect->add_option("--streams", r_streams, "Independent replicas")->capture_default_str();
  reflect->add_option("--box", box, "x_lo,x_hi,u_lo,u_hi,nx,ny")->expected(6);
  reflect->add_option("--out", r_out, "CSV file for the cells");

  // htransform
  auto* htr = app.add_subcommand("htransform", "Conditioned excursion laws");
  std::string mode = "weighted";
  double c_u = 1.0, c_v = 1.0, c_t = 0.25, c_step = 1e-3;
  std::size_t c_n = 2000;
  htr->add_option("--mode", mode, "weighted | binned | duality | mixture")
      ->check(CLI::IsMember({"weighted", "binned", "duality", "mixture"}))
      ->capture_default_str();
  htr->add_option("--u", c_u, "Initial speed")->capture_default_str();
  htr->add_option("--v", c_v, "Terminal speed (0: zero terminal velocity)")->capture_default_str();
  htr->add_option("--t", c_t, "Snapshot time")->capture_default_str();
  htr->add_option("--n", c_n, "Sample size")->capture_default_str();
  htr->add_option("--step", c_step, "Minimum step")->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "Run the verification claims");
  bool quick = false, full = false, list = false;
  std::vector<std::string> only;
  double scale = 1.0;
  verify->add_flag("--quick", quick, "Analytic subset only");
  verify->add_flag("--full", full, "All claims (default)");
  verify->add_flag("--list", list, "List registered claims and exit");
  verify->add_option("--claim", only, "Run only these claim ids");
  verify->add_option("--scale", scale, "Multiply Monte Carlo sizes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g.threads > 0) set_thread_count(g.threads);
    RngStream rng(g.seed, 0);

    if (density->parsed()) {
      Table t;
      const auto a = grid(a_grid), b = grid(b_grid);
      if (kind == "mckean-marginal" || kind == "phi" || kind == "lefebvre") {
        t.header = {kind == "lefebvre" ? "xi" : "v", "value"};
        for (double v : a)
          t.rows.push_back({v, kind == "lefebvre"  ? (v > 0.0 ? lefebvre_density(v) : 0.0)
                               : kind == "phi"     ? phi_density(d_u, v)
                                                   : mckean_marginal_density(d_u, v)});
      } else if (kind == "transition") {
        t.header = {"y", "v", "value"};
        for (double y : a)
          for (double v : b) t.rows.push_back({y, v, transition_density(d_t, {d_x, d_u}, {y, v})});
      } else {
        t.header = {"s", "v", "value"};
        for (double s : a)
          for (double v : b) {
            const bool ok = s > 0.0 && v > 0.0;
            const double val = !ok ? 0.0
                               : kind == "nprime-joint" ? nprime_joint_density(s, v)
                                                        : mckean_joint_density(d_u, s, v);
            t.rows.push_back({s, v, val});
          }
      }
      emit(t, g, "density");
    } else if (hfun->parsed()) {
      Table t{{"x", "u", "v", "value", "err"}, {}};
      const DomainD z(h_x, h_u);
      for (double v : h_v) {
        const QuadResult r = v == 0.0 ? hbar0_general(z) : h_v_general(z, v);
        t.rows.push_back({h_x, h_u, v, r.value, r.err_estimate});
      }
      emit(t, g, "hfun");
    } else if (simulate->parsed()) {
      const StepConfig cfg = step_config(s_step, 1e-9);
      const Path p = two_sided ? simulate_two_sided({s_x, s_u}, s_h, cfg, rng)
                               : simulate_path({s_x, s_u}, s_h, cfg, rng);
      Table t{{"t", "x", "u"}, {}};
      for (std::size_t i = 0; i < p.size(); ++i) t.rows.push_back({p.times()[i], p.states()[i].x, p.states()[i].u});
      emit(t, g, "simulate");
    } else if (excursions->parsed()) {
      const StepConfig cfg = step_config(e_step, 1e-9);
      Table t{{"u0", "zeta", "v_end", "weight"}, {}};
      if (!window.empty()) {
        const auto ens = sample_qex_window(window[0], window[1], e_n, cfg, rng);
        for (std::size_t i = 0; i < ens.size(); ++i)
          t.rows.push_back({ens.items[i].u0, ens.items[i].zeta, ens.items[i].v_end, ens.weights[i]});
      } else {
        for (std::size_t i = 0; i < e_n; ++i) {
          if (exact) {
            const auto [z, v] = sample_first_passage_endpoint(e_u0, rng);
            t.rows.push_back({e_u0, z, v, 1.0});
          } else {
            const auto e = simulate_excursion(e_u0, cfg, rng);
            t.rows.push_back({e.u0, e.zeta, e.v_end, 1.0});
          }
        }
      }
      emit(t, g, "excursions");
    } else if (reflect->parsed()) {
      const StepConfig cfg = step_config(r_step, r_tol);
      const BinGrid2D b{BinGrid2D::linspace(box[0], box[1], static_cast<int>(box[4])),
                        BinGrid2D::linspace(box[2], box[3], static_cast<int>(box[5]))};
      OccupationBudget budget;
      if (r_exc > 0)
        budget.excursions = r_exc;
      else
        budget.horizon = r_h;
      const OccupationGrid occ = reflected_occupation(budget, b, r_step, cfg, rng, r_streams);
      Table t{{"x_lo", "x_hi", "u_lo", "u_hi", "count", "time_in_cell"}, {}};
      for (int c = 0; c < b.cells(); ++c) {
        const int i = c / b.ny(), j = c % b.ny();
        t.rows.push_back({b.x_edges[i], b.x_edges[i + 1], b.y_edges[j], b.y_edges[j + 1],
                          double(occ.count[c]), occ.time_in_cell[c]});
      }
      std::cerr << occ.excursions << " excursions, " << occ.steps << " steps, time " << occ.total_time << "\n";
      if (!r_out.empty()) {
        write_csv(r_out, t.header, t.rows);
      } else {
        emit(t, g, "reflect");
      }
    } else if (htr->parsed()) {
      const StepConfig cfg = step_config(c_step, 1e-9);
      Table t;
      if (mode == "weighted") {
        const auto e = c_v > 0.0 ? sample_quv_marginal(c_u, c_v, c_t, c_n, cfg, rng)
                                 : sample_qu0_marginal(c_u, c_t, c_n, cfg, rng);
        t.header = {"x", "u", "weight"};
        for (std::size_t i = 0; i < e.size(); ++i) t.rows.push_back({e.items[i].x, e.items[i].u, e.weights[i]});
      } else if (mode == "binned") {
        const auto b = sample_binned_conditional(c_u, c_v, c_n, cfg, rng, c_t);
        t.header = {"zeta", "v_end", "max_height", "argmax", "x_t", "u_t"};
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (const auto& s : b.items)
          t.rows.push_back({s.record.zeta, s.record.v_end, s.record.max_abs_height, s.record.argmax_time,
                            s.at_t ? s.at_t->x : nan, s.at_t ? s.at_t->u : nan});
      } else if (mode == "duality") {
        const auto d = check_quv_duality(c_u, c_v, c_n, cfg, rng);
        t.header = {"lifetime_p", "height_p", "argmax_p", "n_uv", "n_vu"};
        t.rows.push_back({d.lifetime.p_value, d.max_height.p_value, d.argmax_reversal.p_value,
                          double(d.n_uv), double(d.n_vu)});
      } else {
        const auto m = mixture_nprime(Functional::height_above(c_v > 0.0 ? c_v : 1.0),
                                      geometric_grid(0.02, 50.0, 49), c_n, cfg, rng);
        t.header = {"u", "integrand", "stderr"};
        for (std::size_t i = 0; i < m.u_grid.size(); ++i)
          t.rows.push_back({m.u_grid[i], m.integrand[i].value, m.integrand[i].stderr_});
        std::cerr << "estimate " << m.estimate.value << " +- " << m.estimate.stderr_ << "\n";
      }
      emit(t, g, "htransform");
    } else if (verify->parsed()) {
      if (list) {
        for (const auto& c : claim_registry())
          std::printf("%-34s %2d %s%s\n", c.id.c_str(), c.criterion, c.description.c_str(),
                      c.quick ? " [quick]" : "");
        return 0;
      }
      if (quick && full) throw DomainError("--quick and --full are exclusive");
      ExperimentSpec spec;
      spec.claims = only;
      spec.quick = quick;
      spec.seed = g.seed;
      spec.scale = scale;
      spec.out_dir = g.out_dir;
      spec.validate();
      bool all = true;
      run_suite(spec, [&](const TestReport& r) {
        std::printf("%s\n", report_line(r).c_str());
        for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        all = all && r.pass;
      });
      return all ? 0 : 1;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
