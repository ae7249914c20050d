// bdf3: experiment driver for the variable-step third-order scheme.
//
// Subcommands: re-root, converge, eigscan, lemmas, energy, doc-stats, trunc,
// mesh. Output is CSV on stdout. Exit codes: 0 success, 1 check violation
// (with --check), 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bdf3/bdf3_kernels.hpp"
#include "bdf3/doc_kernels.hpp"
#include "bdf3/experiments.hpp"
#include "bdf3/heat_solver.hpp"
#include "bdf3/quad_forms.hpp"
#include "bdf3/rng.hpp"
#include "bdf3/spectral.hpp"
#include "bdf3/time_mesh.hpp"

namespace {

using namespace bdf3;

// Accepts "2Re", "4Re", "1.5Re" or a plain float; the Re token resolves
// against the computed step-ratio limit.
double parse_mu(const std::string& text) {
  const auto pos = text.find("Re");
  if (pos != std::string::npos && pos + 2 == text.size()) {
    const std::string head = text.substr(0, pos);
    const double factor = head.empty() ? 1.0 : std::stod(head);
    return factor * re_limit();
  }
  return std::stod(text);
}

TimeMesh make_mesh(const std::string& kind, double horizon, int n, double mu,
                   std::uint64_t seed) {
  if (kind == "uniform") return TimeMesh::uniform(horizon, n);
  if (kind == "periodic") return TimeMesh::periodic_ratio(horizon, n, mu);
  if (kind == "random") return TimeMesh::random(horizon, n, seed);
  if (kind == "random-admissible") {
    const double hi = re_limit() * 0.995;
    return TimeMesh::random_ratio_log(horizon, n, seed, 1.0 / hi, hi);
  }
  throw CLI::ValidationError("--mesh", "unknown mesh kind: " + kind);
}

SpectralField random_smooth_field(int m, std::uint64_t seed) {
  SpectralField u(m);
  SplitMix64 rng(seed);
  for (int k1 = -3; k1 <= 3; ++k1)
    for (int k2 = -3; k2 <= 3; ++k2)
      u.set_coeff(k1, k2, Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
  u.enforce_hermitian();
  return u;
}

int run_re_root(double tol) {
  const double re = compute_re(tol);
  const auto gb = compute_gamma_bar(tol);
  std::printf("quantity,value\n");
  std::printf("Re,%.12f\n", re);
  std::printf("residual,%.3e\n", std::abs(re_defect(re)));
  std::printf("gamma_bar,%.6f\n", gb.gamma_bar);
  std::printf("R_bar,%.6f\n", gb.r_bar);
  return 0;
}

struct ConvergeArgs {
  std::string mesh = "periodic";
  std::string mu = "2Re";
  std::string starter = "rk3";
  std::vector<int> levels = {80, 160, 320, 640, 1280};
  std::uint64_t seed = 2022;
  int grid = 32;
  double eps = 0.1;
  double horizon = 1.0;
  std::string format = "csv";
  bool check = false;
};

int run_converge(const ConvergeArgs& args) {
  ConvergeOptions opt;
  opt.kind = args.mesh == "random" ? MeshKind::random : MeshKind::periodic;
  if (opt.kind == MeshKind::periodic) opt.mu = parse_mu(args.mu);
  opt.starter = args.starter == "bdf2" ? Starter::bdf2 : Starter::sdirk3;
  opt.levels = args.levels;
  opt.seed = args.seed;
  opt.grid_size = args.grid;
  opt.eps = args.eps;
  opt.horizon = args.horizon;

  const auto rows = converge_table(opt);
  std::cout << emit(rows, args.format == "md" ? TableFormat::markdown : TableFormat::csv);

  if (!args.check) return 0;
  if (opt.kind == MeshKind::periodic) {
    for (size_t i = 1; i < rows.size(); ++i)
      if (*rows[i].order < 2.85 || *rows[i].order > 3.15) return 1;
  } else {
    const double slope = regression_slope_loglog(rows);
    if (std::abs(slope - 3.0) > 0.2) return 1;
  }
  return 0;
}

int run_eigscan(double limit, int n, int runs, std::uint64_t seed) {
  const auto res = eigscan(limit, n, runs, seed);
  std::printf("run,min_eig\n");
  for (int r = 0; r < runs; ++r) std::printf("%d,%.12g\n", r, res.per_run[static_cast<size_t>(r)]);
  std::printf("min,%.12g\n", res.min_over_runs);
  return 0;
}

int run_lemmas(int grid, bool check) {
  const auto report = scan_lemma_positivity(grid);
  std::printf("check,grid,min_value,argmin_x,argmin_y,argmin_z,violations\n");
  for (const auto& e : report.entries)
    std::printf("%s,%d,%.12g,%.6f,%.6f,%.6f,%ld\n", e.check.c_str(), report.grid, e.min_value,
                e.argmin[0], e.argmin[1], e.argmin[2], e.violations);
  std::printf("bridge_q,%d,%.3e,,,,%d\n", report.grid, report.bridge_q_residual,
              report.bridge_q_residual < 1e-12 ? 0 : 1);
  std::printf("bridge_p,%d,%.3e,,,,%d\n", report.grid, report.bridge_p_residual,
              report.bridge_p_residual < 1e-12 ? 0 : 1);
  return (check && !report.all_passed()) ? 1 : 0;
}

int run_energy(double kappa, double eps, int n, std::uint64_t seed, const std::string& mesh_kind,
               const std::string& mu, int grid, bool check) {
  const TimeMesh mesh = make_mesh(mesh_kind, 1.0, n, mu.empty() ? 1.2 : parse_mu(mu), seed);
  SolverConfig cfg;
  cfg.eps = eps;
  cfg.kappa = kappa;
  cfg.grid_size = grid;
  cfg.forcing = ForcingKind::none;
  cfg.record_energy = true;
  const HeatSolver solver(cfg, mesh);
  const auto res = solver.run_from(random_smooth_field(grid, seed + 1));

  std::printf("n,E,grad_term,reaction_term,G_term,delta_E\n");
  bool monotone = true;
  for (size_t i = 0; i < res.energy.size(); ++i) {
    const auto& s = res.energy[i];
    if (i == 0) {
      std::printf("%d,%.12g,%.12g,%.12g,%.12g,\n", s.n, s.total, s.grad_term, s.reaction_term,
                  s.g_term);
    } else {
      const double delta = s.total - res.energy[i - 1].total;
      if (delta > 1e-12 * std::max(1.0, res.energy.front().total)) monotone = false;
      std::printf("%d,%.12g,%.12g,%.12g,%.12g,%.3e\n", s.n, s.total, s.grad_term,
                  s.reaction_term, s.g_term, delta);
    }
  }
  return (check && kappa <= 0.0 && !monotone) ? 1 : 0;
}

int run_doc_stats(int n, const std::string& mesh_kind, const std::string& mu,
                  std::uint64_t seed) {
  const TimeMesh mesh = make_mesh(mesh_kind, 1.0, n, mu.empty() ? 1.2 : parse_mu(mu), seed);
  const DocKernelTable table(mesh, n);
  const auto sums = abs_sums(table);
  std::printf("n,row_abs_sum,theta_0\n");
  for (int k = 3; k <= n; ++k)
    std::printf("%d,%.12g,%.12g\n", k, sums.row_sums[static_cast<size_t>(k - 3)],
                table.theta(k, 0));
  return 0;
}

int run_trunc(const std::string& fn, const std::vector<int>& levels, bool check) {
  std::function<double(double)> v, dv;
  if (fn == "cubic") {
    v = [](double t) { return t * t * t; };
    dv = [](double t) { return 3.0 * t * t; };
  } else if (fn == "quartic") {
    v = [](double t) { return t * t * t * t; };
    dv = [](double t) { return 4.0 * t * t * t; };
  } else {
    v = [](double t) { return std::sin(t); };
    dv = [](double t) { return std::cos(t); };
  }
  std::printf("tau,zeta,slope\n");
  std::optional<double> prev_tau, prev_zeta;
  bool slopes_ok = true;
  for (const int n : levels) {
    const TimeMesh mesh = TimeMesh::uniform(1.0, n);
    const double z = truncation_error_direct(v, dv, mesh, n);
    // slopes computed only above the rounding floor (cubics sit below it)
    if (prev_zeta && std::abs(z) > 1e-14 && std::abs(*prev_zeta) > 1e-14) {
      const double slope = std::log(std::abs(*prev_zeta / z)) / std::log(*prev_tau / (1.0 / n));
      std::printf("%.12g,%.12g,%.4f\n", 1.0 / n, z, slope);
      if (std::abs(slope - 3.0) > 0.05) slopes_ok = false;
    } else {
      std::printf("%.12g,%.12g,\n", 1.0 / n, z);
    }
    prev_tau = 1.0 / n;
    prev_zeta = z;
  }
  return (check && fn == "sin" && !slopes_ok) ? 1 : 0;
}

int run_mesh(const std::string& kind, double horizon, int n, const std::string& mu,
             std::uint64_t seed) {
  const TimeMesh mesh = make_mesh(kind, horizon, n, mu.empty() ? 2.0 : parse_mu(mu), seed);
  mesh.dump_csv(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-step BDF3 experiments"};
  app.require_subcommand(1);

  auto* re_cmd = app.add_subcommand("re-root", "step-ratio limit root and gamma-bar closure");
  double re_tol = 1e-12;
  re_cmd->add_option("--tol", re_tol, "bisection tolerance");

  auto* conv = app.add_subcommand("converge", "convergence table for the heat problem");
  ConvergeArgs cargs;
  conv->add_option("--mesh", cargs.mesh, "periodic|random")
      ->check(CLI::IsMember({"periodic", "random"}));
  conv->add_option("--mu", cargs.mu, "periodic ratio, e.g. 2Re, 4Re, 1.5");
  conv->add_option("--starter", cargs.starter, "rk3|bdf2")
      ->check(CLI::IsMember({"rk3", "bdf2"}));
  conv->add_option("--levels", cargs.levels, "step counts, ascending")->delimiter(',');
  conv->add_option("--seed", cargs.seed, "base seed for random meshes");
  conv->add_option("--grid", cargs.grid, "spatial grid size (power of two)");
  conv->add_option("--eps", cargs.eps, "diffusivity");
  conv->add_option("--T", cargs.horizon, "final time");
  conv->add_option("--format", cargs.format, "csv|md")->check(CLI::IsMember({"csv", "md"}));
  conv->add_flag("--check", cargs.check, "exit 1 unless orders/slope are third order");

  auto* eig = app.add_subcommand("eigscan", "minimum eigenvalue of the step-rescaled matrix");
  double eig_re = 1.2;
  int eig_n = 50, eig_runs = 200;
  std::uint64_t eig_seed = 20220301;
  eig->add_option("--re", eig_re, "ratio limit");
  eig->add_option("--n", eig_n, "time levels");
  eig->add_option("--runs", eig_runs, "random meshes per scan");
  eig->add_option("--seed", eig_seed, "base seed");

  auto* lem = app.add_subcommand("lemmas", "positivity scans of the decomposition bounds");
  int lem_grid = 64;
  bool lem_check = false;
  lem->add_option("--grid", lem_grid, "points per axis");
  lem->add_flag("--check", lem_check, "exit 1 on any violation");

  auto* ener = app.add_subcommand("energy", "modified-energy trace of a free run");
  double en_kappa = -1.0, en_eps = 0.1;
  int en_n = 100, en_grid = 16;
  std::uint64_t en_seed = 1;
  std::string en_mesh = "random-admissible", en_mu;
  bool en_check = false;
  ener->add_option("--kappa", en_kappa, "reaction coefficient");
  ener->add_option("--eps", en_eps, "diffusivity");
  ener->add_option("--n", en_n, "time steps");
  ener->add_option("--seed", en_seed, "mesh/initial-data seed");
  ener->add_option("--mesh", en_mesh, "uniform|periodic|random-admissible");
  ener->add_option("--mu", en_mu, "periodic ratio (periodic meshes)");
  ener->add_option("--grid", en_grid, "spatial grid size");
  ener->add_flag("--check", en_check, "exit 1 if the energy increases (kappa <= 0)");

  auto* doc = app.add_subcommand("doc-stats", "DOC kernel row sums");
  int doc_n = 100;
  std::string doc_mesh = "uniform", doc_mu;
  std::uint64_t doc_seed = 1;
  doc->add_option("--n", doc_n, "table size");
  doc->add_option("--mesh", doc_mesh, "uniform|periodic|random-admissible");
  doc->add_option("--mu", doc_mu, "periodic ratio");
  doc->add_option("--seed", doc_seed, "mesh seed");

  auto* tr = app.add_subcommand("trunc", "truncation error on uniform meshes");
  std::string tr_fn = "sin";
  std::vector<int> tr_levels = {32, 64, 128, 256};
  bool tr_check = false;
  tr->add_option("--fn", tr_fn, "cubic|sin|quartic")
      ->check(CLI::IsMember({"cubic", "sin", "quartic"}));
  tr->add_option("--levels", tr_levels, "step counts")->delimiter(',');
  tr->add_flag("--check", tr_check, "exit 1 unless sin slopes are 3 +/- 0.05");

  auto* mesh_cmd = app.add_subcommand("mesh", "dump a mesh as CSV");
  std::string mk = "uniform", mk_mu;
  double mk_T = 1.0;
  int mk_n = 80;
  std::uint64_t mk_seed = 1;
  mesh_cmd->add_option("--kind", mk, "uniform|periodic|random|random-admissible");
  mesh_cmd->add_option("--T", mk_T, "final time");
  mesh_cmd->add_option("--n", mk_n, "steps");
  mesh_cmd->add_option("--mu", mk_mu, "periodic ratio");
  mesh_cmd->add_option("--seed", mk_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (re_cmd->parsed()) return run_re_root(re_tol);
    if (conv->parsed()) return run_converge(cargs);
    if (eig->parsed()) return run_eigscan(eig_re, eig_n, eig_runs, eig_seed);
    if (lem->parsed()) return run_lemmas(lem_grid, lem_check);
    if (ener->parsed())
      return run_energy(en_kappa, en_eps, en_n, en_seed, en_mesh, en_mu, en_grid, en_check);
    if (doc->parsed()) return run_doc_stats(doc_n, doc_mesh, doc_mu, doc_seed);
    if (tr->parsed()) return run_trunc(tr_fn, tr_levels, tr_check);
    if (mesh_cmd->parsed()) return run_mesh(mk, mk_T, mk_n, mk_mu, mk_seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
