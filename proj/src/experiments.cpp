#include "bdf3/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bdf3/bdf3_kernels.hpp"
#include "bdf3/rng.hpp"

namespace bdf3 {

double order_of(double e_coarse, double e_fine, double tau_coarse, double tau_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(tau_coarse > 0.0) || !(tau_fine > 0.0))
    throw std::invalid_argument("order_of: inputs must be positive");
  if (!(tau_coarse > tau_fine))
    throw std::invalid_argument("order_of: tau_coarse must exceed tau_fine");
  return std::log(e_coarse / e_fine) / std::log(tau_coarse / tau_fine);
}

std::uint64_t level_seed(std::uint64_t seed, int level_index) {
  return SplitMix64::stream(seed, static_cast<std::uint64_t>(level_index)).next();
}

std::vector<ConvergenceRow> converge_table(const ConvergeOptions& options) {
  if (options.levels.empty())
    throw std::invalid_argument("converge_table: at least one level required");
  int prev = 0;
  for (int n : options.levels) {
    if (n < 8 || n <= prev)
      throw std::invalid_argument("converge_table: levels must be ascending and >= 8");
    prev = n;
  }
  if (options.kind == MeshKind::periodic && !options.mu)
    throw std::invalid_argument("converge_table: periodic meshes need mu");

  const double re = re_limit();
  std::vector<ConvergenceRow> rows;
  rows.reserve(options.levels.size());
  for (size_t i = 0; i < options.levels.size(); ++i) {
    const int n = options.levels[i];
    const TimeMesh mesh =
        options.kind == MeshKind::periodic
            ? TimeMesh::periodic_ratio(options.horizon, n, *options.mu)
            : TimeMesh::random(options.horizon, n, level_seed(options.seed, static_cast<int>(i)));

    SolverConfig cfg;
    cfg.eps = options.eps;
    cfg.kappa = options.kappa;
    cfg.starter = options.starter;
    cfg.grid_size = options.grid_size;
    const RunResult result = HeatSolver(cfg, mesh).run();

    const RatioStats stats = mesh.ratio_stats(re);
    ConvergenceRow row;
    row.n_steps = n;
    row.tau = mesh.max_step();
    row.e_n = result.e_max;
    row.r_max = stats.r_max;
    row.n1 = stats.count_ge;
    if (!rows.empty())
      row.order = order_of(rows.back().e_n, row.e_n, rows.back().tau, row.tau);
    rows.push_back(row);
  }
  return rows;
}

std::string emit(const std::vector<ConvergenceRow>& rows, TableFormat format) {
  if (rows.empty()) throw std::invalid_argument("emit: at least one row required");
  std::string out;
  char buf[160];
  if (format == TableFormat::csv) {
    out += "N,tau,eN,order,rmax,N1\n";
    for (const auto& r : rows) {
      if (r.order)
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", r.n_steps, r.tau,
                      r.e_n, *r.order, r.r_max, r.n1);
      else
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,,%.17g,%d\n", r.n_steps, r.tau, r.e_n,
                      r.r_max, r.n1);
      out += buf;
    }
  } else {
    out += "| N | tau(N) | e(N) | Order | r_max | N_1 |\n";
    out += "|---|--------|------|-------|-------|-----|\n";
    for (const auto& r : rows) {
      char order_buf[32];
      if (r.order)
        std::snprintf(order_buf, sizeof order_buf, "%.2f", *r.order);
      else
        std::snprintf(order_buf, sizeof order_buf, "--");
      std::snprintf(buf, sizeof buf, "| %d | %.2e | %.2e | %s | %.2f | %d |\n", r.n_steps,
                    r.tau, r.e_n, order_buf, r.r_max, r.n1);
      out += buf;
    }
  }
  return out;
}

double regression_slope_loglog(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2)
    throw std::invalid_argument("regression_slope_loglog: need at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(r.tau);
    const double y = std::log(r.e_n);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bdf3
