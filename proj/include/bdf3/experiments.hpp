#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdf3/heat_solver.hpp"
#include "bdf3/time_mesh.hpp"

namespace bdf3 {

enum class MeshKind { periodic, random };
enum class TableFormat { csv, markdown };

struct ConvergenceRow {
  int n_steps;
  double tau;   // maximum step size
  double e_n;   // max-over-time L2 error
  std::optional<double> order;
  double r_max;
  int n1;       // #ratios >= Re
};

// log(e_coarse/e_fine) / log(tau_coarse/tau_fine); rejects nonpositive inputs
// and tau_coarse <= tau_fine.
double order_of(double e_coarse, double e_fine, double tau_coarse, double tau_fine);

struct ConvergeOptions {
  MeshKind kind = MeshKind::periodic;
  std::optional<double> mu;  // required for periodic meshes
  Starter starter = Starter::sdirk3;
  std::vector<int> levels = {80, 160, 320, 640, 1280};
  std::uint64_t seed = 0;    // random meshes: level i uses stream(seed, i)
  double horizon = 1.0;
  double eps = 0.1;
  double kappa = 0.0;
  int grid_size = 32;
};

// One solver run per level; rows carry e(N), the adjacent-level order, r_max
// and the count of ratios at or above the computed step-ratio limit.
std::vector<ConvergenceRow> converge_table(const ConvergeOptions& options);

// csv: header `N,tau,eN,order,rmax,N1`, full %.17g precision (parse-exact);
// markdown: report-style layout with 3-significant-digit scientific floats.
std::string emit(const std::vector<ConvergenceRow>& rows, TableFormat format);

// Least-squares slope of log e against log tau across all rows.
double regression_slope_loglog(const std::vector<ConvergenceRow>& rows);

// Per-level derived seed for random-mesh tables (documented in the README).
std::uint64_t level_seed(std::uint64_t seed, int level_index);

}  // namespace bdf3
