#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bdf3/doc_kernels.hpp"
#include "bdf3/time_mesh.hpp"

namespace bdf3 {

// Symmetric pentadiagonal matrix stored as the diagonal and the two
// sub-diagonals; symmetry is by construction.
struct SymmetricBandMatrix {
  std::vector<double> diag;  // m entries
  std::vector<double> sub1;  // m-1 entries
  std::vector<double> sub2;  // m-2 entries

  int order() const { return static_cast<int>(diag.size()); }
  std::vector<double> dense() const;  // row-major m*m
};

// Step-rescaled matrix of order m = n-2 from ratios r_2..r_n. Row k (3..n):
//   diagonal        2 d0(r_k, r_{k-1})
//   1st subdiagonal sqrt(r_k) d1(r_k, r_{k-1})
//   2nd subdiagonal sqrt(r_k r_{k-1}) d2(r_k, r_{k-1})
// Entries depend on the ratios only, never on the absolute step sizes.
SymmetricBandMatrix rescaled_matrix(std::span<const double> ratios);

// Smallest eigenvalue by cyclic Jacobi rotations on the densified matrix,
// sweeping until the off-diagonal Frobenius norm drops below tol * ||A||_F;
// throws after 100 sweeps without convergence.
double min_eigenvalue(const SymmetricBandMatrix& matrix, double tol);
double min_eigenvalue_dense(std::vector<double> a, int m, double tol);

struct EigscanResult {
  double min_over_runs;
  std::vector<double> per_run;
};

// Per run, draw r_2..r_n uniformly on (0, ratio_limit) from the child stream
// (seed, run), assemble the step-rescaled matrix and record its minimum
// eigenvalue; the headline statistic is the minimum over all runs.
EigscanResult eigscan(double ratio_limit, int n, int runs, std::uint64_t seed,
                      double tol = 1e-9);

struct QuadFormResult {
  double form_value;
  double lower_bound;
};

// form  = 2 sum_k xi_k tau_k sum_{j=3}^k d^{(k)}_{k-j} xi_j,
// bound = (1/50) sum_k tau_k xi_k^2; xi[0] corresponds to xi_3.
QuadFormResult bdf3_quadratic_form(const TimeMesh& mesh, std::span<const double> xi);

// 2 sum_k xi_k tau_k sum_{j=3}^k theta^{(k)}_{k-j} xi_j; positive for any
// nonzero sequence on ratio-admissible meshes.
double doc_quadratic_form(const DocKernelTable& table, std::span<const double> xi);

}  // namespace bdf3
