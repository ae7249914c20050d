#pragma once

#include <span>
#include <vector>

#include "bdf3/bdf3_kernels.hpp"
#include "bdf3/time_mesh.hpp"

namespace bdf3 {

// Lower-triangular table of discrete orthogonal convolution kernels
// theta^{(n)}_{n-j}, 3 <= j <= n <= n_max, built against a fixed mesh by the
// recursion
//   theta^{(n)}_0 = 1/d0^{(n)},
//   theta^{(n)}_{n-j} = -(1/d0^{(j)}) [ theta^{(n)}_{n-j-1} d1^{(j+1)}
//                                     + theta^{(n)}_{n-j-2} d2^{(j+2)} ],
// which is the generic inverse recursion collapsed to the three-band kernel.
// Row n costs O(n); the whole table is O(n_max^2) time and memory. Rows are
// stored by lag: row(n)[lag] = theta^{(n)}_{lag}. Immutable once built.
class DocKernelTable {
 public:
  DocKernelTable(const TimeMesh& mesh, int n_max);

  int n_max() const { return n_max_; }
  const TimeMesh& mesh() const { return mesh_; }

  double theta(int n, int lag) const {
    return rows_[static_cast<size_t>(n - 3)][static_cast<size_t>(lag)];
  }
  std::span<const double> row(int n) const { return rows_[static_cast<size_t>(n - 3)]; }
  DCoeffs d(int n) const { return dtab_[static_cast<size_t>(n - 3)]; }

 private:
  TimeMesh mesh_;
  int n_max_;
  std::vector<std::vector<double>> rows_;
  std::vector<DCoeffs> dtab_;
};

// max_j |sum_{i=j}^n theta^{(n)}_{n-i} d^{(i)}_{i-j} - delta_{nj}|.
double orthogonality_residual(const DocKernelTable& table, int n);

// max_j |sum_{i=j}^n d^{(n)}_{n-i} theta^{(i)}_{i-j} - delta_{nj}|.
double mutual_orthogonality_residual(const DocKernelTable& table, int n);

struct AbsSums {
  std::vector<double> row_sums;  // index n-3: sum_j |theta^{(n)}_{n-j}|
  std::vector<double> col_sums;  // index i-3: sum_{n>=i} |theta^{(n)}_{n-i}|
  double k3_hat;                 // max over both; numerical stand-in for K_3
};
AbsSums abs_sums(const DocKernelTable& table);

// Starting-effect term
//   I_3^n[v] = dtau_v2 * sum_i theta^{(n)}_{n-i} d^{(i)}_{i-2}
//            + theta^{(n)}_{n-3} d^{(3)}_2 * dtau_v1.
double initial_effect(const DocKernelTable& table, double dtau_v1, double dtau_v2, int n);

// |sum_{i=3}^n theta^{(n)}_{n-i} D3 v^i - I_3^n[v] - dtau v^n|; vanishes to
// roundoff for any values, confirming the summation-order exchange.
double doc_transform_residual(const DocKernelTable& table, std::span<const double> values,
                              int n);

}  // namespace bdf3
