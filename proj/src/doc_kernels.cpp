#include "bdf3/doc_kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace bdf3 {

DocKernelTable::DocKernelTable(const TimeMesh& mesh, int n_max)
    : mesh_(mesh), n_max_(n_max) {
  if (n_max < 3 || n_max > mesh.n_steps())
    throw std::invalid_argument("DocKernelTable: 3 <= n_max <= N required");

  dtab_.reserve(static_cast<size_t>(n_max - 2));
  for (int n = 3; n <= n_max; ++n)
    dtab_.push_back(d_coeffs(mesh_.ratio(n), mesh_.ratio(n - 1)));

  rows_.resize(static_cast<size_t>(n_max - 2));
  for (int n = 3; n <= n_max; ++n) {
    auto& row = rows_[static_cast<size_t>(n - 3)];
    row.resize(static_cast<size_t>(n - 2));
    row[0] = 1.0 / d(n).d0;
    for (int j = n - 1; j >= 3; --j) {
      const int lag = n - j;
      double acc = row[static_cast<size_t>(lag - 1)] * d(j + 1).d1;
      if (j + 2 <= n) acc += row[static_cast<size_t>(lag - 2)] * d(j + 2).d2;
      row[static_cast<size_t>(lag)] = -acc / d(j).d0;
    }
  }
}

double orthogonality_residual(const DocKernelTable& table, int n) {
  if (n < 3 || n > table.n_max())
    throw std::invalid_argument("orthogonality_residual: n out of range");
  double worst = 0.0;
  for (int j = 3; j <= n; ++j) {
    double sum = table.theta(n, n - j) * table.d(j).d0;
    if (j + 1 <= n) sum += table.theta(n, n - j - 1) * table.d(j + 1).d1;
    if (j + 2 <= n) sum += table.theta(n, n - j - 2) * table.d(j + 2).d2;
    const double target = (j == n) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(sum - target));
  }
  return worst;
}

double mutual_orthogonality_residual(const DocKernelTable& table, int n) {
  if (n < 3 || n > table.n_max())
    throw std::invalid_argument("mutual_orthogonality_residual: n out of range");
  const auto dn = table.d(n);
  const double kernels[3] = {dn.d0, dn.d1, dn.d2};
  double worst = 0.0;
  for (int j = 3; j <= n; ++j) {
    double sum = 0.0;
    for (int i = std::max(j, n - 2); i <= n; ++i)
      sum += kernels[n - i] * table.theta(i, i - j);
    const double target = (j == n) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(sum - target));
  }
  return worst;
}

AbsSums abs_sums(const DocKernelTable& table) {
  const int n_max = table.n_max();
  AbsSums out;
  out.row_sums.assign(static_cast<size_t>(n_max - 2), 0.0);
  out.col_sums.assign(static_cast<size_t>(n_max - 2), 0.0);
  for (int n = 3; n <= n_max; ++n) {
    const auto row = table.row(n);
    double rs = 0.0;
    for (int j = 3; j <= n; ++j) {
      const double a = std::abs(row[static_cast<size_t>(n - j)]);
      rs += a;
      out.col_sums[static_cast<size_t>(j - 3)] += a;
    }
    out.row_sums[static_cast<size_t>(n - 3)] = rs;
  }
  double k3 = 0.0;
  for (double v : out.row_sums) k3 = std::max(k3, v);
  for (double v : out.col_sums) k3 = std::max(k3, v);
  out.k3_hat = k3;
  return out;
}

double initial_effect(const DocKernelTable& table, double dtau_v1, double dtau_v2, int n) {
  if (n < 3 || n > table.n_max())
    throw std::invalid_argument("initial_effect: n out of range");
  double sum2 = table.theta(n, n - 3) * table.d(3).d1;
  if (n >= 4) sum2 += table.theta(n, n - 4) * table.d(4).d2;
  return dtau_v2 * sum2 + table.theta(n, n - 3) * table.d(3).d2 * dtau_v1;
}

double doc_transform_residual(const DocKernelTable& table, std::span<const double> values,
                              int n) {
  if (n < 3 || n > table.n_max())
    throw std::invalid_argument("doc_transform_residual: n out of range");
  if (static_cast<size_t>(n) >= values.size())
    throw std::invalid_argument("doc_transform_residual: values too short");
  const TimeMesh& mesh = table.mesh();
  double conv = 0.0;
  for (int i = 3; i <= n; ++i)
    conv += table.theta(n, n - i) * bdf3_apply(mesh, values, i);
  const double dv1 = (values[1] - values[0]) / mesh.step(1);
  const double dv2 = (values[2] - values[1]) / mesh.step(2);
  const double dvn = (values[static_cast<size_t>(n)] - values[static_cast<size_t>(n - 1)]) /
                     mesh.step(n);
  return std::abs(conv - initial_effect(table, dv1, dv2, n) - dvn);
}

}  // namespace bdf3
