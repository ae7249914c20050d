#include "bdf3/quad_forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdf3/bdf3_kernels.hpp"
#include "bdf3/rng.hpp"

namespace bdf3 {

std::vector<double> SymmetricBandMatrix::dense() const {
  const int m = order();
  std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) a[static_cast<size_t>(i) * m + i] = diag[static_cast<size_t>(i)];
  for (int i = 0; i + 1 < m; ++i) {
    a[static_cast<size_t>(i + 1) * m + i] = sub1[static_cast<size_t>(i)];
    a[static_cast<size_t>(i) * m + i + 1] = sub1[static_cast<size_t>(i)];
  }
  for (int i = 0; i + 2 < m; ++i) {
    a[static_cast<size_t>(i + 2) * m + i] = sub2[static_cast<size_t>(i)];
    a[static_cast<size_t>(i) * m + i + 2] = sub2[static_cast<size_t>(i)];
  }
  return a;
}

SymmetricBandMatrix rescaled_matrix(std::span<const double> ratios) {
  const int n = static_cast<int>(ratios.size()) + 1;
  if (n < 4) throw std::invalid_argument("rescaled_matrix: need ratios r_2..r_n with n >= 4");
  for (double r : ratios)
    if (!(r > 0.0)) throw std::invalid_argument("rescaled_matrix: nonpositive ratio");
  const auto r = [&](int k) { return ratios[static_cast<size_t>(k - 2)]; };

  const int m = n - 2;
  SymmetricBandMatrix b;
  b.diag.resize(static_cast<size_t>(m));
  b.sub1.resize(static_cast<size_t>(m - 1));
  b.sub2.resize(static_cast<size_t>(m - 2));
  for (int k = 3; k <= n; ++k) {
    const auto d = d_coeffs(r(k), r(k - 1));
    const int i = k - 3;
    b.diag[static_cast<size_t>(i)] = 2.0 * d.d0;
    if (k >= 4) b.sub1[static_cast<size_t>(i - 1)] = std::sqrt(r(k)) * d.d1;
    if (k >= 5) b.sub2[static_cast<size_t>(i - 2)] = std::sqrt(r(k) * r(k - 1)) * d.d2;
  }
  return b;
}

double min_eigenvalue_dense(std::vector<double> a, int m, double tol) {
  if (m < 1) throw std::invalid_argument("min_eigenvalue: empty matrix");
  if (!(tol > 0.0)) throw std::invalid_argument("min_eigenvalue: tol must be positive");
  auto at = [&a, m](int i, int j) -> double& { return a[static_cast<size_t>(i) * m + j]; };

  double norm_sq = 0.0;
  for (double v : a) norm_sq += v * v;
  if (norm_sq == 0.0) return 0.0;
  const double stop = tol * tol * norm_sq;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off_sq = 0.0;
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) off_sq += 2.0 * at(p, q) * at(p, q);
    if (off_sq <= stop) {
      double lo = at(0, 0);
      for (int i = 1; i < m; ++i) lo = std::min(lo, at(i, i));
      return lo;
    }
    // Skip rotations on entries that cannot matter yet; the threshold decays
    // to zero so late sweeps clean everything.
    const double thresh = (sweep < 4) ? 0.1 * std::sqrt(off_sq) / m : 0.0;

    for (int p = 0; p < m - 1; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= thresh) continue;
        if (apq == 0.0) continue;
        const double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double h = t * apq;
        at(p, p) -= h;
        at(q, q) += h;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (int r = 0; r < m; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          const double np = arp - s * (arq + arp * tau);
          const double nq = arq + s * (arp - arq * tau);
          at(r, p) = np;
          at(p, r) = np;
          at(r, q) = nq;
          at(q, r) = nq;
        }
      }
    }
  }
  throw std::runtime_error("min_eigenvalue: Jacobi sweeps did not converge");
}

double min_eigenvalue(const SymmetricBandMatrix& matrix, double tol) {
  return min_eigenvalue_dense(matrix.dense(), matrix.order(), tol);
}

EigscanResult eigscan(double ratio_limit, int n, int runs, std::uint64_t seed, double tol) {
  if (runs < 1) throw std::invalid_argument("eigscan: runs >= 1 required");
  if (n < 4) throw std::invalid_argument("eigscan: n >= 4 required");
  if (!(ratio_limit > 0.0)) throw std::invalid_argument("eigscan: positive limit required");

  EigscanResult out;
  out.per_run.resize(static_cast<size_t>(runs));
  std::vector<double> ratios(static_cast<size_t>(n - 1));
  for (int run = 0; run < runs; ++run) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(run));
    for (auto& r : ratios) r = ratio_limit * rng.uniform01();
    out.per_run[static_cast<size_t>(run)] = min_eigenvalue(rescaled_matrix(ratios), tol);
  }
  out.min_over_runs = *std::min_element(out.per_run.begin(), out.per_run.end());
  return out;
}

QuadFormResult bdf3_quadratic_form(const TimeMesh& mesh, std::span<const double> xi) {
  const int n = static_cast<int>(xi.size()) + 2;
  if (n < 3 || n > mesh.n_steps())
    throw std::invalid_argument("bdf3_quadratic_form: xi length out of range");
  const auto x = [&](int k) { return xi[static_cast<size_t>(k - 3)]; };

  QuadFormResult out{0.0, 0.0};
  for (int k = 3; k <= n; ++k) {
    const auto d = d_coeffs(mesh.ratio(k), mesh.ratio(k - 1));
    const double kernels[3] = {d.d0, d.d1, d.d2};
    double inner = 0.0;
    for (int j = k; j >= 3 && j >= k - 2; --j) inner += kernels[k - j] * x(j);
    out.form_value += 2.0 * x(k) * mesh.step(k) * inner;
    out.lower_bound += mesh.step(k) * x(k) * x(k);
  }
  out.lower_bound /= 50.0;
  return out;
}

double doc_quadratic_form(const DocKernelTable& table, std::span<const double> xi) {
  const int n = static_cast<int>(xi.size()) + 2;
  if (n < 3 || n > table.n_max())
    throw std::invalid_argument("doc_quadratic_form: xi length out of range");
  const auto x = [&](int k) { return xi[static_cast<size_t>(k - 3)]; };

  double form = 0.0;
  for (int k = 3; k <= n; ++k) {
    double inner = 0.0;
    for (int j = 3; j <= k; ++j) inner += table.theta(k, k - j) * x(j);
    form += 2.0 * x(k) * table.mesh().step(k) * inner;
  }
  return form;
}

}  // namespace bdf3
