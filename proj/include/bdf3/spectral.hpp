#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bdf3 {

using Complex = std::complex<double>;

namespace fft {

// In-place radix-2 complex FFT; sign = -1 forward, +1 inverse (unscaled).
// Length must be a power of two.
void transform_pow2(std::span<Complex> data, int sign);

// Row-column 2D transform of a row-major m x m buffer.
void transform_2d(std::span<Complex> data, int m, int sign);

}  // namespace fft

// Real periodic field on (0,2pi)^2 sampled on an M x M grid (x_i = 2pi i/M),
// held as Fourier coefficients with the coefficient normalization
//   u_hat(k) = (1/M^2) sum_ij u_ij exp(-i k.x_ij),
// so u_ij = sum_k u_hat(k) exp(i k.x_ij) and Parseval reads
//   ||u||^2_{L^2} = (2pi)^2 sum_k |u_hat(k)|^2,
// matching the grid quadrature (2pi/M)^2 sum u_ij^2 exactly. Wavenumbers run
// over -M/2 <= k < M/2; storage index p maps to k = p for p < M/2, else p - M.
class SpectralField {
 public:
  explicit SpectralField(int grid_size);
  static SpectralField from_physical(std::span<const double> values, int grid_size);

  int grid_size() const { return m_; }
  size_t size() const { return hat_.size(); }

  std::vector<double> to_physical() const;
  double max_physical_imag() const;

  static int wavenumber(int index, int m) { return index < m / 2 ? index : index - m; }

  Complex coeff(int k1, int k2) const;
  void set_coeff(int k1, int k2, Complex value);

  // Averages each coefficient with the conjugate of its reflection, projecting
  // onto the space of real physical fields.
  void enforce_hermitian();

  double l2_norm() const;       // 2pi sqrt(sum |u_hat|^2)
  double grad_norm_sq() const;  // (2pi)^2 sum |k|^2 |u_hat|^2

  std::span<Complex> data() { return hat_; }
  std::span<const Complex> data() const { return hat_; }

 private:
  int m_;
  std::vector<Complex> hat_;
};

// (2pi/M) sqrt(sum v^2): the trapezoidal L2 norm on the periodic grid.
double grid_l2_norm(std::span<const double> values, int m);

}  // namespace bdf3
