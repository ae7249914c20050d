#include "bdf3/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bdf3 {

namespace fft {

namespace {
bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

void transform_pow2(std::span<Complex> data, int sign) {
  const size_t n = data.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
  if (n == 1) return;

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddles from std::polar per index rather than by repeated multiplication,
  // which keeps the round-trip error near machine precision.
  std::vector<Complex> w(n / 2);
  const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (size_t k = 0; k < n / 2; ++k) w[k] = std::polar(1.0, base * static_cast<double>(k));

  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t stride = n / len;
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < len / 2; ++k) {
        const Complex v = data[i + k + len / 2] * w[k * stride];
        const Complex u = data[i + k];
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
      }
    }
  }
}

void transform_2d(std::span<Complex> data, int m, int sign) {
  if (m < 1 || data.size() != static_cast<size_t>(m) * static_cast<size_t>(m))
    throw std::invalid_argument("fft: bad 2d buffer size");
  for (int row = 0; row < m; ++row)
    transform_pow2(data.subspan(static_cast<size_t>(row) * m, static_cast<size_t>(m)), sign);
  std::vector<Complex> col(static_cast<size_t>(m));
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) col[static_cast<size_t>(r)] = data[static_cast<size_t>(r) * m + c];
    transform_pow2(col, sign);
    for (int r = 0; r < m; ++r) data[static_cast<size_t>(r) * m + c] = col[static_cast<size_t>(r)];
  }
}

}  // namespace fft

SpectralField::SpectralField(int grid_size) : m_(grid_size) {
  if (m_ < 2 || (m_ & (m_ - 1)) != 0)
    throw std::invalid_argument("SpectralField: grid size must be a power of two");
  hat_.assign(static_cast<size_t>(m_) * m_, Complex(0.0, 0.0));
}

SpectralField SpectralField::from_physical(std::span<const double> values, int grid_size) {
  SpectralField f(grid_size);
  if (values.size() != f.hat_.size())
    throw std::invalid_argument("from_physical: value count != M*M");
  for (size_t i = 0; i < values.size(); ++i) f.hat_[i] = Complex(values[i], 0.0);
  fft::transform_2d(f.hat_, grid_size, -1);
  const double scale = 1.0 / (static_cast<double>(grid_size) * grid_size);
  for (auto& c : f.hat_) c *= scale;
  return f;
}

std::vector<double> SpectralField::to_physical() const {
  std::vector<Complex> buf(hat_);
  fft::transform_2d(buf, m_, +1);
  std::vector<double> out(buf.size());
  for (size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return out;
}

double SpectralField::max_physical_imag() const {
  std::vector<Complex> buf(hat_);
  fft::transform_2d(buf, m_, +1);
  double worst = 0.0;
  for (const auto& c : buf) worst = std::max(worst, std::abs(c.imag()));
  return worst;
}

Complex SpectralField::coeff(int k1, int k2) const {
  const int p1 = k1 < 0 ? k1 + m_ : k1;
  const int p2 = k2 < 0 ? k2 + m_ : k2;
  return hat_[static_cast<size_t>(p1) * m_ + p2];
}

void SpectralField::set_coeff(int k1, int k2, Complex value) {
  const int p1 = k1 < 0 ? k1 + m_ : k1;
  const int p2 = k2 < 0 ? k2 + m_ : k2;
  hat_[static_cast<size_t>(p1) * m_ + p2] = value;
}

void SpectralField::enforce_hermitian() {
  for (int p1 = 0; p1 < m_; ++p1) {
    for (int p2 = 0; p2 < m_; ++p2) {
      const int q1 = (m_ - p1) % m_;
      const int q2 = (m_ - p2) % m_;
      if (p1 * m_ + p2 > q1 * m_ + q2) continue;
      const Complex a = hat_[static_cast<size_t>(p1) * m_ + p2];
      const Complex b = hat_[static_cast<size_t>(q1) * m_ + q2];
      const Complex avg = 0.5 * (a + std::conj(b));
      hat_[static_cast<size_t>(p1) * m_ + p2] = avg;
      hat_[static_cast<size_t>(q1) * m_ + q2] = std::conj(avg);
    }
  }
}

double SpectralField::l2_norm() const {
  double sum = 0.0;
  for (const auto& c : hat_) sum += std::norm(c);
  return 2.0 * std::numbers::pi * std::sqrt(sum);
}

double SpectralField::grad_norm_sq() const {
  const double two_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  double sum = 0.0;
  for (int p1 = 0; p1 < m_; ++p1) {
    const double k1 = wavenumber(p1, m_);
    for (int p2 = 0; p2 < m_; ++p2) {
      const double k2 = wavenumber(p2, m_);
      sum += (k1 * k1 + k2 * k2) * std::norm(hat_[static_cast<size_t>(p1) * m_ + p2]);
    }
  }
  return two_pi_sq * sum;
}

double grid_l2_norm(std::span<const double> values, int m) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return 2.0 * std::numbers::pi / m * std::sqrt(sum);
}

}  // namespace bdf3
