#include "bdf3/heat_solver.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bdf3/bdf3_kernels.hpp"
#include "bdf3/doc_kernels.hpp"

namespace bdf3 {

namespace {

std::string mode_name(int idx, int m) {
  const int k1 = SpectralField::wavenumber(idx / m, m);
  const int k2 = SpectralField::wavenumber(idx % m, m);
  return "(" + std::to_string(k1) + "," + std::to_string(k2) + ")";
}

}  // namespace

HeatSolver::HeatSolver(const SolverConfig& config, const TimeMesh& mesh)
    : cfg_(config), mesh_(mesh) {
  if (!(cfg_.eps > 0.0)) throw std::invalid_argument("HeatSolver: eps must be positive");
  const int m = cfg_.grid_size;
  if (m < 8 || (m & (m - 1)) != 0)
    throw std::invalid_argument("HeatSolver: grid size must be a power of two >= 8");

  ksq_.resize(static_cast<size_t>(m) * m);
  for (int p1 = 0; p1 < m; ++p1) {
    const double k1 = SpectralField::wavenumber(p1, m);
    for (int p2 = 0; p2 < m; ++p2) {
      const double k2 = SpectralField::wavenumber(p2, m);
      ksq_[static_cast<size_t>(p1) * m + p2] = k1 * k1 + k2 * k2;
    }
  }
  sinxy_.resize(static_cast<size_t>(m) * m);
  const double h = 2.0 * std::numbers::pi / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      sinxy_[static_cast<size_t>(i) * m + j] = std::sin(h * i) * std::sin(h * j);
}

std::vector<double> HeatSolver::exact_solution(double t) const {
  std::vector<double> out(sinxy_);
  const double amp = std::cos(t);
  for (auto& v : out) v *= amp;
  return out;
}

std::vector<double> HeatSolver::forcing(double t) const {
  // f = u_t - eps Lap(u) - kappa u for u = cos(t) sin(x) sin(y).
  std::vector<double> out(sinxy_);
  const double amp = -std::sin(t) + (2.0 * cfg_.eps - cfg_.kappa) * std::cos(t);
  for (auto& v : out) v *= amp;
  return out;
}

SpectralField HeatSolver::forcing_hat(double t) const {
  return SpectralField::from_physical(forcing(t), cfg_.grid_size);
}

HeatSolver::ForcingHat HeatSolver::forcing_provider() const {
  if (cfg_.forcing == ForcingKind::manufactured)
    return [this](double t) { return forcing_hat(t); };
  return [m = cfg_.grid_size](double) { return SpectralField(m); };
}

SpectralField HeatSolver::bdf3_step(const SpectralField& u_nm3, const SpectralField& u_nm2,
                                    const SpectralField& u_nm1, const SpectralField& f_hat,
                                    int n) const {
  if (n < 3 || n > mesh_.n_steps())
    throw std::invalid_argument("bdf3_step: 3 <= n <= N required");
  const auto d = d_coeffs(mesh_.ratio(n), mesh_.ratio(n - 1));
  const double tn = mesh_.step(n);
  const double tp = mesh_.step(n - 1);
  const double tpp = mesh_.step(n - 2);

  SpectralField out(cfg_.grid_size);
  auto dst = out.data();
  auto u1 = u_nm1.data();
  auto u2 = u_nm2.data();
  auto u3 = u_nm3.data();
  auto f = f_hat.data();
  for (size_t i = 0; i < dst.size(); ++i) {
    const double mult = d.d0 / tn + cfg_.eps * ksq_[i] - cfg_.kappa;
    if (!(mult > 0.0))
      throw std::runtime_error("bdf3_step: nonpositive multiplier at mode " +
                               mode_name(static_cast<int>(i), cfg_.grid_size));
    const Complex rhs = d.d0 / tn * u1[i] - d.d1 * (u1[i] - u2[i]) / tp -
                        d.d2 * (u2[i] - u3[i]) / tpp + f[i];
    dst[i] = rhs / mult;
  }
  return out;
}

std::pair<SpectralField, SpectralField> HeatSolver::sdirk3_start_impl(
    const SpectralField& u0, const ForcingHat& f) const {
  const double g = (3.0 + std::sqrt(3.0)) / 6.0;

  auto one_step = [&](const SpectralField& u, double t, double tau) {
    const SpectralField f1 = f(t + g * tau);
    const SpectralField f2 = f(t + (1.0 - g) * tau);
    SpectralField out(cfg_.grid_size);
    auto dst = out.data();
    auto src = u.data();
    auto f1d = f1.data();
    auto f2d = f2.data();
    for (size_t i = 0; i < dst.size(); ++i) {
      const double lambda = cfg_.kappa - cfg_.eps * ksq_[i];
      const double denom = 1.0 - tau * g * lambda;
      if (!(denom > 0.0))
        throw std::runtime_error("sdirk3_start: nonpositive stage multiplier at mode " +
                                 mode_name(static_cast<int>(i), cfg_.grid_size));
      const Complex k1 = (lambda * src[i] + f1d[i]) / denom;
      const Complex k2 = (lambda * (src[i] + tau * (1.0 - 2.0 * g) * k1) + f2d[i]) / denom;
      dst[i] = src[i] + 0.5 * tau * (k1 + k2);
    }
    return out;
  };

  SpectralField u1 = one_step(u0, mesh_.node(0), mesh_.step(1));
  SpectralField u2 = one_step(u1, mesh_.node(1), mesh_.step(2));
  return {std::move(u1), std::move(u2)};
}

std::pair<SpectralField, SpectralField> HeatSolver::bdf2_start_impl(
    const SpectralField& u0, const ForcingHat& f) const {
  const double t1 = mesh_.step(1);
  const double t2 = mesh_.step(2);

  // Trapezoidal step for u^1 (locally third order).
  const SpectralField f0 = f(mesh_.node(0));
  const SpectralField f1 = f(mesh_.node(1));
  SpectralField u1(cfg_.grid_size);
  {
    auto dst = u1.data();
    auto src = u0.data();
    auto f0d = f0.data();
    auto f1d = f1.data();
    for (size_t i = 0; i < dst.size(); ++i) {
      const double lambda = cfg_.kappa - cfg_.eps * ksq_[i];
      const double mult = 1.0 / t1 - 0.5 * lambda;
      if (!(mult > 0.0))
        throw std::runtime_error("bdf2_start: nonpositive multiplier at mode " +
                                 mode_name(static_cast<int>(i), cfg_.grid_size));
      dst[i] = ((1.0 / t1 + 0.5 * lambda) * src[i] + 0.5 * (f0d[i] + f1d[i])) / mult;
    }
  }

  // Variable-step two-level BDF step for u^2; its kernels are the y = 0
  // degeneration of the three-level coefficient functions.
  const auto b = d_coeffs(mesh_.ratio(2), 0.0);
  const SpectralField f2 = f(mesh_.node(2));
  SpectralField u2(cfg_.grid_size);
  {
    auto dst = u2.data();
    auto u1d = u1.data();
    auto u0d = u0.data();
    auto f2d = f2.data();
    for (size_t i = 0; i < dst.size(); ++i) {
      const double lambda = cfg_.kappa - cfg_.eps * ksq_[i];
      const double mult = b.d0 / t2 - lambda;
      if (!(mult > 0.0))
        throw std::runtime_error("bdf2_start: nonpositive multiplier at mode " +
                                 mode_name(static_cast<int>(i), cfg_.grid_size));
      dst[i] = (b.d0 / t2 * u1d[i] - b.d1 * (u1d[i] - u0d[i]) / t1 + f2d[i]) / mult;
    }
  }
  return {std::move(u1), std::move(u2)};
}

std::pair<SpectralField, SpectralField> HeatSolver::start(const SpectralField& u0,
                                                          const ForcingHat& f) const {
  return cfg_.starter == Starter::sdirk3 ? sdirk3_start_impl(u0, f)
                                         : bdf2_start_impl(u0, f);
}

std::pair<SpectralField, SpectralField> HeatSolver::sdirk3_start(
    const SpectralField& u0) const {
  return sdirk3_start_impl(u0, forcing_provider());
}

std::pair<SpectralField, SpectralField> HeatSolver::bdf2_start(
    const SpectralField& u0) const {
  return bdf2_start_impl(u0, forcing_provider());
}

double HeatSolver::error_norm(const SpectralField& u, double t) const {
  const SpectralField exact = SpectralField::from_physical(exact_solution(t), cfg_.grid_size);
  double sum = 0.0;
  auto a = u.data();
  auto b = exact.data();
  for (size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
  return 2.0 * std::numbers::pi * std::sqrt(sum);
}

double HeatSolver::energy(const SpectralField& u_n, const SpectralField& u_nm1,
                          const SpectralField& u_nm2, int n, EnergySample* parts) const {
  if (n < 2 || n > mesh_.n_steps() - 1)
    throw std::invalid_argument("energy: 2 <= n <= N-1 required");
  const double grad_term = cfg_.eps * u_n.grad_norm_sq();
  const double l2 = u_n.l2_norm();
  const double reaction_term = -cfg_.kappa * l2 * l2;

  const double tn = mesh_.step(n);
  const double tp = mesh_.step(n - 1);
  const double a = d_star(mesh_.ratio(n + 1), mesh_.ratio(n));
  const double b = std::sqrt(mesh_.ratio(n + 1) * mesh_.ratio(n)) *
                   d_coeffs(mesh_.ratio(n + 1), mesh_.ratio(n)).d2;

  SpectralField dv(cfg_.grid_size), dw(cfg_.grid_size);
  {
    auto d1 = dv.data();
    auto d2 = dw.data();
    auto un = u_n.data();
    auto u1 = u_nm1.data();
    auto u2 = u_nm2.data();
    for (size_t i = 0; i < d1.size(); ++i) {
      d1[i] = (un[i] - u1[i]) / tn;
      d2[i] = (u1[i] - u2[i]) / tp;
    }
  }
  const std::vector<double> v = dv.to_physical();
  const std::vector<double> w = dw.to_physical();
  const double c1 = kDgsGamma * std::sqrt(tn);
  const double c2 = std::sqrt(tp);
  double g_sum = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double s = c1 * v[i] - c2 * w[i];
    g_sum += a * tn * v[i] * v[i] + b * s * s;
  }
  const double h = 2.0 * std::numbers::pi / cfg_.grid_size;
  const double g_term = h * h * g_sum;

  if (parts) *parts = {n, grad_term + reaction_term + g_term, grad_term, reaction_term, g_term};
  return grad_term + reaction_term + g_term;
}

RunResult HeatSolver::integrate(const SpectralField& u0) const {
  const int n_steps = mesh_.n_steps();
  const bool manufactured = cfg_.forcing == ForcingKind::manufactured;
  const ForcingHat f = forcing_provider();

  if (cfg_.kappa > 0.0) {
    const auto sums = abs_sums(DocKernelTable(mesh_, n_steps));
    const double bound = 1.0 / (4.0 * sums.k3_hat * cfg_.kappa);
    if (mesh_.max_step() > bound)
      std::fprintf(stderr,
                   "HeatSolver: max step %.3e exceeds the reaction step bound %.3e\n",
                   mesh_.max_step(), bound);
  }

  RunResult res;
  if (manufactured) res.errors.assign(static_cast<size_t>(n_steps) + 1, 0.0);

  auto [u1, u2] = start(u0, f);
  if (manufactured) {
    res.errors[0] = error_norm(u0, mesh_.node(0));
    res.errors[1] = error_norm(u1, mesh_.node(1));
    res.errors[2] = error_norm(u2, mesh_.node(2));
  }
  if (cfg_.record_energy && n_steps - 1 >= 2) {
    EnergySample sample;
    energy(u2, u1, u0, 2, &sample);
    res.energy.push_back(sample);
  }

  SpectralField um3 = u0, um2 = std::move(u1), um1 = std::move(u2);
  for (int n = 3; n <= n_steps; ++n) {
    SpectralField un = bdf3_step(um3, um2, um1, f(mesh_.node(n)), n);
    if (manufactured) res.errors[static_cast<size_t>(n)] = error_norm(un, mesh_.node(n));
    if (cfg_.record_energy && n <= n_steps - 1) {
      EnergySample sample;
      energy(un, um1, um2, n, &sample);
      res.energy.push_back(sample);
    }
    um3 = std::move(um2);
    um2 = std::move(um1);
    um1 = std::move(un);
  }

  if (manufactured)
    for (int n = 1; n <= n_steps; ++n)
      res.e_max = std::max(res.e_max, res.errors[static_cast<size_t>(n)]);
  return res;
}

RunResult HeatSolver::run() const {
  return integrate(SpectralField::from_physical(exact_solution(0.0), cfg_.grid_size));
}

RunResult HeatSolver::run_from(const SpectralField& u0) const { return integrate(u0); }

double truncation_error_direct(const std::function<double(double)>& v,
                               const std::function<double(double)>& v_prime,
                               const TimeMesh& mesh, int j) {
  if (j < 3 || j > mesh.n_steps())
    throw std::invalid_argument("truncation_error_direct: 3 <= j <= N required");
  std::vector<double> vals(static_cast<size_t>(j) + 1);
  for (int k = 0; k <= j; ++k) vals[static_cast<size_t>(k)] = v(mesh.node(k));
  return bdf3_apply(mesh, vals, j) - v_prime(mesh.node(j));
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double l = a + p * h;
    const double r = l + h;
    sum += (h / 6.0) * (f(l) + 4.0 * f(0.5 * (l + r)) + f(r));
  }
  return sum;
}

}  // namespace

double truncation_error_integral(const std::function<double(double)>& v4,
                                 const TimeMesh& mesh, int j, int panels_per_interval) {
  if (j < 3 || j > mesh.n_steps())
    throw std::invalid_argument("truncation_error_integral: 3 <= j <= N required");
  if (panels_per_interval < 1)
    throw std::invalid_argument("truncation_error_integral: panels >= 1 required");
  const auto d = d_coeffs(mesh.ratio(j), mesh.ratio(j - 1));
  const double rj = mesh.ratio(j);
  const double rjm = mesh.ratio(j - 1);
  const double t0 = mesh.node(j - 3), t1 = mesh.node(j - 2), t2 = mesh.node(j - 1),
               t3 = mesh.node(j);
  const auto cube = [](double x) { return x * x * x; };

  const auto k0 = [&](double t) {
    return (d.d0 - rj * d.d1) * cube(t2 - t) + rj * (d.d1 - rjm * d.d2) * cube(t1 - t) +
           rj * rjm * d.d2 * cube(t0 - t);
  };
  const auto k1 = [&](double t) {
    return (d.d1 - rjm * d.d2) * cube(t1 - t) + rjm * d.d2 * cube(t0 - t);
  };
  const auto k2 = [&](double t) { return d.d2 * cube(t0 - t); };

  const int p = panels_per_interval;
  double zeta = 0.0;
  zeta += simpson([&](double t) { return k0(t) * v4(t); }, t2, t3, p) / (6.0 * mesh.step(j));
  zeta += simpson([&](double t) { return k1(t) * v4(t); }, t1, t2, p) / (6.0 * mesh.step(j - 1));
  zeta += simpson([&](double t) { return k2(t) * v4(t); }, t0, t1, p) / (6.0 * mesh.step(j - 2));
  return zeta;
}

}  // namespace bdf3
