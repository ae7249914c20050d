#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "bdf3/spectral.hpp"
#include "bdf3/time_mesh.hpp"

namespace bdf3 {

enum class Starter { sdirk3, bdf2 };
enum class ForcingKind { manufactured, none };

struct SolverConfig {
  double eps = 0.1;    // diffusivity, > 0
  double kappa = 0.0;  // constant reaction coefficient
  Starter starter = Starter::sdirk3;
  int grid_size = 32;  // power of two >= 8
  ForcingKind forcing = ForcingKind::manufactured;
  bool record_energy = false;
};

struct EnergySample {
  int n;
  double total, grad_term, reaction_term, g_term;
};
using EnergyTrace = std::vector<EnergySample>;

struct RunResult {
  std::vector<double> errors;  // ||u(t_n) - u^n|| per node (manufactured runs)
  double e_max = 0.0;          // max over 1 <= n <= N
  EnergyTrace energy;          // samples for 2 <= n <= N-1 when recorded
};

// Pseudo-spectral solver for u_t - eps Lap(u) = kappa u + f on (0,2pi)^2 with
// periodic boundary conditions, stepped by the variable three-level formula
// after one of two starting schemes. The manufactured reference solution is
// u = cos(t) sin(x) sin(y) with f chosen to match; spatial error is zero for
// this data, so the recorded error is purely temporal.
class HeatSolver {
 public:
  HeatSolver(const SolverConfig& config, const TimeMesh& mesh);

  const TimeMesh& mesh() const { return mesh_; }
  const SolverConfig& config() const { return cfg_; }

  std::vector<double> exact_solution(double t) const;  // grid samples
  std::vector<double> forcing(double t) const;         // grid samples

  // One implicit step: solves (d0/tau_n + eps|k|^2 - kappa) u_hat = rhs per
  // mode; throws naming the offending mode if a multiplier is nonpositive.
  SpectralField bdf3_step(const SpectralField& u_nm3, const SpectralField& u_nm2,
                          const SpectralField& u_nm1, const SpectralField& f_hat,
                          int n) const;

  // Two-stage third-order SDIRK starter: diagonal (3+sqrt(3))/6, second row
  // (1-2g, g), weights (1/2, 1/2), applied per Fourier mode.
  std::pair<SpectralField, SpectralField> sdirk3_start(const SpectralField& u0) const;

  // u1 by one trapezoidal step, u2 by one variable-step two-level BDF step.
  std::pair<SpectralField, SpectralField> bdf2_start(const SpectralField& u0) const;

  RunResult run() const;  // starts from the manufactured initial data
  RunResult run_from(const SpectralField& u0) const;

  // Modified discrete energy at level n (2 <= n <= N-1):
  //   E^n = eps ||grad u^n||^2 + <-kappa u^n, u^n> + <1, G[du^n, du^{n-1}]>,
  // gradient/reaction terms from the spectrum, the G term evaluated pointwise
  // on the physical grid and quadratured with the periodic trapezoidal rule.
  double energy(const SpectralField& u_n, const SpectralField& u_nm1,
                const SpectralField& u_nm2, int n, EnergySample* parts = nullptr) const;

  double error_norm(const SpectralField& u, double t) const;

 private:
  using ForcingHat = std::function<SpectralField(double)>;

  SpectralField forcing_hat(double t) const;
  ForcingHat forcing_provider() const;
  std::pair<SpectralField, SpectralField> start(const SpectralField& u0,
                                                const ForcingHat& f) const;
  std::pair<SpectralField, SpectralField> sdirk3_start_impl(const SpectralField& u0,
                                                            const ForcingHat& f) const;
  std::pair<SpectralField, SpectralField> bdf2_start_impl(const SpectralField& u0,
                                                          const ForcingHat& f) const;
  RunResult integrate(const SpectralField& u0) const;

  SolverConfig cfg_;
  TimeMesh mesh_;
  std::vector<double> ksq_;    // |k|^2 per flat spectral index
  std::vector<double> sinxy_;  // sin(x) sin(y) on the grid
};

// Truncation error of the three-level derivative for a scalar function:
// direct route D3 v(t_j) - v'(t_j) from sampled values.
double truncation_error_direct(const std::function<double(double)>& v,
                               const std::function<double(double)>& v_prime,
                               const TimeMesh& mesh, int j);

// Integral-kernel route: sum of the three cubic-kernel integrals against the
// fourth derivative, each over one trailing subinterval, composite Simpson
// with `panels_per_interval` panels (exact whenever the integrand is cubic).
double truncation_error_integral(const std::function<double(double)>& v4,
                                 const TimeMesh& mesh, int j,
                                 int panels_per_interval = 64);

}  // namespace bdf3
