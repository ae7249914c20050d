#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace bdf3 {

struct RatioStats {
  double r_max = 1.0;
  int count_ge = 0;      // #{k : r_k >= threshold}
  double gamma_n = 0.0;  // sum_{k=3}^{N} |r_k - r_{k-1}|
};

// Variable time grid 0 = t_0 < t_1 < ... < t_N = T with step sizes
// tau_k = t_k - t_{k-1} (1 <= k <= N) and adjacent step ratios
// r_k = tau_k / tau_{k-1} (2 <= k <= N). Meshes with fewer than 4 steps are
// rejected since the three-step formula has no admissible level below n = 3.
// Instances are immutable after construction and safe to share across threads.
class TimeMesh {
 public:
  static TimeMesh uniform(double horizon, int n_steps);

  // Steps alternate {tau_1, mu*tau_1, tau_1, mu*tau_1, ...} with
  // tau_1 = 2T/(N(1+mu)); requires an even step count.
  static TimeMesh periodic_ratio(double horizon, int n_steps, double mu);

  // tau_k = T * eps_k / sum(eps) with eps_k i.i.d. uniform on (0,1) from the
  // seeded generator; bitwise reproducible for a fixed (T, N, seed).
  static TimeMesh random(double horizon, int n_steps, std::uint64_t seed);

  // Steps realizing the prescribed ratios r_2..r_N, rescaled to the horizon.
  static TimeMesh from_ratios(double horizon, std::span<const double> ratios);

  // Ratios drawn uniformly from (r_lo, r_hi); with r_hi below the step-ratio
  // limit this yields the "admissible random" grids of the stability tests.
  // The log-ratio walk drifts downward, so long meshes end in extremely small
  // steps; prefer random_ratio_log for n beyond ~60.
  static TimeMesh random_ratio(double horizon, int n_steps, std::uint64_t seed,
                               double r_lo, double r_hi);

  // Ratios drawn log-uniformly from (r_lo, r_hi). A log-symmetric interval
  // (r_lo = 1/r_hi) makes the step walk drift-free, keeping long admissible
  // meshes representable in double precision.
  static TimeMesh random_ratio_log(double horizon, int n_steps, std::uint64_t seed,
                                   double r_lo, double r_hi);

  // Mesh over the given steps as-is; the horizon is their sum.
  static TimeMesh from_steps(std::span<const double> steps);

  int n_steps() const { return static_cast<int>(steps_.size()); }
  double horizon() const { return horizon_; }
  double node(int k) const { return nodes_[static_cast<size_t>(k)]; }
  double step(int k) const { return steps_[static_cast<size_t>(k - 1)]; }
  double ratio(int k) const { return ratios_[static_cast<size_t>(k - 2)]; }
  double max_step() const;

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> steps() const { return steps_; }
  std::span<const double> ratios() const { return ratios_; }

  RatioStats ratio_stats(double threshold) const;

  // CSV dump, header `k,t_k,tau_k,r_k` (tau empty for k = 0, r empty for k <= 1).
  void dump_csv(std::ostream& out) const;

 private:
  TimeMesh(double horizon, std::vector<double> steps);

  double horizon_;
  std::vector<double> nodes_;   // N+1 entries
  std::vector<double> steps_;   // N entries, steps_[k-1] = tau_k
  std::vector<double> ratios_;  // N-1 entries, ratios_[k-2] = r_k
};

}  // namespace bdf3
