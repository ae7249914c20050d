#include "bdf3/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "bdf3/rng.hpp"

namespace bdf3 {

TimeMesh::TimeMesh(double horizon, std::vector<double> steps)
    : horizon_(horizon), steps_(std::move(steps)) {
  const int n = static_cast<int>(steps_.size());
  if (horizon <= 0.0) throw std::invalid_argument("TimeMesh: horizon must be positive");
  if (n < 4) throw std::invalid_argument("TimeMesh: at least 4 steps required");

  nodes_.resize(static_cast<size_t>(n) + 1);
  nodes_[0] = 0.0;
  for (int k = 1; k <= n; ++k) {
    if (!(steps_[static_cast<size_t>(k - 1)] > 0.0))
      throw std::invalid_argument("TimeMesh: step sizes must be positive");
    nodes_[static_cast<size_t>(k)] = nodes_[static_cast<size_t>(k - 1)] + steps_[static_cast<size_t>(k - 1)];
  }
  if (std::abs(nodes_.back() - horizon) > 1e-12 * horizon)
    throw std::invalid_argument("TimeMesh: steps do not sum to the horizon");
  nodes_.back() = horizon;

  ratios_.resize(static_cast<size_t>(n - 1));
  for (int k = 2; k <= n; ++k)
    ratios_[static_cast<size_t>(k - 2)] = steps_[static_cast<size_t>(k - 1)] / steps_[static_cast<size_t>(k - 2)];
}

TimeMesh TimeMesh::uniform(double horizon, int n_steps) {
  if (n_steps < 4) throw std::invalid_argument("uniform: N >= 4 required");
  std::vector<double> steps(static_cast<size_t>(n_steps), horizon / n_steps);
  return TimeMesh(horizon, std::move(steps));
}

TimeMesh TimeMesh::periodic_ratio(double horizon, int n_steps, double mu) {
  if (n_steps < 4 || n_steps % 2 != 0)
    throw std::invalid_argument("periodic_ratio: even N >= 4 required");
  if (!(mu > 0.0)) throw std::invalid_argument("periodic_ratio: mu must be positive");
  const double tau1 = 2.0 * horizon / (n_steps * (1.0 + mu));
  std::vector<double> steps(static_cast<size_t>(n_steps));
  for (int k = 1; k <= n_steps; ++k)
    steps[static_cast<size_t>(k - 1)] = (k % 2 == 1) ? tau1 : mu * tau1;
  return TimeMesh(horizon, std::move(steps));
}

TimeMesh TimeMesh::random(double horizon, int n_steps, std::uint64_t seed) {
  if (n_steps < 4) throw std::invalid_argument("random: N >= 4 required");
  SplitMix64 rng(seed);
  std::vector<double> eps(static_cast<size_t>(n_steps));
  double sum = 0.0;
  for (auto& e : eps) {
    e = rng.uniform01();
    sum += e;
  }
  for (auto& e : eps) e = horizon * e / sum;
  return TimeMesh(horizon, std::move(eps));
}

TimeMesh TimeMesh::from_ratios(double horizon, std::span<const double> ratios) {
  if (ratios.size() < 3) throw std::invalid_argument("from_ratios: N >= 4 required");
  std::vector<double> steps;
  steps.reserve(ratios.size() + 1);
  double cur = 1.0;
  steps.push_back(cur);
  for (double r : ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("from_ratios: ratios must be positive");
    cur *= r;
    // Exact power-of-two rescale keeps the running product in range without
    // perturbing any adjacent ratio.
    if (cur > 1e250 || cur < 1e-250) {
      const int scale = (cur > 1.0) ? -512 : 512;
      for (auto& s : steps) s = std::ldexp(s, scale);
      cur = std::ldexp(cur, scale);
    }
    steps.push_back(cur);
  }
  double sum = 0.0;
  for (double s : steps) sum += s;
  for (auto& s : steps) s = horizon * s / sum;
  return TimeMesh(horizon, std::move(steps));
}

TimeMesh TimeMesh::random_ratio(double horizon, int n_steps, std::uint64_t seed,
                                double r_lo, double r_hi) {
  if (n_steps < 4) throw std::invalid_argument("random_ratio: N >= 4 required");
  if (!(0.0 < r_lo && r_lo < r_hi))
    throw std::invalid_argument("random_ratio: need 0 < r_lo < r_hi");
  SplitMix64 rng(seed);
  std::vector<double> ratios(static_cast<size_t>(n_steps - 1));
  for (auto& r : ratios) r = rng.uniform(r_lo, r_hi);
  return from_ratios(horizon, ratios);
}

TimeMesh TimeMesh::random_ratio_log(double horizon, int n_steps, std::uint64_t seed,
                                    double r_lo, double r_hi) {
  if (n_steps < 4) throw std::invalid_argument("random_ratio_log: N >= 4 required");
  if (!(0.0 < r_lo && r_lo < r_hi))
    throw std::invalid_argument("random_ratio_log: need 0 < r_lo < r_hi");
  SplitMix64 rng(seed);
  std::vector<double> ratios(static_cast<size_t>(n_steps - 1));
  const double lo = std::log(r_lo), hi = std::log(r_hi);
  for (auto& r : ratios) r = std::exp(rng.uniform(lo, hi));
  return from_ratios(horizon, ratios);
}

TimeMesh TimeMesh::from_steps(std::span<const double> steps) {
  double sum = 0.0;
  for (double s : steps) sum += s;
  return TimeMesh(sum, std::vector<double>(steps.begin(), steps.end()));
}

double TimeMesh::max_step() const {
  return *std::max_element(steps_.begin(), steps_.end());
}

RatioStats TimeMesh::ratio_stats(double threshold) const {
  RatioStats stats;
  stats.r_max = *std::max_element(ratios_.begin(), ratios_.end());
  for (double r : ratios_)
    if (r >= threshold) ++stats.count_ge;
  for (size_t i = 1; i < ratios_.size(); ++i)
    stats.gamma_n += std::abs(ratios_[i] - ratios_[i - 1]);
  return stats;
}

void TimeMesh::dump_csv(std::ostream& out) const {
  out << "k,t_k,tau_k,r_k\n";
  char buf[96];
  for (int k = 0; k <= n_steps(); ++k) {
    if (k == 0) {
      std::snprintf(buf, sizeof buf, "0,%.17g,,\n", node(0));
    } else if (k == 1) {
      std::snprintf(buf, sizeof buf, "1,%.17g,%.17g,\n", node(1), step(1));
    } else {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", k, node(k), step(k), ratio(k));
    }
    out << buf;
  }
}

}  // namespace bdf3
