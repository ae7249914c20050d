#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bdf3/time_mesh.hpp"

namespace bdf3 {

struct DCoeffs {
  double d0, d1, d2;
};

// Kernel coefficient functions of the two trailing step ratios, x = r_n and
// y = r_{n-1}. d0 > 0, d1 < 0, d2 > 0 for positive arguments and the three
// always sum to 1. Negative arguments are rejected.
DCoeffs d_coeffs(double x, double y);

// Three-level backward-difference derivative at level n >= 3,
//   D3 v^n = d0 * dv^n + d1 * dv^{n-1} + d2 * dv^{n-2},
// with dv^j = (v^j - v^{j-1}) / tau_j; `values` holds v^0..v^m, m >= n.
double bdf3_apply(const TimeMesh& mesh, std::span<const double> values, int n);

// Residuals of the three kernel consistency identities:
//   d0 + d1 + d2 - 1,
//   d0 + (1+2x)/x d1 + (1+2y+2xy)/(xy) d2,
//   d0 + (1+3x+3x^2)/x^2 d1 + (1+3y+3xy+3y^2+6xy^2+3x^2y^2)/(x^2 y^2) d2.
// Summed with Neumaier compensation; the last identity cancels hard near 0.
struct ConsistencyResiduals {
  double first, second, third;
};
ConsistencyResiduals consistency_identities(double x, double y);

// Defining function of the step-ratio limit: 10/(7(R+1)) - R^2 sqrt(R)/(R^2+R+1),
// equivalent to d1(R,0) + (7/10) sqrt(R) d2(R,R) up to a factor -1/R.
double re_defect(double r);

// Unique positive root of re_defect on [1,2], located by bisection to `tol`.
double compute_re(double tol);

// Cached root at tolerance 1e-12; every ratio-admissibility bound in the
// project compares against this value, never against a rounded literal.
double re_limit();

// Solves the coupled closure gamma = -d1(R,0)/(sqrt(R) d2(R,R)) inserted into
// the p-equation at constant ratio R; throws if no sign change on [1,2].
struct GammaBarResult {
  double gamma_bar, r_bar;
};
GammaBarResult compute_gamma_bar(double tol);

// Fixed decomposition parameter of the gradient structure.
inline constexpr double kDgsGamma = 7.0 / 10.0;

// Gradient-structure coefficient functions.
double d_star(double x, double y);
double p_fun(double x, double y, double z);
double q_fun(double x, double y, double z);

// Decomposition coefficients at step n: a_n, b_n, c_n and the lookahead pair
// p_{n+1}, q_{n+1}. Requires 3 <= n <= N-1 (r_{n+1} must exist).
struct DgsCoefficients {
  double a, b, c, p, q;
  static constexpr double gamma = kDgsGamma;
};
DgsCoefficients dgs_coefficients(const TimeMesh& mesh, int n);

// Lyapunov functional G[v_n, v_{n-1}] at step n. Defined for 2 <= n <= N-1;
// the n = 2 case is what the modified energy at the first usable level needs.
double g_functional(const TimeMesh& mesh, int n, double v_n, double v_prev);

// Remainder functional F[v_n, v_{n-1}, v_{n-2}] at step n, 3 <= n <= N-1;
// satisfies F >= tau_n v_n^2 / 50 for ratios inside the admissible range.
double f_functional(const TimeMesh& mesh, int n, double v_n, double v_prev,
                    double v_prev2);

// |2 v_n tau_n sum_{j>=3} d^{(n)}_{n-j} v_j - (G_n - G_{n-1} + F_n)|.
// `values` holds v_0..v_m; the sum truncates below j = 3, so at n = 3, 4 the
// identity requires v_1 = v_2 = 0 (the caller's padding choice).
double dgs_residual(const TimeMesh& mesh, std::span<const double> values, int n);

// Auxiliary positivity functions on (0, sqrt(Re))^3, evaluated from their
// expanded rational forms; they bridge to q and p via
//   q(x^2,y^2,z^2) = y^3 eta(x,y,z),   p(x^2,y^2,z^2) = (1+y^2) zeta(x,y,z).
double eta(double x, double y, double z);
double zeta(double x, double y, double z);

struct ScanEntry {
  std::string check;  // q_pos | p_bound | eta_pos | zeta_bound | bridge_q | bridge_p
  double min_value;   // minimum found (bridge rows: max residual)
  double argmin[3];
  long violations;
};
struct LemmaScanReport {
  int grid;
  std::vector<ScanEntry> entries;
  double bridge_q_residual;
  double bridge_p_residual;
  bool all_passed() const;
};

// Grid scan of the positivity bounds q > 0, p > 1/50 over (0,Re)^3 and
// eta > 0, zeta > 1/50 over (0,sqrt(Re))^3, endpoints excluded with 1e-6 as
// the smallest coordinate, plus the two bridging identities at every point.
// A violated bound lands in the report; nothing throws.
LemmaScanReport scan_lemma_positivity(int grid_points_per_axis);

struct MonotonicityReport {
  long samples;
  long violations;
  double max_d2_seen;
};

// Random check that d0 and d2 increase and d1 decreases in each argument on
// (0, Re); equal arguments are accepted as ties.
MonotonicityReport monotonicity_check(long samples, std::uint64_t seed);

}  // namespace bdf3
