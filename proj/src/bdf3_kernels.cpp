#include "bdf3/bdf3_kernels.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "bdf3/rng.hpp"

namespace bdf3 {

namespace {

// Neumaier-compensated sum.
double comp_sum(std::initializer_list<double> terms) {
  double sum = 0.0, c = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t))
      c += (sum - s) + t;
    else
      c += (t - s) + sum;
    sum = s;
  }
  return sum + c;
}

double bisect(double lo, double hi, double tol, double (*f)(double)) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((flo > 0.0) == (fmid > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DCoeffs d_coeffs(double x, double y) {
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("d_coeffs: negative ratio");
  const double s = 1.0 + y + x * y;
  const double d0 = (1.0 + 2.0 * x) / (1.0 + x) + x * y / s;
  const double d2 = x * y * y / s * (1.0 + x) / (1.0 + y);
  const double d1 = -x / (1.0 + x) - x * y / s - d2;
  return {d0, d1, d2};
}

double bdf3_apply(const TimeMesh& mesh, std::span<const double> values, int n) {
  if (n < 3) throw std::invalid_argument("bdf3_apply: n >= 3 required");
  if (n > mesh.n_steps()) throw std::invalid_argument("bdf3_apply: n out of range");
  if (static_cast<size_t>(n) >= values.size())
    throw std::invalid_argument("bdf3_apply: values too short");
  const auto d = d_coeffs(mesh.ratio(n), mesh.ratio(n - 1));
  const auto dv = [&](int j) {
    return (values[static_cast<size_t>(j)] - values[static_cast<size_t>(j - 1)]) / mesh.step(j);
  };
  return d.d0 * dv(n) + d.d1 * dv(n - 1) + d.d2 * dv(n - 2);
}

ConsistencyResiduals consistency_identities(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::invalid_argument("consistency_identities: positive ratios required");
  const auto d = d_coeffs(x, y);
  const double first = comp_sum({d.d0, d.d1, d.d2, -1.0});
  const double c1 = (1.0 + 2.0 * x) / x;
  const double c2 = (1.0 + 2.0 * y + 2.0 * x * y) / (x * y);
  const double second = comp_sum({d.d0, c1 * d.d1, c2 * d.d2});
  const double e1 = (1.0 + 3.0 * x + 3.0 * x * x) / (x * x);
  const double e2 =
      (1.0 + 3.0 * y + 3.0 * x * y + 3.0 * y * y + 6.0 * x * y * y + 3.0 * x * x * y * y) /
      (x * x * y * y);
  const double third = comp_sum({d.d0, e1 * d.d1, e2 * d.d2});
  return {first, second, third};
}

double re_defect(double r) {
  return 10.0 / (7.0 * (r + 1.0)) - r * r * std::sqrt(r) / (r * r + r + 1.0);
}

double compute_re(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("compute_re: tol must be positive");
  return bisect(1.0, 2.0, tol, re_defect);
}

double re_limit() {
  static const double value = compute_re(1e-12);
  return value;
}

namespace {

double gamma_bar_of(double r) {
  const double d1_r0 = d_coeffs(r, 0.0).d1;
  const double d2_rr = d_coeffs(r, r).d2;
  return -d1_r0 / (std::sqrt(r) * d2_rr);
}

// p-equation at constant ratio r with gamma = gamma_bar(r).
double gamma_bar_defect(double r) {
  const double g = gamma_bar_of(r);
  const auto d = d_coeffs(r, r);
  const double sd1 = std::sqrt(r) * d.d1;
  const double rd2 = r * d.d2;
  return 2.0 * d.d0 - rd2 + g * sd1 + g * g * rd2 + sd1 / g + rd2;
}

}  // namespace

GammaBarResult compute_gamma_bar(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("compute_gamma_bar: tol must be positive");
  if (gamma_bar_defect(1.0) * gamma_bar_defect(2.0) > 0.0)
    throw std::runtime_error("compute_gamma_bar: no sign change on [1,2]");
  const double r_bar = bisect(1.0, 2.0, tol, gamma_bar_defect);
  return {gamma_bar_of(r_bar), r_bar};
}

double d_star(double x, double y) {
  const auto d = d_coeffs(x, y);
  return -(10.0 / 7.0) * std::sqrt(x) * d.d1 - std::sqrt(x * y) * d.d2;
}

double p_fun(double x, double y, double z) {
  const auto dyz = d_coeffs(y, z);
  return 2.0 * dyz.d0 - std::sqrt(y * z) * dyz.d2 - 0.49 * d_star(y, z) - d_star(x, y);
}

double q_fun(double x, double y, double z) {
  return d_star(y, z) - std::sqrt(x * y) * d_coeffs(x, y).d2;
}

DgsCoefficients dgs_coefficients(const TimeMesh& mesh, int n) {
  if (n < 3 || n > mesh.n_steps() - 1)
    throw std::invalid_argument("dgs_coefficients: 3 <= n <= N-1 required");
  const double rn1 = mesh.ratio(n + 1);
  const double rn = mesh.ratio(n);
  const double rp = mesh.ratio(n - 1);
  DgsCoefficients c;
  c.a = d_star(rn, rp);
  c.b = c.c = std::sqrt(rn * rp) * d_coeffs(rn, rp).d2;
  c.p = p_fun(rn1, rn, rp);
  c.q = q_fun(rn1, rn, rp);
  return c;
}

double g_functional(const TimeMesh& mesh, int n, double v_n, double v_prev) {
  if (n < 2 || n > mesh.n_steps() - 1)
    throw std::invalid_argument("g_functional: 2 <= n <= N-1 required");
  const double rn1 = mesh.ratio(n + 1);
  const double rn = mesh.ratio(n);
  const double tn = mesh.step(n);
  const double tp = mesh.step(n - 1);
  const double w = kDgsGamma * std::sqrt(tn) * v_n - std::sqrt(tp) * v_prev;
  return d_star(rn1, rn) * tn * v_n * v_n +
         std::sqrt(rn1 * rn) * d_coeffs(rn1, rn).d2 * w * w;
}

double f_functional(const TimeMesh& mesh, int n, double v_n, double v_prev,
                    double v_prev2) {
  if (n < 3 || n > mesh.n_steps() - 1)
    throw std::invalid_argument("f_functional: 3 <= n <= N-1 required");
  const double rn1 = mesh.ratio(n + 1);
  const double rn = mesh.ratio(n);
  const double rp = mesh.ratio(n - 1);
  const double tn = mesh.step(n);
  const double tp = mesh.step(n - 1);
  const double tpp = mesh.step(n - 2);
  const double w1 = kDgsGamma * std::sqrt(tn) * v_n - std::sqrt(tp) * v_prev;
  const double w2 =
      std::sqrt(tn) * v_n - kDgsGamma * std::sqrt(tp) * v_prev + std::sqrt(tpp) * v_prev2;
  return p_fun(rn1, rn, rp) * tn * v_n * v_n + q_fun(rn1, rn, rp) * w1 * w1 +
         std::sqrt(rn * rp) * d_coeffs(rn, rp).d2 * w2 * w2;
}

double dgs_residual(const TimeMesh& mesh, std::span<const double> values, int n) {
  if (n < 3 || n > mesh.n_steps() - 1)
    throw std::invalid_argument("dgs_residual: 3 <= n <= N-1 required");
  if (static_cast<size_t>(n) >= values.size())
    throw std::invalid_argument("dgs_residual: values too short");
  const auto d = d_coeffs(mesh.ratio(n), mesh.ratio(n - 1));
  const double kernels[3] = {d.d0, d.d1, d.d2};
  double conv = 0.0;
  for (int j = n; j >= 3 && j >= n - 2; --j)
    conv += kernels[n - j] * values[static_cast<size_t>(j)];
  const double vn = values[static_cast<size_t>(n)];
  const double vp = values[static_cast<size_t>(n - 1)];
  const double vpp = values[static_cast<size_t>(n - 2)];
  const double lhs = 2.0 * vn * mesh.step(n) * conv;
  const double rhs = g_functional(mesh, n, vn, vp) - g_functional(mesh, n - 1, vp, vpp) +
                     f_functional(mesh, n, vn, vp, vpp);
  return std::abs(lhs - rhs);
}

double eta(double x, double y, double z) {
  const double x2 = x * x, y2 = y * y, z2 = z * z;
  return 10.0 / (7.0 * (y2 + 1.0)) -
         x2 * x * (x2 + 1.0) * y2 / ((y2 + 1.0) * (x2 * y2 + y2 + 1.0)) +
         10.0 * z2 * (y2 * z2 + 2.0 * z2 + 1.0) /
             (7.0 * (z2 + 1.0) * (y2 * z2 + z2 + 1.0)) -
         (y2 + 1.0) * z2 * z2 * z / ((z2 + 1.0) * (y2 * z2 + z2 + 1.0));
}

double zeta(double x, double y, double z) {
  const double x2 = x * x, y2 = y * y, z2 = z * z;
  const auto dyz = d_coeffs(y2, z2);
  const double zeta1 = 2.0 * dyz.d0 + 0.7 * y * dyz.d1 - 0.51 * y * z * dyz.d2;
  const double x3 = x2 * x;
  const double zeta2 = -10.0 * x3 / (7.0 * (x2 + 1.0)) -
                       x3 * y2 * (10.0 - 7.0 * y) / (7.0 * (y2 + 1.0)) -
                       (10.0 * y + 7.0) * y2 * y * x3 /
                           (7.0 * (y2 + 1.0) * (1.0 + y2 + y2 * x2));
  return (zeta1 + zeta2) / (1.0 + y2);
}

bool LemmaScanReport::all_passed() const {
  for (const auto& e : entries)
    if (e.violations != 0) return false;
  return bridge_q_residual < 1e-12 && bridge_p_residual < 1e-12;
}

LemmaScanReport scan_lemma_positivity(int grid_points_per_axis) {
  if (grid_points_per_axis < 8)
    throw std::invalid_argument("scan_lemma_positivity: grid >= 8 required");
  const int g = grid_points_per_axis;
  const double re = re_limit();
  const double sre = std::sqrt(re);
  const double eps = 1e-6;

  auto axis = [g, eps](double length) {
    std::vector<double> c(static_cast<size_t>(g));
    for (int i = 0; i < g; ++i)
      c[static_cast<size_t>(i)] = eps + (length - 2.0 * eps) * i / (g - 1);
    return c;
  };

  struct Acc {
    double min_value = 1e300;
    double arg[3] = {0, 0, 0};
    long violations = 0;
    void feed(double v, double x, double y, double z, bool violated) {
      if (v < min_value) {
        min_value = v;
        arg[0] = x;
        arg[1] = y;
        arg[2] = z;
      }
      if (violated) ++violations;
    }
  };
  Acc q_acc, p_acc, eta_acc, zeta_acc;
  double bridge_q = 0.0, bridge_p = 0.0;

  const auto ratio_axis = axis(re);
  for (double x : ratio_axis)
    for (double y : ratio_axis)
      for (double z : ratio_axis) {
        const double q = q_fun(x, y, z);
        q_acc.feed(q, x, y, z, !(q > 0.0));
        const double p = p_fun(x, y, z);
        p_acc.feed(p, x, y, z, !(p > 0.02));
      }

  const auto root_axis = axis(sre);
  for (double x : root_axis)
    for (double y : root_axis)
      for (double z : root_axis) {
        const double e = eta(x, y, z);
        eta_acc.feed(e, x, y, z, !(e > 0.0));
        const double zt = zeta(x, y, z);
        zeta_acc.feed(zt, x, y, z, !(zt > 0.02));
        const double rq = std::abs(q_fun(x * x, y * y, z * z) - y * y * y * e);
        const double rp = std::abs(p_fun(x * x, y * y, z * z) - (1.0 + y * y) * zt);
        bridge_q = std::max(bridge_q, rq);
        bridge_p = std::max(bridge_p, rp);
      }

  LemmaScanReport report;
  report.grid = g;
  auto push = [&report](const char* name, const Acc& a) {
    report.entries.push_back(
        {name, a.min_value, {a.arg[0], a.arg[1], a.arg[2]}, a.violations});
  };
  push("q_pos", q_acc);
  push("p_bound", p_acc);
  push("eta_pos", eta_acc);
  push("zeta_bound", zeta_acc);
  report.bridge_q_residual = bridge_q;
  report.bridge_p_residual = bridge_p;
  return report;
}

MonotonicityReport monotonicity_check(long samples, std::uint64_t seed) {
  if (samples < 100)
    throw std::invalid_argument("monotonicity_check: samples >= 100 required");
  const double re = re_limit();
  SplitMix64 rng(seed);
  MonotonicityReport report{samples, 0, 0.0};
  for (long s = 0; s < samples; ++s) {
    double x0 = rng.uniform(0.0, re), x1 = rng.uniform(0.0, re);
    double y0 = rng.uniform(0.0, re), y1 = rng.uniform(0.0, re);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const auto base = d_coeffs(x0, y0);
    const auto dx = d_coeffs(x1, y0);
    const auto dy = d_coeffs(x0, y1);
    if (dx.d0 < base.d0 || dy.d0 < base.d0) ++report.violations;
    if (dx.d1 > base.d1 || dy.d1 > base.d1) ++report.violations;
    if (dx.d2 < base.d2 || dy.d2 < base.d2) ++report.violations;
    report.max_d2_seen = std::max({report.max_d2_seen, base.d2, dx.d2, dy.d2});
  }
  return report;
}

}  // namespace bdf3
