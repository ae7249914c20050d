#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bdf3/bdf3_kernels.hpp"
#include "bdf3/rng.hpp"
#include "bdf3/time_mesh.hpp"

using namespace bdf3;

namespace {

// Extended-precision oracle for the kernel functions and their identities.
struct LongD {
  long double d0, d1, d2;
};

LongD d_coeffs_ld(long double x, long double y) {
  const long double s = 1.0L + y + x * y;
  const long double d0 = (1.0L + 2.0L * x) / (1.0L + x) + x * y / s;
  const long double d2 = x * y * y / s * (1.0L + x) / (1.0L + y);
  const long double d1 = -x / (1.0L + x) - x * y / s - d2;
  return {d0, d1, d2};
}

long double identity_residual_ld(long double x, long double y, int which) {
  const auto d = d_coeffs_ld(x, y);
  switch (which) {
    case 1:
      return d.d0 + d.d1 + d.d2 - 1.0L;
    case 2:
      return d.d0 + (1.0L + 2.0L * x) / x * d.d1 +
             (1.0L + 2.0L * y + 2.0L * x * y) / (x * y) * d.d2;
    default:
      return d.d0 + (1.0L + 3.0L * x + 3.0L * x * x) / (x * x) * d.d1 +
             (1.0L + 3.0L * y + 3.0L * x * y + 3.0L * y * y + 6.0L * x * y * y +
              3.0L * x * x * y * y) /
                 (x * x * y * y) * d.d2;
  }
}

}  // namespace

TEST_CASE("kernel coefficients at reference points") {
  const auto d = d_coeffs(1.0, 1.0);
  CHECK(d.d0 == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  CHECK(d.d1 == doctest::Approx(-7.0 / 6.0).epsilon(1e-15));
  CHECK(d.d2 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  for (const double x : {0.0, 0.3, 1.0, 2.5}) CHECK(d_coeffs(x, 0.0).d2 == 0.0);

  const auto m = d_coeffs(0.5, 2.0);
  CHECK(m.d0 + m.d1 + m.d2 == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(d_coeffs(-0.1, 1.0), std::invalid_argument);

  // sign pattern on a positive grid
  for (double x = 0.05; x < 4.0; x += 0.37)
    for (double y = 0.05; y < 4.0; y += 0.37) {
      const auto v = d_coeffs(x, y);
      CHECK(v.d0 > 0.0);
      CHECK(v.d1 < 0.0);
      CHECK(v.d2 > 0.0);
    }
}

TEST_CASE("consistency identities against the extended-precision oracle") {
  SUBCASE("exact at the uniform point") {
    const auto r = consistency_identities(1.0, 1.0);
    CHECK(std::abs(r.first) < 1e-15);
    CHECK(std::abs(r.second) < 1e-15);
    CHECK(std::abs(r.third) < 1e-15);
  }
  SUBCASE("reference points") {
    for (const auto& [x, y] : std::vector<std::pair<double, double>>{
             {1.4, 0.3}, {re_limit(), re_limit()}}) {
      CHECK(std::abs(static_cast<double>(identity_residual_ld(x, y, 1))) < 1e-15);
      CHECK(std::abs(static_cast<double>(identity_residual_ld(x, y, 2))) < 1e-15);
      CHECK(std::abs(static_cast<double>(identity_residual_ld(x, y, 3))) < 1e-14);
      const auto r = consistency_identities(x, y);
      CHECK(std::abs(r.first) < 1e-12);
      CHECK(std::abs(r.second) < 1e-12);
      CHECK(std::abs(r.third) < 1e-12);
    }
  }
  SUBCASE("1000 random points in [1e-3, 4]^2") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
      const double x = rng.uniform(1e-3, 4.0);
      const double y = rng.uniform(1e-3, 4.0);
      const auto r = consistency_identities(x, y);
      CHECK(std::abs(r.first) < 1e-12);
      CHECK(std::abs(r.second) < 1e-11);
      CHECK(std::abs(r.third) < 1e-11);
    }
  }
}

TEST_CASE("bdf3_apply") {
  // random step mesh: sampling noise of the difference quotients stays near
  // ulp(1)/tau, so exactness claims remain testable at 1e-12
  const TimeMesh mesh = TimeMesh::random(1.0, 40, 17);

  SUBCASE("constants vanish") {
    std::vector<double> v(41, 3.7);
    for (int n = 3; n <= 40; ++n) CHECK(bdf3_apply(mesh, v, n) == doctest::Approx(0.0));
  }
  SUBCASE("linear reproduces 1") {
    std::vector<double> v(41);
    for (int k = 0; k <= 40; ++k) v[static_cast<size_t>(k)] = mesh.node(k);
    for (int n = 3; n <= 40; ++n)
      CHECK(bdf3_apply(mesh, v, n) == doctest::Approx(1.0).epsilon(1e-11));
  }
  SUBCASE("exact on cubics") {
    std::vector<double> v(41);
    for (int k = 0; k <= 40; ++k) {
      const double t = mesh.node(k);
      v[static_cast<size_t>(k)] = t * t * t;
    }
    for (int n = 3; n <= 40; ++n) {
      const double t = mesh.node(n);
      CHECK(std::abs(bdf3_apply(mesh, v, n) - 3.0 * t * t) < 1e-12);
    }
  }
  SUBCASE("agrees with the convolution form") {
    std::vector<double> v(41);
    SplitMix64 rng(5);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    for (int n = 3; n <= 40; ++n) {
      const auto d = d_coeffs(mesh.ratio(n), mesh.ratio(n - 1));
      const double kernels[3] = {d.d0, d.d1, d.d2};
      double conv = 0.0;
      double scale = 1.0;
      for (int j = 1; j <= n; ++j) {
        if (n - j > 2) continue;
        const double term = kernels[n - j] *
                            (v[static_cast<size_t>(j)] - v[static_cast<size_t>(j - 1)]) /
                            mesh.step(j);
        conv += term;
        scale += std::abs(term);
      }
      CHECK(std::abs(bdf3_apply(mesh, v, n) - conv) < 1e-14 * scale);
    }
  }
  SUBCASE("rejects n < 3") {
    std::vector<double> v(41, 0.0);
    CHECK_THROWS_AS(bdf3_apply(mesh, v, 2), std::invalid_argument);
  }
}

TEST_CASE("step-ratio limit root") {
  const double re = compute_re(1e-10);
  CHECK(re == doctest::Approx(1.4877).epsilon(5e-4 / 1.4877));
  CHECK(std::abs(re_defect(re)) < 1e-10);
  // the root in its original form
  const double resid = d_coeffs(re, 0.0).d1 + 0.7 * std::sqrt(re) * d_coeffs(re, re).d2;
  CHECK(std::abs(resid) < 1e-9);
  CHECK(re_limit() == doctest::Approx(compute_re(1e-12)).epsilon(1e-12));
}

TEST_CASE("gamma-bar closure") {
  const auto gb = compute_gamma_bar(1e-12);
  CHECK(gb.r_bar == doctest::Approx(1.4965).epsilon(1e-3 / 1.4965));
  CHECK(gb.gamma_bar == doctest::Approx(0.6924).epsilon(1e-3 / 0.6924));
  // residual of the defining p-equation at the returned pair
  const double r = gb.r_bar;
  const double g = gb.gamma_bar;
  const auto d = d_coeffs(r, r);
  const double sd1 = std::sqrt(r) * d.d1;
  const double rd2 = r * d.d2;
  const double defect = 2.0 * d.d0 - rd2 + g * sd1 + g * g * rd2 + sd1 / g + rd2;
  CHECK(std::abs(defect) < 1e-10);
}

TEST_CASE("gradient-structure coefficient functions at the uniform point") {
  CHECK(d_star(1.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(p_fun(1.0, 1.0, 1.0) == doctest::Approx(101.0 / 75.0).epsilon(1e-15));
  CHECK(q_fun(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dgs coefficients") {
  SUBCASE("uniform mesh values") {
    const TimeMesh mesh = TimeMesh::uniform(1.0, 10);
    const auto c = dgs_coefficients(mesh, 5);
    CHECK(c.a == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(c.b == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(c.c == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(c.p == doctest::Approx(101.0 / 75.0).epsilon(1e-14));
    CHECK(c.q == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(dgs_coefficients(mesh, 10), std::invalid_argument);
  }
  SUBCASE("admissible meshes keep q >= 0 and p > 1/50") {
    for (const std::uint64_t seed : {1u, 2u, 3u, 4u}) {
      const TimeMesh mesh = TimeMesh::random_ratio(1.0, 60, seed, 0.05, re_limit() * 0.999);
      for (int n = 3; n <= 59; ++n) {
        const auto c = dgs_coefficients(mesh, n);
        CHECK(c.q >= 0.0);
        CHECK(c.p > 0.02);
        CHECK(c.b > 0.0);
      }
    }
  }
  SUBCASE("q via the two independent routes") {
    const TimeMesh mesh = TimeMesh::random_ratio(1.0, 50, 9, 0.05, 2.0);
    for (int n = 3; n <= 49; ++n) {
      const double rn1 = mesh.ratio(n + 1), rn = mesh.ratio(n), rp = mesh.ratio(n - 1);
      const double direct = -(10.0 / 7.0) * std::sqrt(rn) * d_coeffs(rn, rp).d1 -
                            std::sqrt(rn * rp) * d_coeffs(rn, rp).d2 -
                            std::sqrt(rn1 * rn) * d_coeffs(rn1, rn).d2;
      CHECK(std::abs(dgs_coefficients(mesh, n).q - direct) < 1e-13);
    }
  }
}

TEST_CASE("G and F functionals") {
  const TimeMesh uniform = TimeMesh::uniform(10.0, 10);  // tau = 1
  SUBCASE("zero at the origin") {
    CHECK(g_functional(uniform, 4, 0.0, 0.0) == 0.0);
  }
  SUBCASE("uniform tau=1 closed form") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const double v = rng.uniform(-2.0, 2.0);
      const double w = rng.uniform(-2.0, 2.0);
      const double want = 4.0 / 3.0 * v * v + (0.7 * v - w) * (0.7 * v - w) / 3.0;
      CHECK(g_functional(uniform, 4, v, w) == doctest::Approx(want).epsilon(1e-13));
    }
  }
  SUBCASE("F dominates tau_n v_n^2 / 50") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
      const TimeMesh mesh =
          TimeMesh::random_ratio(1.0, 12, rng.next(), 0.05, re_limit() * 0.999);
      const int n = 3 + static_cast<int>(rng.next() % 9);
      const double v = rng.uniform(-3.0, 3.0);
      const double w = rng.uniform(-3.0, 3.0);
      const double w2 = rng.uniform(-3.0, 3.0);
      const double f = f_functional(mesh, n, v, w, w2);
      CHECK(f >= mesh.step(n) * v * v / 50.0 - 1e-13);
    }
  }
}

TEST_CASE("discrete gradient structure identity") {
  SUBCASE("zero sequence") {
    const TimeMesh mesh = TimeMesh::uniform(1.0, 8);
    std::vector<double> v(9, 0.0);
    for (int n = 3; n <= 7; ++n) CHECK(dgs_residual(mesh, v, n) == 0.0);
  }
  SUBCASE("uniform mesh, ones") {
    const TimeMesh mesh = TimeMesh::uniform(1.0, 10);
    std::vector<double> v(11, 1.0);
    v[0] = v[1] = v[2] = 0.0;
    for (int n = 5; n <= 9; ++n) CHECK(dgs_residual(mesh, v, n) < 1e-13);
  }
  SUBCASE("1000 random admissible trials") {
    SplitMix64 rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
      const int n_steps = 6 + static_cast<int>(rng.next() % 45);  // up to 50
      const TimeMesh mesh =
          TimeMesh::random_ratio(1.0, n_steps, rng.next(), 0.05, re_limit() * 0.9999);
      std::vector<double> v(static_cast<size_t>(n_steps) + 1);
      for (auto& x : v) x = rng.uniform(-1.0, 1.0);
      v[1] = v[2] = 0.0;  // padding that also covers n = 3, 4
      for (int n = 3; n <= n_steps - 1; ++n) CHECK(dgs_residual(mesh, v, n) < 1e-11);
    }
  }
}

TEST_CASE("appendix auxiliary functions") {
  const double re = re_limit();
  const double sre = std::sqrt(re);

  SUBCASE("corner constants") {
    // at the computed root the x/y part cancels by construction, leaving the
    // tiny positive z contribution
    const double corner = eta(sre, sre, 1e-6);
    CHECK(corner > 0.0);
    CHECK(corner < 1e-5);
    for (const double z : {0.1, 0.5, 1.0})
      CHECK(zeta(sre, 1e-6, z) == doctest::Approx(0.9579).epsilon(1e-3 / 0.9579));
    CHECK(zeta(sre, sre, 1e-6) == doctest::Approx(0.259131).epsilon(1e-3 / 0.259131));
  }
  SUBCASE("zeta matches its unexpanded form") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const double x = rng.uniform(1e-3, sre);
      const double y = rng.uniform(1e-3, sre);
      const double z = rng.uniform(1e-3, sre);
      const auto dyz = d_coeffs(y * y, z * z);
      const auto dxy = d_coeffs(x * x, y * y);
      const double direct = (2.0 * dyz.d0 + 0.7 * y * dyz.d1 - 0.51 * y * z * dyz.d2 +
                             (10.0 / 7.0) * x * dxy.d1 + x * y * dxy.d2) /
                            (1.0 + y * y);
      CHECK(zeta(x, y, z) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("lemma positivity scan") {
  const auto report = scan_lemma_positivity(16);
  CHECK(report.entries.size() == 4);
  for (const auto& e : report.entries) {
    INFO(e.check);
    CHECK(e.violations == 0);
  }
  CHECK(report.bridge_q_residual < 1e-12);
  CHECK(report.bridge_p_residual < 1e-12);
  CHECK(report.all_passed());
  CHECK_THROWS_AS(scan_lemma_positivity(4), std::invalid_argument);
}

TEST_CASE("kernel monotonicity") {
  const auto report = monotonicity_check(10000, 0);
  CHECK(report.violations == 0);
  // monotonicity caps every sampled d2 by its value at the ratio limit;
  // that cap evaluates to 0.7004, not the 1/2 sometimes quoted for it
  const double cap = d_coeffs(re_limit(), re_limit()).d2;
  CHECK(report.max_d2_seen <= cap);
  CHECK(cap == doctest::Approx(0.70043).epsilon(1e-4));
  CHECK(cap < 0.75);
  CHECK_THROWS_AS(monotonicity_check(10, 0), std::invalid_argument);
}
