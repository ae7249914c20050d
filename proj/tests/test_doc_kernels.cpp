#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bdf3/doc_kernels.hpp"
#include "bdf3/rng.hpp"
#include "bdf3/time_mesh.hpp"

using namespace bdf3;

TEST_CASE("leading kernels are reciprocal d0") {
  const TimeMesh uniform = TimeMesh::uniform(1.0, 50);
  const DocKernelTable table(uniform, 50);
  for (int n = 3; n <= 50; ++n)
    CHECK(table.theta(n, 0) == doctest::Approx(6.0 / 11.0).epsilon(1e-15));

  // n = 3 orthogonality is a plain reciprocal
  CHECK(orthogonality_residual(table, 3) == 0.0);
}

TEST_CASE("orthogonality on the three mesh families") {
  const double re = re_limit();
  const std::vector<TimeMesh> meshes = {
      TimeMesh::uniform(1.0, 200),
      TimeMesh::periodic_ratio(1.0, 200, 4 * re),
      TimeMesh::random_ratio(1.0, 200, 21, 0.05, re * 0.999),
  };
  for (const auto& mesh : meshes) {
    const DocKernelTable table(mesh, 200);
    double worst_direct = 0.0, worst_mutual = 0.0;
    for (int n = 3; n <= 200; ++n) {
      worst_direct = std::max(worst_direct, orthogonality_residual(table, n));
      worst_mutual = std::max(worst_mutual, mutual_orthogonality_residual(table, n));
    }
    CHECK(worst_direct < 1e-11);
    CHECK(worst_mutual < 1e-11);
    CHECK(table.theta(200, 0) > 0.5 * 6.0 / 11.0);
  }
}

TEST_CASE("absolute sums") {
  SUBCASE("single-entry row on the uniform mesh") {
    const TimeMesh mesh = TimeMesh::uniform(1.0, 10);
    const auto sums = abs_sums(DocKernelTable(mesh, 3));
    CHECK(sums.row_sums.size() == 1);
    CHECK(sums.row_sums[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
  }
  SUBCASE("row sums stabilize on the uniform mesh") {
    const auto sums = abs_sums(DocKernelTable(TimeMesh::uniform(1.0, 1000), 1000));
    const size_t last = sums.row_sums.size() - 1;
    CHECK(std::abs(sums.row_sums[last] - sums.row_sums[last - 1]) < 1e-8);
    CHECK(std::abs(sums.row_sums[last] - sums.row_sums[last - 200]) < 1e-8);
  }
  SUBCASE("k3 estimate does not grow when the horizon doubles") {
    // each column sum is fully converged well before the table doubles; the
    // overall estimate stays bounded (the max only shifts between columns)
    const double re = re_limit();
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t seed = rng.next();
      const TimeMesh mesh =
          TimeMesh::random_ratio_log(1.0, 200, seed, 1.0 / re, re * 0.999);
      const auto half = abs_sums(DocKernelTable(mesh, 100));
      const auto full = abs_sums(DocKernelTable(mesh, 200));
      for (int i = 3; i <= 50; ++i)
        CHECK(full.col_sums[static_cast<size_t>(i - 3)] <
              1.01 * half.col_sums[static_cast<size_t>(i - 3)]);
      CHECK(full.k3_hat < 2.0);
    }
  }
}

TEST_CASE("initial effect") {
  const TimeMesh uniform = TimeMesh::uniform(1.0, 30);
  const DocKernelTable table(uniform, 30);

  SUBCASE("zero starting slopes") {
    for (int n = 3; n <= 30; ++n) CHECK(initial_effect(table, 0.0, 0.0, n) == 0.0);
  }
  SUBCASE("hand value at n = 3") {
    // theta_0^{(3)} d_1^{(3)} = (6/11)(-7/6) = -7/11
    CHECK(initial_effect(table, 0.0, 1.0, 3) ==
          doctest::Approx(-7.0 / 11.0).epsilon(1e-15));
  }
  SUBCASE("summed starting effects obey the kernel-sum bound") {
    const double re = re_limit();
    const TimeMesh mesh = TimeMesh::random_ratio_log(1.0, 120, 3, 1.0 / re, re * 0.999);
    const DocKernelTable t(mesh, 120);
    const auto sums = abs_sums(t);
    // exact chain: |I| <= |dv2| (|d1(3)| + d2(4)) K + |dv1| d2(3) K
    const double c2 = std::abs(t.d(3).d1) + t.d(4).d2;
    const double c1 = t.d(3).d2;
    SplitMix64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
      const double dv1 = rng.uniform(-2.0, 2.0);
      const double dv2 = rng.uniform(-2.0, 2.0);
      double total = 0.0;
      for (int n = 3; n <= 120; ++n) total += std::abs(initial_effect(t, dv1, dv2, n));
      CHECK(total <= c2 * sums.k3_hat * std::abs(dv2) + c1 * sums.k3_hat * std::abs(dv1) +
                         1e-12);
      // the rounded caps (2, 1/2) apply whenever the leading kernels obey them
      if (c2 <= 2.0 && c1 <= 0.5)
        CHECK(total <= 2.0 * sums.k3_hat * std::abs(dv2) +
                           0.5 * sums.k3_hat * std::abs(dv1) + 1e-12);
    }
  }
}

TEST_CASE("summation-order transform") {
  const TimeMesh mesh = TimeMesh::random_ratio_log(1.0, 50, 31, 1.0 / 1.4, 1.4);
  const DocKernelTable table(mesh, 50);

  SUBCASE("constants") {
    std::vector<double> v(51, 2.5);
    for (int n = 3; n <= 50; ++n) CHECK(doc_transform_residual(table, v, n) == 0.0);
  }
  SUBCASE("random values") {
    SplitMix64 rng(9);
    std::vector<double> v(51);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    for (int n = 3; n <= 50; ++n) CHECK(doc_transform_residual(table, v, n) < 1e-11);
  }
  SUBCASE("linear values reduce to the summed orthogonality identity") {
    std::vector<double> v(51);
    for (int k = 0; k <= 50; ++k) v[static_cast<size_t>(k)] = mesh.node(k);
    for (int n = 3; n <= 50; ++n) {
      CHECK(doc_transform_residual(table, v, n) < 1e-12);
      // same statement written out: sum_i theta - I_3^n - 1 = 0
      double theta_sum = 0.0;
      for (int i = 3; i <= n; ++i) theta_sum += table.theta(n, n - i);
      CHECK(std::abs(theta_sum - initial_effect(table, 1.0, 1.0, n) - 1.0) < 1e-12);
    }
  }
}
