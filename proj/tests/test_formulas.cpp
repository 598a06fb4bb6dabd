#include <gtest/gtest.h>

#include "overlap/coloring.hpp"
#include "overlap/constructions.hpp"
#include "overlap/formulas.hpp"
#include "support.hpp"

using namespace overlap;

namespace {

OrientedGraph cycle3() {
  OrientedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  return g;
}

BigInt factorial_naive(int m) {
  BigInt f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

BigInt cycle_octopus_product(int n) {
  const auto plan = balanced_plan(n, OverlapSpec::uniform(3, 1), cycle3());
  BigInt product = 1;
  for (int k = 0; k < 3; ++k) product *= octopus_family_size(plan, k);
  return product;
}

}  // namespace

TEST(MainTerm, TwoFamilies) {
  for (int n = 1; n <= 40; ++n) {
    EXPECT_EQ(asymptotic_main_term(n, OverlapSpec::uniform(2, 1)).value(), Rational(BigInt(n) * pow2(n)));
    for (int t = 1; t <= 4; ++t) {
      BigInt nt = 1;
      for (int i = 0; i < t; ++i) nt *= n;
      EXPECT_EQ(asymptotic_main_term(n, OverlapSpec::uniform(2, t)).value(),
                Rational(nt * pow2(n), factorial_naive(t)));
    }
  }
}

TEST(MainTerm, ZeroSpecIsPowerOfTwo) {
  for (int n = 0; n <= 20; ++n)
    for (int ell = 1; ell <= 5; ++ell) {
      const auto t = asymptotic_main_term(n, OverlapSpec(ell));
      EXPECT_EQ(t.value(), Rational(pow2(n)));
    }
}

TEST(MainTerm, Examples) {
  EXPECT_EQ(uniform_asymptotic(8, 2, 1).value(), 2048);
  EXPECT_EQ(uniform_asymptotic(9, 3, 1).value(), 27 * 512);
  OverlapSpec mixed(3);
  mixed.set(0, 1, 2);
  mixed.set(0, 2, 1);
  mixed.set(1, 2, 1);
  // (1/2)(n/2)^2 (n/4)(n/4) 2^n at n = 8
  EXPECT_EQ(asymptotic_main_term(8, mixed).value(), Rational(8 * 2 * 2 * 256));
  EXPECT_EQ(asymptotic_main_term(8, mixed).power_of_two, 8u);
  EXPECT_THROW(uniform_asymptotic(5, 3, 0), Error);
  EXPECT_THROW(uniform_asymptotic(5, 1, 1), Error);
}

TEST(MainTerm, UniformAgreesWithGeneral) {
  for (int ell = 2; ell <= 6; ++ell)
    for (int m = 1; m <= 3; ++m)
      for (int n = 0; n <= 100; n += 7)
        EXPECT_EQ(asymptotic_main_term(n, OverlapSpec::uniform(ell, m)).value(), uniform_asymptotic(n, ell, m).value())
            << ell << " " << m << " " << n;
}

TEST(MainTerm, RatioOfTwoFamilyOptimum) {
  for (int n = 2; n <= 6; ++n) {
    const auto best = exact_search(n, 2, 1);
    EXPECT_EQ(Rational(best.best_value) / asymptotic_main_term(n, OverlapSpec::uniform(2, 1)).value(),
              Rational(n + 1, n));
  }
  OrientedGraph edge(2);
  edge.add_edge(0, 1);
  for (int n = 1; n <= 30; ++n) {
    const auto plan = balanced_plan(n, OverlapSpec::uniform(2, 1), edge);
    const BigInt product = octopus_family_size(plan, 0) * octopus_family_size(plan, 1);
    EXPECT_EQ(Rational(product) / uniform_asymptotic(n, 2, 1).value(), Rational(n + 1, n)) << n;
    if (n <= 12) {
      EXPECT_EQ(system_product(two_family_extremal(n, 1)), product);
    }
  }
}

TEST(MainTerm, CycleOctopusWithinFrozenWindow) {
  // c fitted on 12 <= n <= 24: max n·|ratio - 1| is 9 + 27/12 + 27/144 at n = 12.
  const Rational c(23, 2);
  for (int n = 12; n <= 24; ++n) {
    const Rational ratio = Rational(cycle_octopus_product(n)) / uniform_asymptotic(n, 3, 1).value();
    EXPECT_GE(ratio, 1);
    EXPECT_LE(ratio, 1 + c / n) << n;
    if (n % 3 == 0) {
      const Rational q = 1 + Rational(3, n);
      EXPECT_EQ(ratio, q * q * q);
    }
  }
}

TEST(BlockTargets, Examples) {
  for (int n : {10, 17, 40}) {
    const auto t = block_size_targets(n, OverlapSpec::uniform(5, 1));
    EXPECT_EQ(t.size(), 10u);
    Rational sum = 0;
    for (const auto& [edge, v] : t) {
      EXPECT_EQ(v, Rational(n, 10));
      sum += v;
    }
    EXPECT_EQ(sum, n);
  }
  OverlapSpec mixed(3);
  mixed.set(0, 1, 2);
  mixed.set(0, 2, 1);
  mixed.set(1, 2, 1);
  const auto t = block_size_targets(12, mixed);
  EXPECT_EQ(t.at({0, 1}), 6);
  EXPECT_EQ(t.at({0, 2}), 3);
  EXPECT_EQ(t.at({1, 2}), 3);
  EXPECT_THROW(block_size_targets(5, OverlapSpec(3)), Error);
}

TEST(BlockTargets, SumToN) {
  oracle::Gen gen(81);
  for (int trial = 0; trial < 200; ++trial) {
    const int ell = gen.range(2, 6), n = gen.range(0, 60);
    OverlapSpec spec(ell);
    for (auto [a, b] : spec.pairs()) spec.set(a, b, gen.range(0, 3));
    if (spec.total() == 0) spec.set(0, 1, 1);
    Rational sum = 0;
    for (const auto& [edge, v] : block_size_targets(n, spec)) {
      EXPECT_GT(spec.at(edge.first, edge.second), 0);
      sum += v;
    }
    EXPECT_EQ(sum, n);
  }
}
