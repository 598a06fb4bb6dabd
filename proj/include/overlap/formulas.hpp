#pragma once

#include <map>
#include <utility>

#include "overlap/core.hpp"

namespace overlap {

// coefficient · 2^power_of_two, both exact.
struct MainTerm {
  Rational coefficient;
  unsigned power_of_two = 0;

  Rational value() const { return coefficient * Rational(pow2(power_of_two)); }
  friend bool operator==(const MainTerm&, const MainTerm&) = default;
};

// 2^n ∏_S (1/m_S!) (m_S n / Σ m)^{m_S}; exactly 2^n for the all-zero spec.
inline MainTerm asymptotic_main_term(int n, const OverlapSpec& spec) {
  require(n >= 0, ErrorCode::invalid_argument, "negative n");
  MainTerm term{Rational(1), static_cast<unsigned>(n)};
  const int total = spec.total();
  if (total == 0) return term;
  for (auto [a, b] : spec.pairs()) {
    const int m = spec.at(a, b);
    if (m == 0) continue;
    const Rational base(BigInt(m) * n, total);
    Rational factor = Rational(1) / Rational(factorial(m));
    for (int i = 0; i < m; ++i) factor *= base;
    term.coefficient *= factor;
  }
  return term;
}

// [ (1/m!) (n / C(ell,2))^m ]^{C(ell,2)} 2^n
inline MainTerm uniform_asymptotic(int n, int ell, int m) {
  require(m >= 1, ErrorCode::invalid_argument, "uniform main term needs m >= 1");
  require(ell >= 2, ErrorCode::invalid_argument, "uniform main term needs ell >= 2");
  const BigInt pairs = binom(ell, 2);
  Rational inner = Rational(1) / Rational(factorial(m));
  for (int i = 0; i < m; ++i) inner *= Rational(BigInt(n), pairs);
  Rational coefficient = 1;
  for (BigInt i = 0; i < pairs; ++i) coefficient *= inner;
  return {coefficient, static_cast<unsigned>(n)};
}

// m_S n / Σ m for every pair with m_S > 0, keyed by 0-based (k1 < k2).
inline std::map<std::pair<int, int>, Rational> block_size_targets(int n, const OverlapSpec& spec) {
  const int total = spec.total();
  require(total > 0, ErrorCode::invalid_argument, "all overlap bounds are zero");
  std::map<std::pair<int, int>, Rational> out;
  for (auto [a, b] : spec.pairs())
    if (spec.at(a, b) > 0) out[{a, b}] = Rational(BigInt(spec.at(a, b)) * n, total);
  return out;
}

}  // namespace overlap
