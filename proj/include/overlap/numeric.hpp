#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "overlap/error.hpp"

namespace overlap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(const BigInt& num, const BigInt& den) {
  require(den != 0, ErrorCode::invalid_argument, "zero denominator");
  return Rational(num, den);
}

inline BigInt binom(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// C(n, <= t) = sum_{i <= t} C(n, i)
inline BigInt binom_le(unsigned n, unsigned t) {
  BigInt r = 0;
  for (unsigned i = 0; i <= t && i <= n; ++i) r += binom(n, i);
  return r;
}

inline std::uint64_t binom_u64(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::uint64_t>(r);
}

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt pow2(unsigned e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

inline BigInt product(const std::vector<BigInt>& values) {
  BigInt r = 1;
  for (const auto& v : values) r *= v;
  return r;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline std::string to_decimal(const Rational& v) {
  auto num = boost::multiprecision::numerator(v);
  auto den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& v) { return v.convert_to<double>(); }

}  // namespace overlap
