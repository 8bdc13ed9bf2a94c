#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>

#include "errors.hpp"

namespace sarki {

using i64 = std::int64_t;

namespace checked {

inline i64 add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("integer overflow in addition");
  return r;
}

inline i64 sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("integer overflow in subtraction");
  return r;
}

inline i64 mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("integer overflow in multiplication");
  return r;
}

}  // namespace checked

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

// n = p^k for some k >= 0
inline bool is_power_of(i64 n, i64 p) {
  if (n < 1 || p < 2) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline bool is_square(i64 n) {
  if (n < 0) return false;
  i64 r = static_cast<i64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

}  // namespace sarki
