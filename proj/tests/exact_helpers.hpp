// Exact reference checks shared by the test programs.
#ifndef HP2D_TESTS_EXACT_HELPERS_HPP_
#define HP2D_TESTS_EXACT_HELPERS_HPP_

#include <gmpxx.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "hp2d/rounding.hpp"

namespace hp2d::testing {

inline mpq_class q(double v) { return mpq_class(v); }

/// True when r is the least T not below the exact value, with the
/// overflow conventions of the kernel: +inf iff exact > omega, and
/// -omega when exact < -omega.
template <Scalar T>
bool is_least_upper(T r, const mpq_class& exact) {
  const mpq_class omega = q(double(largest_finite<T>));
  if (std::isinf(r)) return r > 0 && exact > omega;
  if (std::isnan(r)) return false;
  if (exact > omega) return false;
  if (q(double(r)) < exact) return false;
  if (r == -largest_finite<T>) return true;
  const T below = std::nextafter(r, -std::numeric_limits<T>::infinity());
  return q(double(below)) < exact;
}

/// Uniformly random finite bit pattern.
template <Scalar T>
T random_finite(std::mt19937_64& rng) {
  for (;;) {
    T v;
    if constexpr (std::same_as<T, double>) v = std::bit_cast<double>(rng());
    else v = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
    if (std::isfinite(v)) return v;
  }
}

/// Random value with a random sign, mantissa and an exponent in [lo, hi].
template <Scalar T>
T random_scaled(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_real_distribution<double> mant(1.0, 2.0);
  std::uniform_int_distribution<int> ex(lo, hi);
  T v = static_cast<T>(std::ldexp(mant(rng), ex(rng)));
  return (rng() & 1) ? -v : v;
}

/// Mix of bit patterns, moderate values, small integers and zero.
template <Scalar T>
T random_operand(std::mt19937_64& rng) {
  switch (rng() % 6) {
    case 0:
    case 1: return random_finite<T>(rng);
    case 2: return random_scaled<T>(rng, -30, 30);
    case 3: return static_cast<T>(static_cast<int>(rng() % 2001) - 1000);
    case 4: return random_scaled<T>(rng, std::numeric_limits<T>::min_exponent - 30, std::numeric_limits<T>::min_exponent + 30);
    default: return (rng() % 8 == 0) ? T(0) : random_scaled<T>(rng, std::numeric_limits<T>::max_exponent - 30, std::numeric_limits<T>::max_exponent - 1);
  }
}

/// Exact sign of sum +-f0 f1 f2 over the terms.
template <class Terms>
int rational_sign(const Terms& terms) {
  mpq_class s = 0;
  for (const auto& t : terms) {
    mpq_class p = q(double(t.f[0])) * q(double(t.f[1])) * q(double(t.f[2]));
    if (t.negative) s -= p;
    else s += p;
  }
  return sgn(s);
}

}  // namespace hp2d::testing

#endif  // HP2D_TESTS_EXACT_HELPERS_HPP_
