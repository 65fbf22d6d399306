// Round-up scalar arithmetic and exact sign evaluation.
//
// Every operation here is a pure function of its arguments. The results do
// not depend on the floating-point rounding mode that is active when the
// function is called.
#ifndef HP2D_ROUNDING_HPP_
#define HP2D_ROUNDING_HPP_

#include <array>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace hp2d {

template <class T>
concept Scalar = std::same_as<T, float> || std::same_as<T, double>;

/// The largest finite value of T (omega).
template <Scalar T>
inline constexpr T largest_finite = std::numeric_limits<T>::max();

template <Scalar T>
inline constexpr T plus_infinity = std::numeric_limits<T>::infinity();

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

constexpr Sign negate(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
std::string_view to_string(Sign s);

/// Least representable value >= x + y. Returns +inf iff the exact sum
/// exceeds largest_finite<T>; a sum below -largest_finite<T> yields
/// -largest_finite<T>.
template <Scalar T>
T ru_add(T x, T y);

/// Least representable value >= x * y, with the same overflow convention
/// as ru_add.
template <Scalar T>
T ru_mul(T x, T y);

/// Least representable value >= x / y. Requires y != 0.
template <Scalar T>
T ru_div(T x, T y);

/// Round-up quotient plus a flag telling whether the exact quotient lies
/// strictly below -largest_finite<T> (the value is then -largest_finite<T>).
template <Scalar T>
struct Quotient {
  T value;
  bool below_lowest;
};

template <Scalar T>
Quotient<T> ru_div_checked(T x, T y);

/// Round-down helpers obtained by double negation.
template <Scalar T>
T rd_div(T x, T y) {
  return -ru_div<T>(-x, y);
}

/// One signed product term: (negative ? -1 : +1) * f[0] * f[1] * f[2].
template <Scalar T>
struct SignedTriple {
  bool negative = false;
  std::array<T, 3> f{};
};

/// Exact sign of a sum of signed triple products, for any finite factors.
/// No rounding error is committed; the answer is deterministic.
Sign exact_sign_sum(std::span<const SignedTriple<double>> terms);

template <Scalar T>
Sign exact_sign_3x3(std::span<const SignedTriple<T>, 6> terms) {
  std::array<SignedTriple<double>, 6> wide;
  for (std::size_t i = 0; i < 6; ++i) {
    wide[i].negative = terms[i].negative;
    for (std::size_t k = 0; k < 3; ++k) wide[i].f[k] = static_cast<double>(terms[i].f[k]);
  }
  return exact_sign_sum(wide);
}

/// Per-thread operation counters used by the budget checks.
struct OpCounters {
  std::uint64_t divisions = 0;
  std::uint64_t direction_comparisons = 0;
  std::uint64_t side_tests = 0;
  std::uint64_t exact_fallbacks = 0;
};

OpCounters& op_counters();
inline void reset_op_counters() { op_counters() = OpCounters{}; }

}  // namespace hp2d

#endif  // HP2D_ROUNDING_HPP_
