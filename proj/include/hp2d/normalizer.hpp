// Octant classification and conservative normalization of constraints.
//
// A constraint a*x + b*y >= c is divided by the magnitude of its dominant
// coefficient. The dominant coefficient becomes +-1 and the secondary one
// has magnitude n in [0, 1]. The octant index says which coefficient
// dominates and what the signs are:
//
//   octant  condition          normalized (a, b)
//   0       a > b >= 0         ( 1,  n)
//   1       b >= a > 0         ( n,  1)
//   2       b > -a >= 0        (-n,  1)
//   3       -a >= b > 0        (-1,  n)
//   4       -a > -b >= 0       (-1, -n)
//   5       -b >= -a > 0       (-n, -1)
//   6       -b > a >= 0        ( n, -1)
//   7       a >= -b > 0        ( 1, -n)
//
// Inside an even octant the angle of the normal grows with n, inside an
// odd octant it shrinks.
#ifndef HP2D_NORMALIZER_HPP_
#define HP2D_NORMALIZER_HPP_

#include <cmath>
#include <utility>

#include "hp2d/errors.hpp"
#include "hp2d/rounding.hpp"

namespace hp2d {

inline constexpr int kOctants = 8;

template <Scalar T>
struct RawConstraint {
  T a{};
  T b{};
  T c{};
};

template <Scalar T>
struct NormalizedConstraint {
  int octant = 0;
  T n{};
  T c{};

  friend bool operator==(const NormalizedConstraint&, const NormalizedConstraint&) = default;
};

template <Scalar T>
struct DirectionKey {
  int octant = 0;
  T n{};

  friend bool operator==(const DirectionKey&, const DirectionKey&) = default;
};

enum class Order { Before, Equal, After };

template <Scalar T>
DirectionKey<T> direction_of(const NormalizedConstraint<T>& nc) {
  return {nc.octant, nc.n};
}

/// The direction rotated by pi.
template <Scalar T>
DirectionKey<T> opposite(const DirectionKey<T>& k) {
  return {(k.octant + 4) % kOctants, k.n};
}

/// The complementary closed half-plane through the same line.
template <Scalar T>
NormalizedConstraint<T> opposite(const NormalizedConstraint<T>& nc) {
  return {(nc.octant + 4) % kOctants, nc.n, T(0) - nc.c};
}

/// Index of the octant containing the direction of (a, b).
template <Scalar T>
int classify_octant(T a, T b) {
  if (a > b && b >= 0) return 0;
  if (b >= a && a > 0) return 1;
  if (b > -a && -a >= 0) return 2;
  if (-a >= b && b > 0) return 3;
  if (-a > -b && -b >= 0) return 4;
  if (-b >= -a && -a > 0) return 5;
  if (-b > a && a >= 0) return 6;
  if (a >= -b && -b > 0) return 7;
  throw ZeroNormal{};
}

template <Scalar T>
Order compare_directions(const DirectionKey<T>& k1, const DirectionKey<T>& k2) {
  if (k1.octant != k2.octant) return k1.octant < k2.octant ? Order::Before : Order::After;
  if (k1.n == k2.n) return Order::Equal;
  const bool increasing = (k1.octant % 2) == 0;
  return (k1.n < k2.n) == increasing ? Order::Before : Order::After;
}

/// The normalized coefficients (a, b); exact.
template <Scalar T>
std::pair<T, T> reconstruct_coefficients(const NormalizedConstraint<T>& nc) {
  const T n = nc.n;
  const T minus_n = T(0) - n;
  switch (nc.octant) {
    case 0: return {T(1), n};
    case 1: return {n, T(1)};
    case 2: return {minus_n, T(1)};
    case 3: return {T(-1), n};
    case 4: return {T(-1), minus_n};
    case 5: return {minus_n, T(-1)};
    case 6: return {n, T(-1)};
    default: return {T(1), minus_n};
  }
}

enum class NormalizeStatus {
  Ok,
  /// c / dominant exceeds omega: no point of the start box satisfies it.
  OverflowInfeasible,
  /// c / dominant is below -omega: every point of the start box satisfies it.
  Redundant,
};

template <Scalar T>
struct NormalizeResult {
  NormalizeStatus status = NormalizeStatus::Ok;
  NormalizedConstraint<T> constraint{};
};

template <Scalar T>
void require_finite(const RawConstraint<T>& rc) {
  if (!std::isfinite(rc.a) || !std::isfinite(rc.b) || !std::isfinite(rc.c))
    throw NonFiniteInput("constraint coefficients must be finite");
}

/// Relaxed normalized form of rc. Points with x, y >= 0 that satisfy rc
/// satisfy the result. Uses at most two divisions.
template <Scalar T>
NormalizeResult<T> normalize(const RawConstraint<T>& rc) {
  require_finite(rc);
  int octant = classify_octant(rc.a, rc.b);
  const bool a_dominant = octant == 0 || octant == 3 || octant == 4 || octant == 7;
  const T dominant = std::fabs(a_dominant ? rc.a : rc.b);
  const T secondary = a_dominant ? rc.b : rc.a;

  // The secondary coefficient multiplies a nonnegative variable, so
  // rounding it up only enlarges the feasible set.
  T n = T(0);
  if (secondary != T(0)) {
    const T up = ru_div(secondary, dominant);
    n = up < T(0) ? T(0) - up : up;
  }

  NormalizeResult<T> result;
  if (rc.c != T(0)) {
    const Quotient<T> q = ru_div_checked(T(0) - rc.c, dominant);
    if (q.value == plus_infinity<T>) {
      result.status = NormalizeStatus::Redundant;
      return result;
    }
    if (q.below_lowest) {
      result.status = NormalizeStatus::OverflowInfeasible;
      return result;
    }
    result.constraint.c = T(0) - q.value;
  }

  // A rounded n can land on the open end of its octant; that direction is
  // stored under the neighbouring octant, where it is closed.
  if (octant % 2 == 0 && n == T(1)) octant += 1;
  else if (octant % 2 == 1 && n == T(0)) octant = (octant + 1) % kOctants;

  result.constraint.octant = octant;
  result.constraint.n = n;
  return result;
}

}  // namespace hp2d

#endif  // HP2D_NORMALIZER_HPP_
