// This translation unit is compiled with -frounding-math and
// -ffp-contract=off: the error-free transformations below rely on every
// + - * being a single correctly rounded operation in round-to-nearest.
#include "hp2d/rounding.hpp"

#include <algorithm>
#include <cassert>
#include <cfenv>
#include <cmath>
#include <vector>

namespace hp2d {

namespace {

// Switches the calling thread to round-to-nearest for the lifetime of the
// object and restores the previous mode afterwards.
class NearestRounding {
 public:
  NearestRounding() : saved_(std::fegetround()) {
    if (saved_ != FE_TONEAREST) std::fesetround(FE_TONEAREST);
  }
  ~NearestRounding() {
    if (saved_ != FE_TONEAREST) std::fesetround(saved_);
  }
  NearestRounding(const NearestRounding&) = delete;
  NearestRounding& operator=(const NearestRounding&) = delete;

 private:
  int saved_;
};

template <Scalar T>
struct Traits;

template <>
struct Traits<double> {
  static constexpr double splitter = 134217729.0;  // 2^27 + 1
  // Dekker products of operands in this range neither overflow nor lose
  // low-order bits to underflow.
  static constexpr double safe_lo = 0x1p-480;
  static constexpr double safe_hi = 0x1p+480;
};

template <>
struct Traits<float> {
  static constexpr float splitter = 4097.0f;  // 2^12 + 1
  static constexpr float safe_lo = 0x1p-40f;
  static constexpr float safe_hi = 0x1p+40f;
};

template <Scalar T>
bool in_safe_range(T v) {
  const T a = std::fabs(v);
  return a >= Traits<T>::safe_lo && a <= Traits<T>::safe_hi;
}

template <Scalar T>
T canonical(T v) {
  return v == T(0) ? T(0) : v;
}

template <Scalar T>
T next_up(T v) {
  return std::nextafter(v, plus_infinity<T>);
}

template <Scalar T>
void two_sum(T a, T b, T& s, T& err) {
  s = a + b;
  const T bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

template <Scalar T>
void split(T a, T& hi, T& lo) {
  const T c = Traits<T>::splitter * a;
  hi = c - (c - a);
  lo = a - hi;
}

template <Scalar T>
void two_product(T a, T b, T& p, T& err) {
  p = a * b;
  T ah, al, bh, bl;
  split(a, ah, al);
  split(b, bh, bl);
  err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
}

// Overflowed nearest results: +inf means the exact value is above omega,
// -inf means it is below -omega and the least upper bound is -omega.
template <Scalar T>
T overflow_bound(T c) {
  return c > 0 ? plus_infinity<T> : -largest_finite<T>;
}

template <Scalar T>
T add_up(T x, T y) {
  NearestRounding guard;
  T s, e;
  s = x + y;
  if (std::isinf(s)) return overflow_bound(s);
  two_sum(x, y, s, e);
  if (e > 0) s = next_up(s);
  return canonical(s);
}

template <Scalar T>
T mul_up_scaled(T x, T y) {
  const int ex = std::ilogb(x);
  const int ey = std::ilogb(y);
  const T mx = std::scalbn(x, -ex);
  const T my = std::scalbn(y, -ey);
  T p, e;
  two_product(mx, my, p, e);
  const int scale = ex + ey;
  const T c = std::scalbn(p, scale);
  if (std::isinf(c)) return overflow_bound(c);
  // back - p is exact, so comparing it against e decides c >= x * y.
  const T back = std::scalbn(c, -scale);
  const T diff = back - p;
  return canonical(diff >= e ? c : next_up(c));
}

template <Scalar T>
T mul_up(T x, T y) {
  if (x == T(0) || y == T(0)) return T(0);
  NearestRounding guard;
  if constexpr (std::same_as<T, float>) {
    // The product of two floats is exact in double.
    const double p = static_cast<double>(x) * static_cast<double>(y);
    const float c = static_cast<float>(p);
    if (std::isinf(c)) return overflow_bound(c);
    return canonical(static_cast<double>(c) < p ? next_up(c) : c);
  } else {
    if (in_safe_range(x) && in_safe_range(y)) {
      T p, e;
      two_product(x, y, p, e);
      return canonical(e > 0 ? next_up(p) : p);
    }
    return mul_up_scaled(x, y);
  }
}

template <Scalar T>
Quotient<T> div_up(T x, T y) {
  ++op_counters().divisions;
  if (x == T(0)) return {T(0), false};
  NearestRounding guard;
  if (in_safe_range(x) && in_safe_range(y)) {
    const T q = x / y;
    T p, e;
    two_product(q, y, p, e);
    // x - p is exact (Sterbenz); the rounded difference keeps the sign of
    // the remainder x - q * y.
    const T r = (x - p) - e;
    const bool low = r != 0 && ((r > 0) == (y > 0));
    return {canonical(low ? next_up(q) : q), false};
  }
  const int ex = std::ilogb(x);
  const int ey = std::ilogb(y);
  const T mx = std::scalbn(x, -ex);
  const T my = std::scalbn(y, -ey);
  const T q = mx / my;
  const T r = std::fma(-q, my, mx);
  const int scale = ex - ey;
  const T c = std::scalbn(q, scale);
  if (std::isinf(c)) return {overflow_bound(c), c < 0};
  const T back = std::scalbn(c, -scale);
  const T diff = back - q;
  // back * my - mx = diff * my - r, and its sign needs no exact product.
  const T t = std::fma(diff, my, -r);
  const int cmp = (t > 0) - (t < 0);
  const int rel = (my > 0) ? cmp : -cmp;  // sign of c - x / y
  if (rel < 0) return {canonical(next_up(c)), false};
  return {canonical(c), c == -largest_finite<T> && rel > 0};
}

// Nonoverlapping expansion, components in increasing magnitude, no zeros.
class Expansion {
 public:
  void clear() { size_ = 0; }

  void grow(double b) {
    if (b == 0.0) return;
    double q = b;
    std::size_t out = 0;
    for (std::size_t i = 0; i < size_; ++i) {
      double s, h;
      two_sum(q, parts_[i], s, h);
      q = s;
      if (h != 0.0) parts_[out++] = h;
    }
    if (q != 0.0) parts_[out++] = q;
    size_ = out;
    assert(size_ <= parts_.size());
  }

  Sign sign() const {
    if (size_ == 0) return Sign::Zero;
    return parts_[size_ - 1] > 0 ? Sign::Positive : Sign::Negative;
  }

 private:
  std::array<double, 4 * 16 + 1> parts_{};
  std::size_t size_ = 0;
};

constexpr double kFastLo = 0x1p-200;
constexpr double kFastHi = 0x1p+200;

bool fast_factor(double v) {
  const double a = std::fabs(v);
  return a == 0.0 || (a >= kFastLo && a <= kFastHi);
}

// Exact expansion of f0 * f1 * f2 as four doubles. Valid when the factors
// are small enough in exponent that no component underflows.
std::array<double, 4> triple_product(double f0, double f1, double f2) {
  double p, e, q1, q1e, q2, q2e;
  two_product(f0, f1, p, e);
  two_product(p, f2, q1, q1e);
  two_product(e, f2, q2, q2e);
  return {q2e, q1e, q2, q1};
}

// Two's complement fixed-point accumulator for the general path. Every
// nonzero double factor is an integer below 2^53 times a power of two, so
// each triple product is a 159-bit integer shifted by a common exponent.
class WideAccumulator {
 public:
  explicit WideAccumulator(std::size_t limbs) : limbs_(limbs, 0) {}

  void add(const std::array<std::uint64_t, 3>& magnitude, std::size_t shift, bool negative) {
    std::array<std::uint64_t, 5> v{};
    const std::size_t bit = shift % 64;
    for (std::size_t i = 0; i < 3; ++i) {
      v[i] |= magnitude[i] << bit;
      if (bit != 0) v[i + 1] |= magnitude[i] >> (64 - bit);
    }
    const std::size_t word = shift / 64;
    if (negative) {
      std::uint64_t borrow = 0;
      for (std::size_t i = word; i < limbs_.size(); ++i) {
        const std::uint64_t sub = i - word < v.size() ? v[i - word] : 0;
        if (sub == 0 && borrow == 0 && i - word >= v.size()) break;
        const std::uint64_t before = limbs_[i];
        limbs_[i] = before - sub - borrow;
        borrow = (before < sub) || (before - sub < borrow) ? 1 : 0;
      }
    } else {
      std::uint64_t carry = 0;
      for (std::size_t i = word; i < limbs_.size(); ++i) {
        const std::uint64_t add = i - word < v.size() ? v[i - word] : 0;
        if (add == 0 && carry == 0 && i - word >= v.size()) break;
        const unsigned __int128 s = static_cast<unsigned __int128>(limbs_[i]) + add + carry;
        limbs_[i] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
      }
    }
  }

  Sign sign() const {
    if (limbs_.back() >> 63) return Sign::Negative;
    for (std::uint64_t l : limbs_)
      if (l != 0) return Sign::Positive;
    return Sign::Zero;
  }

 private:
  std::vector<std::uint64_t> limbs_;
};

struct IntegerTerm {
  long exponent;
  std::array<std::uint64_t, 3> magnitude;
  bool negative;
};

IntegerTerm to_integer_term(const SignedTriple<double>& t) {
  IntegerTerm out{0, {}, t.negative};
  std::array<std::uint64_t, 3> m{};
  for (std::size_t k = 0; k < 3; ++k) {
    int e = 0;
    const double fr = std::frexp(t.f[k], &e);
    if (fr < 0) out.negative = !out.negative;
    m[k] = static_cast<std::uint64_t>(std::ldexp(std::fabs(fr), 53));
    out.exponent += e - 53;
  }
  const unsigned __int128 p01 = static_cast<unsigned __int128>(m[0]) * m[1];
  const unsigned __int128 t0 = static_cast<unsigned __int128>(static_cast<std::uint64_t>(p01)) * m[2];
  const unsigned __int128 t1 = static_cast<unsigned __int128>(static_cast<std::uint64_t>(p01 >> 64)) * m[2] + (t0 >> 64);
  out.magnitude = {static_cast<std::uint64_t>(t0), static_cast<std::uint64_t>(t1),
                   static_cast<std::uint64_t>(t1 >> 64)};
  return out;
}

}  // namespace

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "negative";
    case Sign::Zero: return "zero";
    case Sign::Positive: return "positive";
  }
  return "?";
}

OpCounters& op_counters() {
  thread_local OpCounters counters;
  return counters;
}

template <Scalar T>
T ru_add(T x, T y) {
  return add_up(x, y);
}

template <Scalar T>
T ru_mul(T x, T y) {
  return mul_up(x, y);
}

template <Scalar T>
T ru_div(T x, T y) {
  return div_up(x, y).value;
}

template <Scalar T>
Quotient<T> ru_div_checked(T x, T y) {
  return div_up(x, y);
}

Sign exact_sign_sum(std::span<const SignedTriple<double>> terms) {
  assert(terms.size() <= 16);
  NearestRounding guard;
  const bool fast = std::all_of(terms.begin(), terms.end(), [](const SignedTriple<double>& t) {
    return fast_factor(t.f[0]) && fast_factor(t.f[1]) && fast_factor(t.f[2]);
  });
  Expansion acc;
  if (fast) {
    for (const auto& t : terms) {
      if (t.f[0] == 0.0 || t.f[1] == 0.0 || t.f[2] == 0.0) continue;
      for (double part : triple_product(t.f[0], t.f[1], t.f[2])) acc.grow(t.negative ? -part : part);
    }
    return acc.sign();
  }

  std::array<IntegerTerm, 16> ints;
  std::size_t count = 0;
  for (const auto& t : terms) {
    if (t.f[0] == 0.0 || t.f[1] == 0.0 || t.f[2] == 0.0) continue;
    ints[count++] = to_integer_term(t);
  }
  if (count == 0) return Sign::Zero;
  long lo = ints[0].exponent, hi = ints[0].exponent;
  for (std::size_t i = 1; i < count; ++i) {
    lo = std::min(lo, ints[i].exponent);
    hi = std::max(hi, ints[i].exponent);
  }
  // 159 magnitude bits, 4 bits of carry for 16 terms and a sign bit.
  WideAccumulator acc_wide(static_cast<std::size_t>(hi - lo + 192) / 64 + 2);
  for (std::size_t i = 0; i < count; ++i)
    acc_wide.add(ints[i].magnitude, static_cast<std::size_t>(ints[i].exponent - lo), ints[i].negative);
  return acc_wide.sign();
}

template float ru_add<float>(float, float);
template double ru_add<double>(double, double);
template float ru_mul<float>(float, float);
template double ru_mul<double>(double, double);
template float ru_div<float>(float, float);
template double ru_div<double>(double, double);
template Quotient<float> ru_div_checked<float>(float, float);
template Quotient<double> ru_div_checked<double>(double, double);

}  // namespace hp2d
