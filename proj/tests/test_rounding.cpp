#include <doctest.h>

#include <array>
#include <cfenv>
#include <random>
#include <vector>

#include "exact_helpers.hpp"
#include "hp2d/rounding.hpp"

using namespace hp2d;
using hp2d::testing::is_least_upper;
using hp2d::testing::q;

namespace {

constexpr double omega = largest_finite<double>;

template <Scalar T>
void check_random_ops(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const T x = testing::random_operand<T>(rng);
    const T y = testing::random_operand<T>(rng);
    const mpq_class qx = q(double(x)), qy = q(double(y));
    REQUIRE(is_least_upper(ru_add(x, y), qx + qy));
    REQUIRE(is_least_upper(ru_mul(x, y), qx * qy));
    if (y != T(0)) REQUIRE(is_least_upper(ru_div(x, y), qx / qy));
  }
}

struct ModeGuard {
  explicit ModeGuard(int mode) : saved(std::fegetround()) { std::fesetround(mode); }
  ~ModeGuard() { std::fesetround(saved); }
  int saved;
};

}  // namespace

TEST_CASE("ru_add examples") {
  CHECK(ru_add(1.0, 2.0) == 3.0);
  CHECK(ru_add(1.0, 0x1p-60) == std::nextafter(1.0, 2.0));
  CHECK(ru_add(-1.0, -0x1p-60) == -1.0);
  CHECK(ru_add(omega, omega) == plus_infinity<double>);
  CHECK(ru_add(-omega, -omega) == -omega);
  CHECK(ru_add(1.5f, 0x1p-40f) == std::nextafter(1.5f, 2.0f));
}

TEST_CASE("ru_mul examples") {
  CHECK(ru_mul(3.0, 4.0) == 12.0);
  CHECK(ru_mul(0.0, omega) == 0.0);
  const double third = ru_div(1.0, 3.0);
  const double p = ru_mul(third, 3.0);
  CHECK(q(p) >= 1);
  CHECK(is_least_upper(p, q(third) * 3));
  CHECK(ru_mul(omega, 2.0) == plus_infinity<double>);
  CHECK(ru_mul(-omega, 2.0) == -omega);
  // Products far below the smallest subnormal round up to it when positive.
  CHECK(ru_mul(0x1p-1000, 0x1p-1000) == std::numeric_limits<double>::denorm_min());
  CHECK(ru_mul(-0x1p-1000, 0x1p-1000) == 0.0);
}

TEST_CASE("ru_div examples") {
  const double nearest = 1.0 / 3.0;
  CHECK(ru_div(1.0, 3.0) == std::nextafter(nearest, 1.0));
  CHECK(ru_div(-1.0, 3.0) == -nearest);
  CHECK(ru_div(6.0, 2.0) == 3.0);
  CHECK(ru_div(omega, 0.5) == plus_infinity<double>);
  const auto low = ru_div_checked(-omega, 0.5);
  CHECK(low.value == -omega);
  CHECK(low.below_lowest);
  CHECK_FALSE(ru_div_checked(-omega, 1.0).below_lowest);
  CHECK(rd_div(1.0, 3.0) == nearest);
}

TEST_CASE("round-up operations are least upper bounds (double)") { check_random_ops<double>(11, 200000); }

TEST_CASE("round-up operations are least upper bounds (float)") { check_random_ops<float>(12, 200000); }

TEST_CASE("results do not depend on the ambient rounding mode") {
  std::mt19937_64 rng(5);
  std::vector<std::array<double, 2>> ops;
  std::vector<std::array<double, 3>> want;
  for (int i = 0; i < 20000; ++i) {
    const double x = testing::random_operand<double>(rng);
    double y = testing::random_operand<double>(rng);
    if (y == 0.0) y = 1.0;
    ops.push_back({x, y});
    want.push_back({ru_add(x, y), ru_mul(x, y), ru_div(x, y)});
  }
  for (int mode : {FE_UPWARD, FE_DOWNWARD, FE_TOWARDZERO}) {
    ModeGuard guard(mode);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto [x, y] = ops[i];
      REQUIRE(ru_add(x, y) == want[i][0]);
      REQUIRE(ru_mul(x, y) == want[i][1]);
      REQUIRE(ru_div(x, y) == want[i][2]);
    }
    CHECK(std::fegetround() == mode);
  }
}

TEST_CASE("exact_sign_3x3 basics") {
  std::array<SignedTriple<double>, 6> zero{};
  CHECK(exact_sign_3x3<double>(zero) == Sign::Zero);
  auto one = zero;
  one[0] = {false, {1, 1, 1}};
  CHECK(exact_sign_3x3<double>(one) == Sign::Positive);
  one[0].negative = true;
  CHECK(exact_sign_3x3<double>(one) == Sign::Negative);
  // 1 + 2^-100 - 1 with the middle term hidden below every double sum.
  std::array<SignedTriple<double>, 6> tiny{{
      {false, {1, 1, 1}}, {false, {0x1p-50, 0x1p-50, 1}}, {true, {1, 1, 1}}, {}, {}, {}}};
  CHECK(exact_sign_3x3<double>(tiny) == Sign::Positive);
  // Extreme exponents: omega * omega * omega - omega^3 + denorm^3.
  const double dm = std::numeric_limits<double>::denorm_min();
  std::array<SignedTriple<double>, 6> wide{{
      {false, {omega, omega, omega}}, {true, {omega, omega, omega}}, {false, {dm, dm, dm}}, {}, {}, {}}};
  CHECK(exact_sign_3x3<double>(wide) == Sign::Positive);
}

TEST_CASE("exact_sign_3x3 agrees with rational evaluation") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50000; ++i) {
    std::array<SignedTriple<double>, 6> t{};
    const bool wide = i % 4 == 0;
    for (auto& term : t) {
      term.negative = rng() & 1;
      for (auto& f : term.f) f = wide ? testing::random_operand<double>(rng) : testing::random_scaled<double>(rng, -20, 20);
    }
    // Force cancellation: make the last term cancel the others' sum as
    // closely as doubles allow.
    if (i % 2 == 1) {
      mpq_class s = 0;
      for (std::size_t k = 0; k < 5; ++k) {
        mpq_class p = q(t[k].f[0]) * q(t[k].f[1]) * q(t[k].f[2]);
        s += t[k].negative ? mpq_class(-p) : p;
      }
      t[5] = {true, {s.get_d(), 1.0, 1.0}};
    }
    REQUIRE(static_cast<int>(exact_sign_3x3<double>(t)) == testing::rational_sign(t));
  }
}

TEST_CASE("exact sign decides a vertex that naive evaluation misplaces") {
  // Vertex V of lines j, k; line i is placed so V is above it by less
  // than the rounding error of the naive evaluation.
  std::mt19937_64 rng(3);
  int found = 0;
  for (int trial = 0; trial < 200000 && found < 5; ++trial) {
    const double aj = 1, bj = testing::random_scaled<double>(rng, -3, -1);
    const double ak = testing::random_scaled<double>(rng, -3, -1), bk = 1;
    const double cj = testing::random_scaled<double>(rng, 0, 4), ck = testing::random_scaled<double>(rng, 0, 4);
    const mpq_class d = q(aj) * q(bk) - q(ak) * q(bj);
    if (d <= 0) continue;
    const mpq_class r = q(cj) * q(bk) - q(ck) * q(bj);
    const mpq_class s = q(aj) * q(ck) - q(ak) * q(cj);
    const double ai = 1, bi = testing::random_scaled<double>(rng, -2, 0);
    const mpq_class level = (q(ai) * r + q(bi) * s) / d;
    double ci = level.get_d();
    if (q(ci) >= level) ci = std::nextafter(ci, -omega);
    const double x = r.get_d() / d.get_d(), y = s.get_d() / d.get_d();
    const double naive = ai * x + bi * y - ci;
    if (!(naive < 0)) continue;
    const std::array<SignedTriple<double>, 6> terms{{
        {false, {ai, cj, bk}}, {true, {ai, ck, bj}}, {false, {bi, aj, ck}},
        {true, {bi, ak, cj}}, {false, {ci, ak, bj}}, {true, {ci, aj, bk}}}};
    REQUIRE(exact_sign_3x3<double>(terms) == Sign::Positive);
    ++found;
  }
  CHECK(found == 5);
}
