// Directed random generation of test problems with known exact answers.
//
// Everything here is integer arithmetic. Normals come from sets of
// integer vectors on the boundary of [-8, 8]^2, so that normalizing the
// generated constraints divides by 8 and commits no rounding error.
#ifndef HP2D_TESTGEN_HPP_
#define HP2D_TESTGEN_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hp2d/normalizer.hpp"

namespace hp2d::testgen {

struct IVec {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const IVec&, const IVec&) = default;
};

inline std::int64_t cross(IVec u, IVec v) { return u.x * v.y - u.y * v.x; }
inline std::int64_t dot(IVec u, IVec v) { return u.x * v.x + u.y * v.y; }

using NormalSet = std::vector<IVec>;

/// R^i (8, 2k), i = 0..3, k = -4..3, sorted counter-clockwise from (8, -8).
NormalSet normal_set_32();
/// R^i (8, k), i = 0..3, k = -8..7, sorted the same way.
NormalSet normal_set_64();

/// True when the ccw-sorted normals leave no angular gap >= pi.
bool is_valid_subset(std::span<const IVec> sorted_normals);

/// Calls visit on every valid subset of ns (kept in ns order) whose size
/// lies in [3, max_size]. Enumeration stops early when visit returns false.
void for_each_valid_subset(const NormalSet& ns, std::size_t max_size,
                           const std::function<bool(std::span<const IVec>)>& visit);

/// Deterministic generator. The integer distribution is implemented here
/// rather than taken from <random>, whose distributions differ between
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [lo, hi]; lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next() >> 63) != 0; }
  template <class It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::int64_t>(last - first);
    for (std::int64_t i = n - 1; i > 0; --i) std::swap(first[i], first[uniform(0, i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// A random valid subset with at least min_size elements, each element of
/// ns taken with probability about keep_fraction.
std::vector<IVec> random_valid_subset(const NormalSet& ns, Rng& rng, std::size_t min_size, double keep_fraction);

/// A convex polygon with integer vertices. Vertex i starts edge i:
///   x[i+1] = x[i] + lengths[i] * normals[i].y
///   y[i+1] = y[i] - lengths[i] * normals[i].x
/// and c[i] = normals[i] . (x[i], y[i]).
struct GeneratedPolygon {
  int beta = 1;
  std::vector<IVec> normals;
  std::vector<std::int64_t> t;
  std::vector<std::int64_t> lengths;
  std::vector<std::int64_t> x, y, c;
  std::size_t j = 0;   // index whose edge and successor absorb the correction
  std::int64_t d = 1;  // cross(normals[j], normals[j+1]), or 1 when no correction was needed
  IVec delta{};        // sum of t[p] * normals[p] before correction
};

/// Builds a polygon with the given ccw-sorted valid normals.
GeneratedPolygon build_polygon(std::span<const IVec> normals, int beta, Rng& rng);

/// Same, with prescribed raw lengths t (each in [1, 2^beta)) and shifts.
GeneratedPolygon build_polygon(std::span<const IVec> normals, int beta, std::span<const std::int64_t> t,
                               std::int64_t shift_x, std::int64_t shift_y);

/// Empty string when every structural property of p holds, else a description.
std::string check_polygon(const GeneratedPolygon& p);

/// Integer constraint a x + b y >= c.
struct IntConstraint {
  IVec normal;
  std::int64_t c = 0;

  friend bool operator==(const IntConstraint&, const IntConstraint&) = default;
};

std::vector<IntConstraint> polygon_constraints(const GeneratedPolygon& p);

template <Scalar T>
RawConstraint<T> to_raw(const IntConstraint& ic) {
  return {static_cast<T>(ic.normal.x), static_cast<T>(ic.normal.y), static_cast<T>(ic.c)};
}

/// Side length of the start box [0, 2^(beta+30)]^2.
inline double start_box_extent(int beta) { return std::ldexp(1.0, beta + 30); }

enum class ProbeKind { Level, Gap, Sentinel };

struct Probe {
  IntConstraint constraint;
  ProbeKind kind = ProbeKind::Level;
};

/// Probe constraints nu . (x, y) >= u for one direction nu: every distinct
/// vertex level, gap_samples random levels strictly inside each gap
/// (including the two outer gaps), and the two sentinel levels
/// -2^(beta+22) and 2^(beta+22).
std::vector<Probe> probe_constraints(const GeneratedPolygon& p, IVec nu, Rng& rng, std::size_t gap_samples = 1);

/// Same, for an arbitrary vertex list.
std::vector<Probe> probe_levels(std::span<const IVec> vertices, int beta, IVec nu, Rng& rng,
                                std::size_t gap_samples = 1);

enum class DegenerateKind { Point, Segment, Empty };

struct DegenerateCase {
  DegenerateKind kind = DegenerateKind::Point;
  int beta = 1;
  std::vector<IntConstraint> constraints;
  /// Point: one entry. Segment: the two endpoints. Empty: none.
  std::vector<IVec> expected;
};

DegenerateCase gen_degenerate(DegenerateKind kind, int beta, Rng& rng);

}  // namespace hp2d::testgen

#endif  // HP2D_TESTGEN_HPP_
