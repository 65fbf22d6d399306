// Exact rational reference: naive half-plane intersection with GMP.
#ifndef HP2D_ORACLE_HPP_
#define HP2D_ORACLE_HPP_

#include <gmpxx.h>

#include <span>
#include <vector>

#include "hp2d/clip_engine.hpp"
#include "hp2d/normalizer.hpp"

namespace hp2d::oracle {

using Rational = mpq_class;

struct RationalPoint {
  Rational x, y;

  friend bool operator==(const RationalPoint& p, const RationalPoint& q) { return p.x == q.x && p.y == q.y; }
  friend bool operator<(const RationalPoint& p, const RationalPoint& q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  }
};

/// a x + b y >= c.
struct RationalLine {
  Rational a, b, c;

  Rational eval(const RationalPoint& p) const { return a * p.x + b * p.y - c; }
  /// Sign of eval(p), computed without temporaries.
  int side(const RationalPoint& p) const;
};

/// A convex set given by its vertices. Polygons are counter-clockwise and
/// start at the lexicographically smallest vertex; a segment lists its two
/// endpoints in lexicographic order.
struct RationalPolygon {
  RegionKind kind = RegionKind::Empty;
  std::vector<RationalPoint> vertices;

  friend bool operator==(const RationalPolygon&, const RationalPolygon&) = default;
};

template <Scalar T>
RationalLine to_rational(const RawConstraint<T>& rc) {
  return {Rational(double(rc.a)), Rational(double(rc.b)), Rational(double(rc.c))};
}

template <Scalar T>
RationalLine to_rational(const NormalizedConstraint<T>& nc) {
  const auto [a, b] = reconstruct_coefficients(nc);
  return {Rational(double(a)), Rational(double(b)), Rational(double(nc.c))};
}

/// Intersection point of two non-parallel lines taken as equations.
RationalPoint intersect(const RationalLine& l1, const RationalLine& l2);

/// The exact set {0 <= x <= mx, 0 <= y <= my} intersected with every
/// constraint. Lines with a = b = 0 are rejected with ContractViolation.
RationalPolygon exact_intersection(std::span<const RationalLine> constraints, const Rational& mx, const Rational& my);

template <Scalar T>
RationalPolygon exact_intersection(std::span<const RawConstraint<T>> constraints, T mx, T my) {
  std::vector<RationalLine> lines;
  lines.reserve(constraints.size());
  for (const auto& rc : constraints) lines.push_back(to_rational(rc));
  return exact_intersection(lines, Rational(double(mx)), Rational(double(my)));
}

/// Puts the vertex list in the canonical order described above.
RationalPolygon canonical(RegionKind kind, std::vector<RationalPoint> vertices);

/// Exact area; zero for points, segments and the empty set.
Rational area(const RationalPolygon& p);

/// The sets described by a region snapshot, in exact terms.
struct SnapshotGeometry {
  RationalPolygon shape;
  std::vector<RationalLine> inequalities;  // p is in the set iff all are >= 0
  std::vector<RationalLine> equations;     // ... and all of these are == 0
};

template <Scalar T>
SnapshotGeometry geometry(const Snapshot<T>& snap) {
  SnapshotGeometry g;
  std::vector<RationalLine> lines;
  for (const auto& e : snap.entries) lines.push_back(to_rational(e.constraint));
  std::vector<RationalPoint> pts;
  switch (snap.kind) {
    case RegionKind::Empty: break;
    case RegionKind::Point:
      g.equations = lines;
      pts.push_back(intersect(lines[0], lines[1]));
      break;
    case RegionKind::Segment:
      g.equations = {lines[0]};
      g.inequalities = {lines[1], lines[2]};
      pts.push_back(intersect(lines[0], lines[1]));
      pts.push_back(intersect(lines[0], lines[2]));
      break;
    case RegionKind::Polygon:
      g.inequalities = lines;
      for (std::size_t i = 0; i < lines.size(); ++i)
        pts.push_back(intersect(lines[(i + lines.size() - 1) % lines.size()], lines[i]));
      break;
  }
  g.shape = canonical(snap.kind, std::move(pts));
  return g;
}

bool contains_point(const SnapshotGeometry& g, const RationalPoint& p);

template <Scalar T>
bool contains_point(const Snapshot<T>& snap, const Rational& x, const Rational& y) {
  if (snap.kind == RegionKind::Empty) return false;
  return contains_point(geometry(snap), RationalPoint{x, y});
}

struct Comparison {
  bool contains_exact = false;
  Rational excess_area;
  bool exact_match = false;
};

Comparison compare(const SnapshotGeometry& region, const RationalPolygon& exact);

template <Scalar T>
Comparison compare(const Snapshot<T>& snap, const RationalPolygon& exact) {
  return compare(geometry(snap), exact);
}

}  // namespace hp2d::oracle

#endif  // HP2D_ORACLE_HPP_
