#include "hp2d/oracle.hpp"

#include <algorithm>
#include <cassert>

#include "hp2d/errors.hpp"

namespace hp2d::oracle {

namespace {

// Vertex together with the line of the edge that leaves it.
struct Corner {
  RationalPoint p;
  std::size_t line;
};

Rational cross(const RationalPoint& o, const RationalPoint& a, const RationalPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

RationalPoint intersect(const RationalLine& l1, const RationalLine& l2) {
  thread_local Rational d, t;
  mpq_mul(d.get_mpq_t(), l1.a.get_mpq_t(), l2.b.get_mpq_t());
  mpq_mul(t.get_mpq_t(), l2.a.get_mpq_t(), l1.b.get_mpq_t());
  mpq_sub(d.get_mpq_t(), d.get_mpq_t(), t.get_mpq_t());
  if (sgn(d) == 0) throw ContractViolation("intersect: parallel lines");
  RationalPoint p;
  mpq_mul(p.x.get_mpq_t(), l1.c.get_mpq_t(), l2.b.get_mpq_t());
  mpq_mul(t.get_mpq_t(), l2.c.get_mpq_t(), l1.b.get_mpq_t());
  mpq_sub(p.x.get_mpq_t(), p.x.get_mpq_t(), t.get_mpq_t());
  mpq_div(p.x.get_mpq_t(), p.x.get_mpq_t(), d.get_mpq_t());
  mpq_mul(p.y.get_mpq_t(), l1.a.get_mpq_t(), l2.c.get_mpq_t());
  mpq_mul(t.get_mpq_t(), l2.a.get_mpq_t(), l1.c.get_mpq_t());
  mpq_sub(p.y.get_mpq_t(), p.y.get_mpq_t(), t.get_mpq_t());
  mpq_div(p.y.get_mpq_t(), p.y.get_mpq_t(), d.get_mpq_t());
  return p;
}

int RationalLine::side(const RationalPoint& p) const {
  thread_local Rational u, v;
  mpq_mul(u.get_mpq_t(), a.get_mpq_t(), p.x.get_mpq_t());
  mpq_mul(v.get_mpq_t(), b.get_mpq_t(), p.y.get_mpq_t());
  mpq_add(u.get_mpq_t(), u.get_mpq_t(), v.get_mpq_t());
  const int r = mpq_cmp(u.get_mpq_t(), c.get_mpq_t());
  return (r > 0) - (r < 0);
}

RationalPolygon exact_intersection(std::span<const RationalLine> constraints, const Rational& mx, const Rational& my) {
  // Lines are kept in a pool so every vertex is the meet of two input
  // lines; numbers stay as small as the inputs allow.
  std::vector<RationalLine> pool{
      {0, 1, 0}, {-1, 0, -mx}, {0, -1, -my}, {1, 0, 0},
  };
  std::vector<Corner> poly{
      {{0, 0}, 0}, {{mx, 0}, 1}, {{mx, my}, 2}, {{0, my}, 3},
  };
  for (const RationalLine& l : constraints) {
    if (l.a == 0 && l.b == 0) throw ContractViolation("constraint with zero normal");
    if (poly.empty()) break;
    pool.push_back(l);
    const std::size_t li = pool.size() - 1;
    if (poly.size() == 1) {
      if (l.side(poly[0].p) < 0) poly.clear();
      continue;
    }
    std::vector<int> f;
    f.reserve(poly.size());
    for (const Corner& c : poly) f.push_back(l.side(c.p));
    std::vector<Corner> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = (i + 1) % n;
      const int sc = f[i];
      const int sn = f[k];
      if (sc > 0) out.push_back(poly[i]);
      if (sc == 0) out.push_back({poly[i].p, sn < 0 ? li : poly[i].line});
      if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
        const RationalPoint x = intersect(pool[poly[i].line], l);
        out.push_back({x, sc > 0 ? li : poly[i].line});
      }
    }
    // A cut through a vertex or a segment can repeat a point; keep the
    // copy whose leaving edge has positive length.
    std::vector<Corner> uniq;
    for (Corner& c : out) {
      if (!uniq.empty() && uniq.back().p == c.p) uniq.back() = std::move(c);
      else uniq.push_back(std::move(c));
    }
    if (uniq.size() > 1 && uniq.front().p == uniq.back().p) uniq.pop_back();
    poly = std::move(uniq);
  }
  std::vector<RationalPoint> pts;
  for (const Corner& c : poly) pts.push_back(c.p);
  const RegionKind kind = pts.empty()        ? RegionKind::Empty
                          : pts.size() == 1 ? RegionKind::Point
                          : pts.size() == 2 ? RegionKind::Segment
                                            : RegionKind::Polygon;
  return canonical(kind, std::move(pts));
}

RationalPolygon canonical(RegionKind kind, std::vector<RationalPoint> v) {
  RationalPolygon out;
  out.kind = kind;
  if (kind == RegionKind::Segment) {
    std::sort(v.begin(), v.end());
  } else if (kind == RegionKind::Polygon) {
    const auto lowest = std::min_element(v.begin(), v.end());
    std::rotate(v.begin(), lowest, v.end());
  }
  out.vertices = std::move(v);
  return out;
}

Rational area(const RationalPolygon& p) {
  if (p.kind != RegionKind::Polygon) return 0;
  Rational twice = 0;
  for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) twice += cross(p.vertices[0], p.vertices[i], p.vertices[i + 1]);
  return twice / 2;
}

bool contains_point(const SnapshotGeometry& g, const RationalPoint& p) {
  if (g.shape.kind == RegionKind::Empty) return false;
  for (const auto& l : g.inequalities)
    if (l.side(p) < 0) return false;
  for (const auto& l : g.equations)
    if (l.side(p) != 0) return false;
  return true;
}

Comparison compare(const SnapshotGeometry& region, const RationalPolygon& exact) {
  Comparison c;
  if (region.shape.kind == RegionKind::Empty) {
    c.contains_exact = exact.kind == RegionKind::Empty;
  } else {
    c.contains_exact = std::all_of(exact.vertices.begin(), exact.vertices.end(),
                                   [&](const RationalPoint& p) { return contains_point(region, p); });
  }
  c.exact_match = region.shape == exact;
  c.excess_area = c.exact_match ? Rational(0) : area(region.shape) - area(exact);
  return c;
}

}  // namespace hp2d::oracle
