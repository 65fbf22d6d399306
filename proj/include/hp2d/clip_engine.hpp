// Incremental clipping of a box by half-planes.
//
// A Region starts as the box [0, mx] x [0, my] and absorbs one constraint at
// a time. The stored region always contains the exact feasible set: every
// constraint is relaxed outward by normalize(), and all topological
// decisions (keep, cut, degenerate, empty) are made with exact signs.
#ifndef HP2D_CLIP_ENGINE_HPP_
#define HP2D_CLIP_ENGINE_HPP_

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hp2d/errors.hpp"
#include "hp2d/normalizer.hpp"
#include "hp2d/region_store.hpp"
#include "hp2d/rounding.hpp"
#include "hp2d/vertex_bounds.hpp"

namespace hp2d {

enum class RegionKind { Empty, Point, Segment, Polygon };

inline const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Empty: return "empty";
    case RegionKind::Point: return "point";
    case RegionKind::Segment: return "segment";
    case RegionKind::Polygon: return "polygon";
  }
  return "?";
}

/// Intersection of two lines listed counter-clockwise (their cross product
/// is positive), with its enclosure.
template <Scalar T>
struct Vertex {
  NormalizedConstraint<T> first;
  NormalizedConstraint<T> second;
  VertexBox<T> box;

  static Vertex of(const NormalizedConstraint<T>& a, const NormalizedConstraint<T>& b) {
    return {a, b, compute_vertex_box(a, b)};
  }
};

struct EmptyRegion {};

template <Scalar T>
struct PointRegion {
  Vertex<T> vertex;
};

/// The points of `line` (taken as an equation) that satisfy both caps.
/// ends[i] is the intersection of line and caps[i].
template <Scalar T>
struct SegmentRegion {
  NormalizedConstraint<T> line;
  std::array<NormalizedConstraint<T>, 2> caps;
  std::array<Vertex<T>, 2> ends;
};

template <Scalar T>
struct SnapshotEntry {
  NormalizedConstraint<T> constraint;
  std::optional<VertexBox<T>> box;

  friend bool operator==(const SnapshotEntry&, const SnapshotEntry&) = default;
};

/// Polygon: one entry per edge, counter-clockwise from the lowest octant,
///   each with the box of the edge's start vertex.
/// Point: the two defining constraints; the first carries the box.
/// Segment: the line, then each cap with the box of its endpoint.
template <Scalar T>
struct Snapshot {
  RegionKind kind = RegionKind::Empty;
  std::vector<SnapshotEntry<T>> entries;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

template <Scalar T, class Store = RegionStore<T>>
  requires EdgeContainer<Store> && std::same_as<typename Store::scalar_type, T>
class Region {
 public:
  /// The box [0, mx] x [0, my]. Requires 0 < mx, 0 < my and mx + my below
  /// largest_finite<T> (checked exactly).
  static Region box(T mx, T my) {
    if (!std::isfinite(mx) || !std::isfinite(my) || !(mx > T(0)) || !(my > T(0)))
      throw BoundViolation("box extents must be finite and positive");
    const std::array<SignedTriple<double>, 3> terms{{
        {false, {double(mx), 1.0, 1.0}},
        {false, {double(my), 1.0, 1.0}},
        {true, {double(largest_finite<T>), 1.0, 1.0}},
    }};
    if (exact_sign_sum(terms) != Sign::Negative) throw BoundViolation("mx + my must be below the largest finite value");

    const std::array<NormalizedConstraint<T>, 4> sides{{
        {0, T(0), T(0)},
        {2, T(0), T(0)},
        {4, T(0), T(0) - mx},
        {6, T(0), T(0) - my},
    }};
    Store store;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& prev = sides[(i + 3) % 4];
      store.insert_edge(sides[i].octant, 0, Edge<T>{sides[i].n, sides[i].c, compute_vertex_box(prev, sides[i])});
    }
    Region r;
    r.state_ = std::move(store);
    return r;
  }

  RegionKind kind() const { return static_cast<RegionKind>(state_.index()); }
  bool is_empty() const { return kind() == RegionKind::Empty; }

  const Store* polygon() const { return std::get_if<Store>(&state_); }
  const PointRegion<T>* point() const { return std::get_if<PointRegion<T>>(&state_); }
  const SegmentRegion<T>* segment() const { return std::get_if<SegmentRegion<T>>(&state_); }

  /// Intersects the region with rc (relaxed outward by normalization).
  void add_constraint(const RawConstraint<T>& rc) {
    const NormalizeResult<T> nr = normalize(rc);
    switch (nr.status) {
      case NormalizeStatus::Redundant: return;
      case NormalizeStatus::OverflowInfeasible: state_ = EmptyRegion{}; return;
      case NormalizeStatus::Ok: break;
    }
    add_normalized(nr.constraint);
  }

  void add_normalized(const NormalizedConstraint<T>& line) {
    std::visit([&](auto& s) { clip(s, line); }, state_);
  }

  Snapshot<T> snapshot() const {
    Snapshot<T> out;
    out.kind = kind();
    if (const Store* s = polygon()) {
      Position p = s->first();
      for (std::size_t i = 0; i < s->size(); ++i, p = s->next(p))
        out.entries.push_back({s->constraint(p), s->edge(p).vbox});
    } else if (const auto* pt = point()) {
      out.entries.push_back({pt->vertex.first, pt->vertex.box});
      out.entries.push_back({pt->vertex.second, std::nullopt});
    } else if (const auto* sg = segment()) {
      out.entries.push_back({sg->line, std::nullopt});
      for (std::size_t i = 0; i < 2; ++i) out.entries.push_back({sg->caps[i], sg->ends[i].box});
    }
    return out;
  }

  /// nullopt when the region is structurally valid.
  std::optional<std::string> validate() const {
    if (const Store* s = polygon()) {
      if (auto err = s->check_invariants()) return err;
      if (s->size() < 3) return "polygon with fewer than three edges";
      Position p = s->first();
      for (std::size_t i = 0; i < s->size(); ++i, p = s->next(p)) {
        const auto prev = s->constraint(s->previous(p));
        const auto cur = s->constraint(p);
        if (cross_sign(prev, cur) != Sign::Positive) return "consecutive edges do not turn left";
        if (!(s->edge(p).vbox == compute_vertex_box(prev, cur))) return "stale vertex box";
      }
    } else if (const auto* pt = point()) {
      if (cross_sign(pt->vertex.first, pt->vertex.second) != Sign::Positive) return "point lines not in order";
    } else if (const auto* sg = segment()) {
      for (const auto& e : sg->ends)
        if (cross_sign(e.first, e.second) != Sign::Positive) return "segment end lines not in order";
    }
    return std::nullopt;
  }

 private:
  Region() = default;

  static SideResult side_of(const Vertex<T>& v, const NormalizedConstraint<T>& line) {
    return side_of_constraint(v.box, line, v.first, v.second);
  }

  static Vertex<T> meet(const NormalizedConstraint<T>& a, const NormalizedConstraint<T>& b) {
    return cross_sign(a, b) == Sign::Positive ? Vertex<T>::of(a, b) : Vertex<T>::of(b, a);
  }

  void clip(EmptyRegion&, const NormalizedConstraint<T>&) {}

  void clip(PointRegion<T>& p, const NormalizedConstraint<T>& line) {
    if (side_of(p.vertex, line) == SideResult::StrictlyInfeasible) state_ = EmptyRegion{};
  }

  void clip(SegmentRegion<T>& sg, const NormalizedConstraint<T>& line) {
    const std::array<SideResult, 2> side{side_of(sg.ends[0], line), side_of(sg.ends[1], line)};
    const auto bad = [](SideResult s) { return s == SideResult::StrictlyInfeasible; };
    if (!bad(side[0]) && !bad(side[1])) return;
    if (bad(side[0]) && bad(side[1])) {
      state_ = EmptyRegion{};
      return;
    }
    const std::size_t lost = bad(side[0]) ? 0 : 1;
    const std::size_t kept = 1 - lost;
    if (side[kept] == SideResult::OnLine) {
      state_ = PointRegion<T>{sg.ends[kept]};
      return;
    }
    sg.caps[lost] = line;
    sg.ends[lost] = meet(sg.line, line);
  }

  void clip(Store& s, const NormalizedConstraint<T>& line) {
    const auto side_at = [&](Position p) {
      return side_of_constraint(s.edge(p).vbox, line, s.constraint(s.previous(p)), s.constraint(p));
    };
    const DirectionKey<T> key = direction_of(line);
    // The start vertex of the first edge not before key minimizes the
    // left-hand side over the polygon.
    const Position pa = s.locate_direction(key);
    if (side_at(pa) != SideResult::StrictlyInfeasible) return;

    const DirectionKey<T> away = opposite(key);
    const Position pf = s.locate_direction(away);
    const SideResult sf = side_at(pf);
    if (sf == SideResult::StrictlyInfeasible) {
      state_ = EmptyRegion{};
      return;
    }
    if (sf == SideResult::OnLine) {
      const Position prev = s.previous(pf);
      const auto ef = s.constraint(pf);
      const Vertex<T> start{s.constraint(prev), ef, s.edge(pf).vbox};
      if (compare_directions(direction_of(ef), away) == Order::Equal) {
        const Position next = s.next(pf);
        const Vertex<T> stop{ef, s.constraint(next), s.edge(next).vbox};
        state_ = SegmentRegion<T>{ef, {start.first, stop.second}, {start, stop}};
      } else {
        state_ = PointRegion<T>{start};
      }
      return;
    }
    cut(s, line, s.ordinal(pa), s.ordinal(pf), side_at);
  }

  // A is infeasible and F strictly feasible: the infeasible vertices form
  // one circular run containing A. Binary search both monotone chains for
  // its ends, drop the edges between them, and splice in `line`.
  template <class SideAt>
  static void cut(Store& s, const NormalizedConstraint<T>& line, std::size_t oa, std::size_t of, SideAt& side_at) {
    const std::size_t n = s.size();
    const auto vertex = [&](std::size_t ord) { return s.at(ord % n); };

    // First vertex on the chain A -> F that is not infeasible.
    std::size_t lo = 1, hi = (of + n - oa) % n;
    SideResult s_hi = SideResult::StrictlyFeasible;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const SideResult sm = side_at(vertex(oa + mid));
      if (sm == SideResult::StrictlyInfeasible) {
        lo = mid + 1;
      } else {
        hi = mid;
        s_hi = sm;
      }
    }
    const std::size_t p_ord = (oa + hi) % n;
    const SideResult s_p = s_hi;

    // Last vertex on the chain F -> A that is not infeasible.
    std::size_t keep = 0, drop = (oa + n - of) % n;
    SideResult s_keep = SideResult::StrictlyFeasible;
    while (drop - keep > 1) {
      const std::size_t mid = keep + (drop - keep) / 2;
      const SideResult sm = side_at(vertex(of + mid));
      if (sm == SideResult::StrictlyInfeasible) {
        drop = mid;
      } else {
        keep = mid;
        s_keep = sm;
      }
    }
    const std::size_t q_ord = (of + keep) % n;
    const SideResult s_q = s_keep;

    // An edge whose far end lies on the line collapses to a point.
    const std::size_t first_kept = s_p == SideResult::StrictlyFeasible ? (p_ord + n - 1) % n : p_ord;
    const std::size_t last_kept = s_q == SideResult::StrictlyFeasible ? q_ord : (q_ord + n - 1) % n;
    const std::size_t removed = (first_kept + n - last_kept - 1) % n;
    const int last_octant = s.at(last_kept).octant;

    std::size_t new_last = last_kept;
    if (removed > 0) {
      const std::size_t r0 = (last_kept + 1) % n;
      if (r0 + removed > n) new_last -= r0 + removed - n;
      else if (last_kept >= r0 + removed) new_last -= removed;
      s.remove_span(r0, removed);
    }
    const std::size_t remaining = s.size();
    std::size_t pos = new_last + 1;
    if (pos == remaining && line.octant < last_octant) pos = 0;
    std::size_t rank = pos;
    for (int o = 0; o < line.octant; ++o) rank -= s.octant_size(o);

    const Position lp = s.insert_edge(line.octant, rank, Edge<T>{line.n, line.c, {}});
    const Position before = s.previous(lp);
    const Position after = s.next(lp);
    s.edge(lp).vbox = compute_vertex_box(s.constraint(before), line);
    s.edge(after).vbox = compute_vertex_box(line, s.constraint(after));
  }

  std::variant<EmptyRegion, PointRegion<T>, SegmentRegion<T>, Store> state_;
};

template <Scalar T>
Region<T> new_box(T mx, T my) {
  return Region<T>::box(mx, my);
}

template <Scalar T>
Region<T> add_constraint(Region<T> region, const RawConstraint<T>& rc) {
  region.add_constraint(rc);
  return region;
}

}  // namespace hp2d

#endif  // HP2D_CLIP_ENGINE_HPP_
