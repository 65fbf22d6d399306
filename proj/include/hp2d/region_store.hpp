// Edge storage for a convex polygon.
//
// All edges live in one array with slack. The edges of octant o occupy the
// slice [begin, end) of range o, sorted counter-clockwise. Active ranges
// and a sentinel form a circular doubly linked list in octant order; the
// sentinel's slice frames the whole array. Inactive ranges have every
// field set to kNull.
#ifndef HP2D_REGION_STORE_HPP_
#define HP2D_REGION_STORE_HPP_

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hp2d/normalizer.hpp"
#include "hp2d/vertex_bounds.hpp"

namespace hp2d {

inline constexpr std::ptrdiff_t kNull = -1;
inline constexpr int kSentinel = kOctants;

template <Scalar T>
struct Edge {
  T n{};
  T c{};
  VertexBox<T> vbox{};  // box of the edge's counter-clockwise start vertex

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct OctantRange {
  std::ptrdiff_t begin = kNull;
  std::ptrdiff_t end = kNull;
  std::ptrdiff_t previous = kNull;
  std::ptrdiff_t next = kNull;

  bool active() const { return begin != kNull; }
  std::size_t size() const { return active() ? static_cast<std::size_t>(end - begin) : 0; }
};

/// An edge slot. Valid only until the next mutation of the store.
struct Position {
  int octant = 0;
  std::size_t index = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

template <Scalar T>
class RegionStore {
 public:
  using scalar_type = T;
  static constexpr std::size_t kInitialCapacity = 16;

  explicit RegionStore(std::size_t capacity = kInitialCapacity) : edges_(std::max<std::size_t>(capacity, 1)) {
    ranges_[kSentinel] = {0, static_cast<std::ptrdiff_t>(edges_.size()), kSentinel, kSentinel};
  }

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t capacity() const { return edges_.size(); }
  const OctantRange& range(int octant) const { return ranges_[octant]; }
  const OctantRange& sentinel() const { return ranges_[kSentinel]; }
  std::size_t octant_size(int octant) const { return ranges_[octant].size(); }

  Position first() const {
    assert(!empty());
    const auto o = static_cast<int>(ranges_[kSentinel].next);
    return {o, static_cast<std::size_t>(ranges_[o].begin)};
  }

  Position next(Position p) const {
    if (static_cast<std::ptrdiff_t>(p.index) + 1 < ranges_[p.octant].end) return {p.octant, p.index + 1};
    auto o = ranges_[p.octant].next;
    if (o == kSentinel) o = ranges_[kSentinel].next;
    return {static_cast<int>(o), static_cast<std::size_t>(ranges_[o].begin)};
  }

  Position previous(Position p) const {
    if (static_cast<std::ptrdiff_t>(p.index) > ranges_[p.octant].begin) return {p.octant, p.index - 1};
    auto o = ranges_[p.octant].previous;
    if (o == kSentinel) o = ranges_[kSentinel].previous;
    return {static_cast<int>(o), static_cast<std::size_t>(ranges_[o].end - 1)};
  }

  /// The edge with the given counter-clockwise rank, counted from the
  /// first edge of the lowest active octant.
  Position at(std::size_t ordinal) const {
    assert(ordinal < count_);
    for (auto o = ranges_[kSentinel].next; o != kSentinel; o = ranges_[o].next) {
      const std::size_t sz = ranges_[o].size();
      if (ordinal < sz) return {static_cast<int>(o), static_cast<std::size_t>(ranges_[o].begin) + ordinal};
      ordinal -= sz;
    }
    assert(false);
    return {};
  }

  std::size_t ordinal(Position p) const {
    std::size_t before = 0;
    for (auto o = ranges_[kSentinel].next; o != p.octant; o = ranges_[o].next) before += ranges_[o].size();
    return before + (p.index - static_cast<std::size_t>(ranges_[p.octant].begin));
  }

  const Edge<T>& edge(Position p) const { return edges_[p.index]; }
  Edge<T>& edge(Position p) { return edges_[p.index]; }

  NormalizedConstraint<T> constraint(Position p) const {
    return {p.octant, edges_[p.index].n, edges_[p.index].c};
  }

  DirectionKey<T> key(Position p) const { return {p.octant, edges_[p.index].n}; }

  /// First edge, circularly, whose direction is not before key.
  Position locate_direction(const DirectionKey<T>& key) const {
    assert(!empty());
    auto& counters = op_counters();
    for (int o = key.octant; o < kOctants; ++o) {
      const OctantRange& r = ranges_[o];
      if (!r.active()) continue;
      if (o > key.octant) return {o, static_cast<std::size_t>(r.begin)};
      std::ptrdiff_t lo = r.begin, hi = r.end;
      while (lo < hi) {
        const std::ptrdiff_t mid = lo + (hi - lo) / 2;
        ++counters.direction_comparisons;
        if (compare_directions(DirectionKey<T>{o, edges_[mid].n}, key) == Order::Before) lo = mid + 1;
        else hi = mid;
      }
      if (lo < r.end) return {o, static_cast<std::size_t>(lo)};
    }
    return first();
  }

  /// Inserts e as the rank-th edge of its octant. The caller guarantees
  /// that sortedness is preserved.
  Position insert_edge(int octant, std::size_t rank, const Edge<T>& e) {
    assert(octant >= 0 && octant < kOctants);
    assert(rank <= octant_size(octant));
    for (;;) {
      OctantRange& r = ranges_[octant];
      if (!r.active()) {
        const auto pred = predecessor_of_inactive(octant);
        const auto succ = successor_of_inactive(octant);
        const std::ptrdiff_t lo = pred == kSentinel ? 0 : ranges_[pred].end;
        const std::ptrdiff_t hi = succ == kSentinel ? capacity_signed() : ranges_[succ].begin;
        if (hi > lo) {
          const std::ptrdiff_t slot = lo + (hi - lo - 1) / 2;
          edges_[slot] = e;
          r.begin = slot;
          r.end = slot + 1;
          link_after(pred, octant);
          ++count_;
          return {octant, static_cast<std::size_t>(slot)};
        }
        if (pred != kSentinel && bump_down(pred)) continue;
        if (succ != kSentinel && bump_up(succ)) continue;
        reorganize(octant);
        continue;
      }
      const auto at = r.begin + static_cast<std::ptrdiff_t>(rank);
      if (r.end < upper_limit(octant)) {
        std::move_backward(edges_.begin() + at, edges_.begin() + r.end, edges_.begin() + r.end + 1);
        edges_[at] = e;
        ++r.end;
        ++count_;
        return {octant, static_cast<std::size_t>(at)};
      }
      if (r.begin > lower_limit(octant)) {
        std::move(edges_.begin() + r.begin, edges_.begin() + at, edges_.begin() + r.begin - 1);
        edges_[at - 1] = e;
        --r.begin;
        ++count_;
        return {octant, static_cast<std::size_t>(at - 1)};
      }
      if (r.previous != kSentinel && bump_down(r.previous)) continue;
      if (r.next != kSentinel && bump_up(r.next)) continue;
      reorganize(octant);
    }
  }

  /// Removes count edges starting at the given ordinal, wrapping around.
  void remove_span(std::size_t first_ordinal, std::size_t count) {
    assert(count > 0 && count <= count_ && first_ordinal < count_);
    struct Cut {
      int octant;
      std::size_t lo, hi;
    };
    std::array<Cut, 2 * kOctants> cuts{};
    std::size_t ncuts = 0;
    const std::size_t total = count_;
    const std::array<std::pair<std::size_t, std::size_t>, 2> spans{{
        {first_ordinal, std::min(first_ordinal + count, total)},
        {0, first_ordinal + count > total ? first_ordinal + count - total : 0},
    }};
    std::size_t offset = 0;
    for (auto o = ranges_[kSentinel].next; o != kSentinel; o = ranges_[o].next) {
      const std::size_t sz = ranges_[o].size();
      // second span first: it holds the lower ranks when both hit the octant
      for (std::size_t s = 2; s-- > 0;) {
        const std::size_t lo = std::max(spans[s].first, offset);
        const std::size_t hi = std::min(spans[s].second, offset + sz);
        if (lo < hi) cuts[ncuts++] = {static_cast<int>(o), lo - offset, hi - offset};
      }
      offset += sz;
    }
    // Erase from the right so earlier ranks stay valid.
    for (std::size_t i = ncuts; i-- > 0;) erase_ranks(cuts[i].octant, cuts[i].lo, cuts[i].hi);
    count_ -= count;
  }

  /// Removes the circular span [from, to); from != to.
  void remove_edges(Position from, Position to) {
    const std::size_t a = ordinal(from);
    const std::size_t b = ordinal(to);
    assert(a != b);
    remove_span(a, (b + count_ - a) % count_);
  }

  /// nullopt when every structural invariant holds, else a description of
  /// the first violation found.
  std::optional<std::string> check_invariants() const {
    const OctantRange& s = ranges_[kSentinel];
    if (s.begin != 0 || s.end != capacity_signed()) return "sentinel does not frame the edge array";
    std::size_t active = 0, total = 0;
    for (int o = 0; o < kOctants; ++o) {
      const OctantRange& r = ranges_[o];
      if (!r.active()) {
        if (r.end != kNull || r.previous != kNull || r.next != kNull)
          return "inactive range " + std::to_string(o) + " has non-null fields";
        continue;
      }
      ++active;
      if (r.begin >= r.end || r.end > capacity_signed() || r.begin < 0)
        return "active range " + std::to_string(o) + " has an empty or out-of-bounds slice";
      if (r.previous == kNull || r.next == kNull) return "circular list broken";
      total += r.size();
    }
    if (total != count_) return "edge count mismatch";

    std::ptrdiff_t node = s.next, prev = kSentinel, last_end = 0;
    int last_octant = -1;
    std::size_t visited = 0;
    while (node != kSentinel) {
      if (node < 0 || node >= kOctants || !ranges_[node].active() || ranges_[node].previous != prev ||
          ++visited > active)
        return "circular list broken";
      if (node <= last_octant) return "active ranges out of octant order";
      if (ranges_[node].begin < last_end) return "octant slices overlap";
      last_octant = static_cast<int>(node);
      last_end = ranges_[node].end;
      prev = node;
      node = ranges_[node].next;
    }
    if (visited != active || s.previous != prev) return "circular list broken";

    for (int o = 0; o < kOctants; ++o) {
      const OctantRange& r = ranges_[o];
      if (!r.active()) continue;
      const bool even = o % 2 == 0;
      for (auto i = r.begin; i < r.end; ++i) {
        const Edge<T>& e = edges_[i];
        if (!std::isfinite(e.n) || !std::isfinite(e.c)) return "non-finite edge field";
        if (e.n < T(0) || e.n > T(1) || (even && e.n == T(1)) || (!even && e.n == T(0)))
          return "edge direction outside octant " + std::to_string(o);
        if (i > r.begin &&
            compare_directions(DirectionKey<T>{o, edges_[i - 1].n}, DirectionKey<T>{o, e.n}) != Order::Before)
          return "octant slice unsorted";
      }
    }
    return std::nullopt;
  }

  // Direct access for tests that corrupt the structure on purpose.
  std::vector<Edge<T>>& raw_edges() { return edges_; }
  std::array<OctantRange, kOctants + 1>& raw_ranges() { return ranges_; }

 private:
  std::ptrdiff_t capacity_signed() const { return static_cast<std::ptrdiff_t>(edges_.size()); }

  std::ptrdiff_t predecessor_of_inactive(int octant) const {
    for (int o = octant - 1; o >= 0; --o)
      if (ranges_[o].active()) return o;
    return kSentinel;
  }

  std::ptrdiff_t successor_of_inactive(int octant) const {
    for (int o = octant + 1; o < kOctants; ++o)
      if (ranges_[o].active()) return o;
    return kSentinel;
  }

  std::ptrdiff_t lower_limit(std::ptrdiff_t o) const {
    const auto p = ranges_[o].previous;
    return p == kSentinel ? 0 : ranges_[p].end;
  }

  std::ptrdiff_t upper_limit(std::ptrdiff_t o) const {
    const auto n = ranges_[o].next;
    return n == kSentinel ? capacity_signed() : ranges_[n].begin;
  }

  void link_after(std::ptrdiff_t pred, int octant) {
    OctantRange& r = ranges_[octant];
    r.previous = pred;
    r.next = ranges_[pred].next;
    ranges_[r.next].previous = octant;
    ranges_[pred].next = octant;
  }

  void unlink(int octant) {
    OctantRange& r = ranges_[octant];
    ranges_[r.previous].next = r.next;
    ranges_[r.next].previous = r.previous;
    r = OctantRange{};
  }

  // Shift a whole range one slot down / up when it has slack there.
  bool bump_down(std::ptrdiff_t o) {
    OctantRange& r = ranges_[o];
    if (r.begin <= lower_limit(o)) return false;
    std::move(edges_.begin() + r.begin, edges_.begin() + r.end, edges_.begin() + r.begin - 1);
    --r.begin;
    --r.end;
    return true;
  }

  bool bump_up(std::ptrdiff_t o) {
    OctantRange& r = ranges_[o];
    if (r.end >= upper_limit(o)) return false;
    std::move_backward(edges_.begin() + r.begin, edges_.begin() + r.end, edges_.begin() + r.end + 1);
    ++r.begin;
    ++r.end;
    return true;
  }

  void erase_ranks(int octant, std::size_t lo, std::size_t hi) {
    OctantRange& r = ranges_[octant];
    const auto b = r.begin;
    std::move(edges_.begin() + b + static_cast<std::ptrdiff_t>(hi), edges_.begin() + r.end,
              edges_.begin() + b + static_cast<std::ptrdiff_t>(lo));
    r.end -= static_cast<std::ptrdiff_t>(hi - lo);
    if (r.end == r.begin) unlink(octant);
  }

  // Spreads the slack evenly between the ranges, doubling the array first
  // when it is full. The gap next to `target` receives slack first so the
  // pending insertion always succeeds afterwards.
  void reorganize(int target) {
    const std::size_t new_capacity = count_ == edges_.size() ? 2 * edges_.size() : edges_.size();
    std::array<int, kOctants> order{};
    std::size_t k = 0, target_gap = 0;
    for (int o = 0; o < kOctants; ++o) {
      if (o == target) target_gap = ranges_[o].active() ? k + 1 : k;
      if (ranges_[o].active() || o == target) order[k++] = o;
    }
    const std::size_t free_slots = new_capacity - count_;
    std::array<std::size_t, kOctants + 1> gaps{};
    const std::size_t base = free_slots / (k + 1);
    std::size_t extra = free_slots % (k + 1);
    gaps.fill(base);
    for (std::size_t g = target_gap; extra > 0; g = (g + 1) % (k + 1), --extra) ++gaps[g];

    std::vector<Edge<T>> fresh(new_capacity);
    std::ptrdiff_t pos = 0;
    for (std::size_t i = 0; i < k; ++i) {
      pos += static_cast<std::ptrdiff_t>(gaps[i]);
      OctantRange& r = ranges_[order[i]];
      if (!r.active()) continue;
      const std::ptrdiff_t sz = r.end - r.begin;
      std::copy(edges_.begin() + r.begin, edges_.begin() + r.end, fresh.begin() + pos);
      r.begin = pos;
      r.end = pos + sz;
      pos += sz;
    }
    edges_ = std::move(fresh);
    ranges_[kSentinel].end = capacity_signed();
  }

  std::vector<Edge<T>> edges_;
  std::array<OctantRange, kOctants + 1> ranges_{};
  std::size_t count_ = 0;
};

/// What the clip engine needs from an edge container; a balanced-tree
/// container with logarithmic updates could stand in for RegionStore.
template <class S>
concept EdgeContainer = requires(S s, const S cs, Position p, typename S::scalar_type t, std::size_t i) {
  { cs.size() } -> std::convertible_to<std::size_t>;
  { cs.first() } -> std::same_as<Position>;
  { cs.next(p) } -> std::same_as<Position>;
  { cs.previous(p) } -> std::same_as<Position>;
  { cs.at(i) } -> std::same_as<Position>;
  { cs.ordinal(p) } -> std::convertible_to<std::size_t>;
  { cs.constraint(p) } -> std::same_as<NormalizedConstraint<typename S::scalar_type>>;
  { cs.locate_direction(DirectionKey<typename S::scalar_type>{}) } -> std::same_as<Position>;
  { cs.octant_size(0) } -> std::convertible_to<std::size_t>;
  { s.edge(p) } -> std::same_as<Edge<typename S::scalar_type>&>;
  { s.insert_edge(0, i, Edge<typename S::scalar_type>{}) } -> std::same_as<Position>;
  s.remove_span(i, i);
  { cs.check_invariants() } -> std::same_as<std::optional<std::string>>;
};

static_assert(EdgeContainer<RegionStore<double>>);

}  // namespace hp2d

#endif  // HP2D_REGION_STORE_HPP_
