// Enclosures of polygon vertices and exact side-of-line decisions.
//
// The vertex of two consecutive edges j, k (counter-clockwise) is
// (r / d, s / d) with
//   r = c_j b_k - c_k b_j,  s = a_j c_k - a_k c_j,  d = a_j b_k - a_k b_j > 0.
// A VertexBox holds round-up upper bounds of -r, -s, -d, r, s, d.
#ifndef HP2D_VERTEX_BOUNDS_HPP_
#define HP2D_VERTEX_BOUNDS_HPP_

#include <array>
#include <optional>

#include "hp2d/normalizer.hpp"
#include "hp2d/rounding.hpp"

namespace hp2d {

template <Scalar T>
struct VertexBox {
  // -ur <= r <= or_, -us <= s <= os, -ud <= d <= od
  T ur{}, us{}, ud{};
  T or_{}, os{}, od{};

  friend bool operator==(const VertexBox&, const VertexBox&) = default;
};

enum class SideResult { StrictlyInfeasible, OnLine, StrictlyFeasible };

template <Scalar T>
VertexBox<T> compute_vertex_box(const NormalizedConstraint<T>& edge_j, const NormalizedConstraint<T>& edge_k) {
  const auto [aj, bj] = reconstruct_coefficients(edge_j);
  const auto [ak, bk] = reconstruct_coefficients(edge_k);
  const T cj = edge_j.c;
  const T ck = edge_k.c;
  VertexBox<T> box;
  box.ur = ru_add(ru_mul(ck, bj), ru_mul(-cj, bk));
  box.us = ru_add(ru_mul(ak, cj), ru_mul(-aj, ck));
  box.ud = ru_add(ru_mul(ak, bj), ru_mul(-aj, bk));
  box.or_ = ru_add(ru_mul(cj, bk), ru_mul(-ck, bj));
  box.os = ru_add(ru_mul(aj, ck), ru_mul(-ak, cj));
  box.od = ru_add(ru_mul(aj, bk), ru_mul(-ak, bj));
  return box;
}

namespace detail {

// Upper bound of coef * v given -under <= v <= over. The bounds may be +inf.
template <Scalar T>
T product_upper(T coef, T under, T over) {
  if (coef == T(0)) return T(0);
  return coef > T(0) ? ru_mul(coef, over) : ru_mul(-coef, under);
}

}  // namespace detail

/// Interval test only; nullopt when the bounds cannot decide.
template <Scalar T>
std::optional<SideResult> side_from_box(const VertexBox<T>& box, const NormalizedConstraint<T>& nc) {
  using detail::product_upper;
  const auto [a, b] = reconstruct_coefficients(nc);
  const T c = nc.c;
  // p = a r + b s and q = c d; the vertex is feasible iff p - q > 0.
  const T p_upper = ru_add(product_upper(a, box.ur, box.or_), product_upper(b, box.us, box.os));
  const T p_lower = -ru_add(product_upper(-a, box.ur, box.or_), product_upper(-b, box.us, box.os));
  const T q_upper = product_upper(c, box.ud, box.od);
  const T q_lower = -product_upper(-c, box.ud, box.od);
  if (p_lower > q_upper) return SideResult::StrictlyFeasible;
  if (p_upper < q_lower) return SideResult::StrictlyInfeasible;
  return std::nullopt;
}

/// Exact sign of a r + b s - c d for the vertex of edge_j and edge_k.
template <Scalar T>
SideResult side_exact(const NormalizedConstraint<T>& nc, const NormalizedConstraint<T>& edge_j,
                      const NormalizedConstraint<T>& edge_k) {
  const auto [ai, bi] = reconstruct_coefficients(nc);
  const auto [aj, bj] = reconstruct_coefficients(edge_j);
  const auto [ak, bk] = reconstruct_coefficients(edge_k);
  const T ci = nc.c, cj = edge_j.c, ck = edge_k.c;
  const std::array<SignedTriple<T>, 6> terms{{
      {false, {ai, cj, bk}},
      {true, {ai, ck, bj}},
      {false, {bi, aj, ck}},
      {true, {bi, ak, cj}},
      {false, {ci, ak, bj}},
      {true, {ci, aj, bk}},
  }};
  switch (exact_sign_3x3<T>(terms)) {
    case Sign::Positive: return SideResult::StrictlyFeasible;
    case Sign::Negative: return SideResult::StrictlyInfeasible;
    default: return SideResult::OnLine;
  }
}

/// Side of the vertex (edge_j, edge_k) with respect to nc. box must be
/// compute_vertex_box(edge_j, edge_k).
template <Scalar T>
SideResult side_of_constraint(const VertexBox<T>& box, const NormalizedConstraint<T>& nc,
                              const NormalizedConstraint<T>& edge_j, const NormalizedConstraint<T>& edge_k) {
  auto& counters = op_counters();
  ++counters.side_tests;
  if (auto quick = side_from_box(box, nc)) return *quick;
  ++counters.exact_fallbacks;
  return side_exact(nc, edge_j, edge_k);
}

/// Exact sign of the cross product of the two normalized normals.
template <Scalar T>
Sign cross_sign(const NormalizedConstraint<T>& first, const NormalizedConstraint<T>& second) {
  const auto [a1, b1] = reconstruct_coefficients(first);
  const auto [a2, b2] = reconstruct_coefficients(second);
  const std::array<SignedTriple<double>, 2> terms{{
      {false, {double(a1), double(b2), 1.0}},
      {true, {double(a2), double(b1), 1.0}},
  }};
  return exact_sign_sum(terms);
}

}  // namespace hp2d

#endif  // HP2D_VERTEX_BOUNDS_HPP_
