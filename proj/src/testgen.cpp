#include "hp2d/testgen.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <sstream>

namespace hp2d::testgen {

namespace {

IVec rotate(IVec v) { return {-v.y, v.x}; }

NormalSet make_set(int k_lo, int k_hi, int step) {
  NormalSet out;
  for (int i = 0; i < 4; ++i) {
    for (int k = k_lo; k <= k_hi; ++k) {
      IVec v{8, static_cast<std::int64_t>(step) * k};
      for (int r = 0; r < i; ++r) v = rotate(v);
      out.push_back(v);
    }
  }
  return out;
}

std::int64_t pow2(int e) { return std::int64_t{1} << e; }

// True when direction w lies in the half-open ccw sector [u, v), where the
// sector from u to v is narrower than pi.
bool in_sector(IVec u, IVec v, IVec w) {
  const std::int64_t uw = cross(u, w);
  if (uw < 0) return false;
  if (uw == 0 && dot(u, w) < 0) return false;
  return cross(w, v) > 0;
}

IVec random_normal(const NormalSet& ns, Rng& rng) {
  return ns[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(ns.size()) - 1))];
}

IntConstraint through(IVec nu, IVec p) { return {nu, dot(nu, p)}; }

IVec negate(IVec v) { return {-v.x, -v.y}; }

}  // namespace

NormalSet normal_set_32() { return make_set(-4, 3, 2); }
NormalSet normal_set_64() { return make_set(-8, 7, 1); }

bool is_valid_subset(std::span<const IVec> s) {
  if (s.size() < 3) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (cross(s[i], s[(i + 1) % s.size()]) <= 0) return false;
  return true;
}

void for_each_valid_subset(const NormalSet& ns, std::size_t max_size,
                           const std::function<bool(std::span<const IVec>)>& visit) {
  std::vector<IVec> chosen;
  bool stop = false;
  // Gaps between consecutive chosen normals must stay below pi, which
  // prunes most branches early.
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (stop) return;
    if (chosen.size() >= 3 && is_valid_subset(chosen) && !visit(chosen)) {
      stop = true;
      return;
    }
    if (chosen.size() == max_size) return;
    for (std::size_t i = from; i < ns.size() && !stop; ++i) {
      if (!chosen.empty() && cross(chosen.back(), ns[i]) <= 0) break;
      chosen.push_back(ns[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  assert(lo <= hi);
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next());
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v;
  do v = next();
  while (v >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + v % range);
}

std::vector<IVec> random_valid_subset(const NormalSet& ns, Rng& rng, std::size_t min_size, double keep_fraction) {
  for (;;) {
    std::vector<IVec> out;
    for (const IVec& v : ns)
      if (std::ldexp(static_cast<double>(rng.next()), -64) < keep_fraction) out.push_back(v);
    if (out.size() >= min_size && is_valid_subset(out)) return out;
  }
}

GeneratedPolygon build_polygon(std::span<const IVec> normals, int beta, Rng& rng) {
  std::vector<std::int64_t> t(normals.size());
  for (auto& v : t) v = rng.uniform(1, pow2(beta) - 1);
  const std::int64_t sx = rng.uniform(0, pow2(beta + 16) - 1);
  const std::int64_t sy = rng.uniform(0, pow2(beta + 16) - 1);
  return build_polygon(normals, beta, t, sx, sy);
}

GeneratedPolygon build_polygon(std::span<const IVec> normals, int beta, std::span<const std::int64_t> t,
                               std::int64_t shift_x, std::int64_t shift_y) {
  assert(is_valid_subset(normals) && t.size() == normals.size());
  const std::size_t n = normals.size();
  GeneratedPolygon p;
  p.beta = beta;
  p.normals.assign(normals.begin(), normals.end());
  p.t.assign(t.begin(), t.end());

  IVec delta{};
  for (std::size_t i = 0; i < n; ++i) {
    delta.x += t[i] * normals[i].x;
    delta.y += t[i] * normals[i].y;
  }
  p.delta = delta;
  p.lengths = p.t;
  if (delta == IVec{}) {
    p.j = n - 1;
    p.d = 1;
  } else {
    const IVec minus{-delta.x, -delta.y};
    std::size_t j = n;
    for (std::size_t i = 0; i < n; ++i)
      if (in_sector(normals[i], normals[(i + 1) % n], minus)) {
        j = i;
        break;
      }
    assert(j < n);
    const IVec nu = normals[j];
    const IVec sigma = normals[(j + 1) % n];
    const std::int64_t alpha_nu = delta.y * sigma.x - delta.x * sigma.y;
    const std::int64_t alpha_sigma = nu.y * delta.x - nu.x * delta.y;
    p.j = j;
    p.d = cross(nu, sigma);
    for (auto& l : p.lengths) l *= p.d;
    p.lengths[j] += alpha_nu;
    p.lengths[(j + 1) % n] += alpha_sigma;
  }

  // Walk the sides starting at the vertex that begins edge j + 1.
  const std::size_t q0 = (p.j + 1) % n;
  std::vector<std::int64_t> xt(n), yt(n);
  std::int64_t cx = 0, cy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    xt[k] = cx;
    yt[k] = cy;
    const std::size_t q = (q0 + k) % n;
    cx += p.lengths[q] * normals[q].y;
    cy -= p.lengths[q] * normals[q].x;
  }
  const std::int64_t min_x = *std::min_element(xt.begin(), xt.end());
  const std::int64_t min_y = *std::min_element(yt.begin(), yt.end());
  p.x.resize(n);
  p.y.resize(n);
  p.c.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = (n + k - q0) % n;
    p.x[k] = xt[idx] - min_x + shift_x;
    p.y[k] = yt[idx] - min_y + shift_y;
    p.c[k] = normals[k].x * p.x[k] + normals[k].y * p.y[k];
  }
  return p;
}

std::string check_polygon(const GeneratedPolygon& p) {
  std::ostringstream err;
  const std::size_t n = p.normals.size();
  const int beta = p.beta;
  if (!is_valid_subset(p.normals)) err << "normals not a valid subset; ";
  IVec sum{};
  for (std::size_t i = 0; i < n; ++i) {
    sum.x += p.lengths[i] * p.normals[i].x;
    sum.y += p.lengths[i] * p.normals[i].y;
    const std::size_t s = (i + 1) % n;
    if (p.x[s] != p.x[i] + p.lengths[i] * p.normals[i].y || p.y[s] != p.y[i] - p.lengths[i] * p.normals[i].x)
      err << "edge recurrence fails at " << i << "; ";
    if (p.t[i] < 1 || p.t[i] >= pow2(beta)) err << "t out of range at " << i << "; ";
    if (p.lengths[i] < 1 || p.lengths[i] >= pow2(beta + 12)) err << "length out of range at " << i << "; ";
    if (p.x[i] < 0 || p.x[i] >= pow2(beta + 17) || p.y[i] < 0 || p.y[i] >= pow2(beta + 17))
      err << "vertex out of range at " << i << "; ";
    if (p.c[i] != p.normals[i].x * p.x[i] + p.normals[i].y * p.y[i]) err << "c mismatch at " << i << "; ";
    if (p.c[i] < -pow2(beta + 21) || p.c[i] > pow2(beta + 21)) err << "c out of range at " << i << "; ";
  }
  if (!(sum == IVec{})) err << "sides do not close; ";
  if (p.d < 1 || p.d > 128) err << "d out of range; ";
  return err.str();
}

std::vector<IntConstraint> polygon_constraints(const GeneratedPolygon& p) {
  std::vector<IntConstraint> out;
  for (std::size_t i = 0; i < p.normals.size(); ++i) out.push_back({p.normals[i], p.c[i]});
  return out;
}

std::vector<Probe> probe_levels(std::span<const IVec> vertices, int beta, IVec nu, Rng& rng, std::size_t gap_samples) {
  std::vector<std::int64_t> levels;
  for (const IVec& v : vertices) levels.push_back(dot(nu, v));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<Probe> out;
  for (std::int64_t u : levels) out.push_back({{nu, u}, ProbeKind::Level});
  std::vector<std::int64_t> ext;
  ext.push_back(-pow2(beta + 22));
  ext.insert(ext.end(), levels.begin(), levels.end());
  ext.push_back(pow2(beta + 22));
  for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
    if (ext[i + 1] - ext[i] < 2) continue;
    for (std::size_t s = 0; s < gap_samples; ++s)
      out.push_back({{nu, rng.uniform(ext[i] + 1, ext[i + 1] - 1)}, ProbeKind::Gap});
  }
  out.push_back({{nu, ext.front()}, ProbeKind::Sentinel});
  out.push_back({{nu, ext.back()}, ProbeKind::Sentinel});
  return out;
}

std::vector<Probe> probe_constraints(const GeneratedPolygon& p, IVec nu, Rng& rng, std::size_t gap_samples) {
  std::vector<IVec> vertices;
  for (std::size_t i = 0; i < p.x.size(); ++i) vertices.push_back({p.x[i], p.y[i]});
  return probe_levels(vertices, p.beta, nu, rng, gap_samples);
}

namespace {

// A normal from ns whose dot product with t has the requested sign.
IVec normal_with_sign(const NormalSet& ns, Rng& rng, IVec t, int sign) {
  for (;;) {
    const IVec v = random_normal(ns, rng);
    const std::int64_t d = dot(v, t);
    if ((sign > 0 && d > 0) || (sign < 0 && d < 0)) return v;
  }
}

IVec random_point(Rng& rng, int beta, std::int64_t margin) {
  return {rng.uniform(margin, pow2(beta + 16) - 1), rng.uniform(margin, pow2(beta + 16) - 1)};
}

void pin_line(std::vector<IntConstraint>& out, IVec nu, IVec p) {
  out.push_back(through(nu, p));
  out.push_back(through(negate(nu), p));
}

// Constraints whose feasible set is exactly the point p.
std::vector<IntConstraint> point_constraints(const NormalSet& ns, Rng& rng, IVec p) {
  std::vector<IntConstraint> out;
  const IVec nu1 = random_normal(ns, rng);
  if (rng.coin()) {
    IVec nu2;
    do nu2 = random_normal(ns, rng);
    while (cross(nu1, nu2) == 0);
    pin_line(out, nu1, p);
    pin_line(out, nu2, p);
  } else {
    const IVec t{nu1.y, -nu1.x};
    pin_line(out, nu1, p);
    out.push_back(through(normal_with_sign(ns, rng, t, +1), p));
    out.push_back(through(normal_with_sign(ns, rng, t, -1), p));
  }
  return out;
}

}  // namespace

DegenerateCase gen_degenerate(DegenerateKind kind, int beta, Rng& rng) {
  const NormalSet ns = normal_set_32();
  DegenerateCase dc;
  dc.kind = kind;
  dc.beta = beta;
  const std::int64_t margin = 8 * pow2(beta);

  const auto make_segment = [&](IVec& p0, IVec& p1) {
    const IVec nu1 = random_normal(ns, rng);
    const IVec t{nu1.y, -nu1.x};
    p0 = random_point(rng, beta, margin);
    const std::int64_t lambda = rng.uniform(1, pow2(beta));
    p1 = {p0.x + lambda * t.x, p0.y + lambda * t.y};
    std::vector<IntConstraint> out;
    pin_line(out, nu1, p0);
    out.push_back(through(normal_with_sign(ns, rng, t, +1), p0));
    out.push_back(through(normal_with_sign(ns, rng, t, -1), p1));
    return out;
  };

  switch (kind) {
    case DegenerateKind::Point: {
      const IVec p = random_point(rng, beta, 0);
      dc.constraints = point_constraints(ns, rng, p);
      dc.expected = {p};
      break;
    }
    case DegenerateKind::Segment: {
      IVec p0, p1;
      dc.constraints = make_segment(p0, p1);
      dc.expected = {p0, p1};
      break;
    }
    case DegenerateKind::Empty: {
      switch (rng.uniform(0, 2)) {
        case 0: {  // parallel strip of negative width
          const IVec nu = random_normal(ns, rng);
          const std::int64_t c = rng.uniform(-pow2(beta + 20), pow2(beta + 20));
          dc.constraints = {{nu, c}, {negate(nu), 1 - c}};
          break;
        }
        case 1: {  // a pinned point, then a constraint just missing it
          const IVec p = random_point(rng, beta, 0);
          dc.constraints = point_constraints(ns, rng, p);
          const IVec nu = random_normal(ns, rng);
          dc.constraints.push_back({nu, dot(nu, p) + 1});
          break;
        }
        default: {  // a segment, then a constraint missing both ends
          IVec p0, p1;
          dc.constraints = make_segment(p0, p1);
          const IVec nu = random_normal(ns, rng);
          dc.constraints.push_back({nu, std::max(dot(nu, p0), dot(nu, p1)) + 1});
          break;
        }
      }
      break;
    }
  }
  rng.shuffle(dc.constraints.begin(), dc.constraints.end());
  return dc;
}

}  // namespace hp2d::testgen
