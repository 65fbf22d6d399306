// Acceptance run: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All tolerances are fixed below.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "exact_helpers.hpp"
#include "hp2d/clip_engine.hpp"
#include "hp2d/oracle.hpp"
#include "hp2d/testgen.hpp"

using namespace hp2d;
namespace tg = hp2d::testgen;
using oracle::Rational;

namespace {

// Calibrated against the oracle on the sharpness instances (see README).
constexpr double kEpsSharp = 1e-12;

constexpr std::size_t kMaxEnumeratedSize = 6;
constexpr std::size_t kRandomLargeSubsets = 1500;
constexpr int kOrders = 3;
constexpr std::size_t kMinProbes = 100000;
constexpr int kFuzzSystems = 10000;
constexpr int kDegenerateEach = 1000;
constexpr int kContainerOps = 100000;
constexpr int kKernelPairs = 1000000;
constexpr int kSignTrials = 1000000;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void report(int number, const Outcome& o, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("CRITERION %d %s: %s [%.1f s]\n", number, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

// Resource use over every insertion made by criteria 1 to 3.
struct Budget {
  std::size_t insertions = 0;
  std::size_t division_violations = 0;
  std::size_t comparison_violations = 0;
  std::uint64_t max_divisions = 0;
  std::uint64_t max_comparisons = 0;
  std::size_t max_edges = 0;
};

Budget budget;

void tracked_add(Region<double>& r, const RawConstraint<double>& rc) {
  const std::size_t ne = r.polygon() ? r.polygon()->size() : 0;
  reset_op_counters();
  r.add_constraint(rc);
  const OpCounters& c = op_counters();
  ++budget.insertions;
  budget.max_divisions = std::max(budget.max_divisions, c.divisions);
  if (c.divisions > 2) ++budget.division_violations;
  if (ne > 0) {
    budget.max_edges = std::max(budget.max_edges, ne);
    budget.max_comparisons = std::max(budget.max_comparisons, c.direction_comparisons);
    if (c.direction_comparisons > 4 * ceil_log2(ne) + 16) ++budget.comparison_violations;
  }
}

oracle::RationalPolygon polygon_of(const tg::GeneratedPolygon& p) {
  std::vector<oracle::RationalPoint> v;
  for (std::size_t i = 0; i < p.x.size(); ++i) v.push_back({Rational(p.x[i]), Rational(p.y[i])});
  return oracle::canonical(RegionKind::Polygon, std::move(v));
}

std::vector<RawConstraint<double>> raw_of(const std::vector<tg::IntConstraint>& cs) {
  std::vector<RawConstraint<double>> out;
  for (const auto& c : cs) out.push_back(tg::to_raw<double>(c));
  return out;
}

Region<double> clip_from_box(double extent, const std::vector<RawConstraint<double>>& cs) {
  Region<double> r = Region<double>::box(extent, extent);
  for (const auto& c : cs) tracked_add(r, c);
  return r;
}

// ---------------------------------------------------------------- 1, 2

struct PolygonCase {
  tg::GeneratedPolygon poly;
  std::vector<tg::IntConstraint> order;  // the first insertion order used
};

std::vector<PolygonCase> probe_sample;

Outcome criterion_exact_reproduction() {
  tg::Rng rng(0xC1);
  const tg::NormalSet ns = tg::normal_set_32();
  std::size_t subsets = 0, runs = 0, failures = 0, enumerated = 0;
  std::string first_failure;
  const auto run_subset = [&](std::span<const tg::IVec> normals, bool keep_for_probes) {
    ++subsets;
    for (int beta : {1, 8}) {
      const tg::GeneratedPolygon p = tg::build_polygon(normals, beta, rng);
      const auto want = polygon_of(p);
      auto cons = tg::polygon_constraints(p);
      for (int k = 0; k < kOrders; ++k) {
        rng.shuffle(cons.begin(), cons.end());
        const Region<double> r = clip_from_box(tg::start_box_extent(beta), raw_of(cons));
        ++runs;
        const auto snap = r.snapshot();
        const bool ok = !r.validate() && snap.kind == RegionKind::Polygon && oracle::compare(snap, want).exact_match;
        if (!ok && failures++ == 0) {
          std::ostringstream os;
          os << "first failure: " << normals.size() << " normals, beta " << beta << ", kind " << to_string(snap.kind);
          first_failure = os.str();
        }
        if (k == 0 && beta == 8 && keep_for_probes) probe_sample.push_back({p, cons});
      }
    }
  };

  std::size_t counter = 0;
  tg::for_each_valid_subset(ns, kMaxEnumeratedSize, [&](std::span<const tg::IVec> s) {
    ++enumerated;
    run_subset(s, ++counter % 7919 == 0);
    return true;
  });
  for (std::size_t i = 0; i < kRandomLargeSubsets; ++i) {
    const auto s = tg::random_valid_subset(ns, rng, kMaxEnumeratedSize + 1, 0.25 + 0.75 * double(i % 4) / 3);
    run_subset(s, i % 8 == 0);
  }

  Outcome o;
  o.pass = failures == 0 && subsets >= 1000;
  std::ostringstream os;
  os << subsets << " subsets (" << enumerated << " enumerated up to size " << kMaxEnumeratedSize << ", "
     << kRandomLargeSubsets << " random larger), " << runs << " clips, beta {1, 8}, " << kOrders << " orders, "
     << failures << " ExactMatch failures";
  if (!first_failure.empty()) os << "; " << first_failure;
  o.detail = os.str();
  return o;
}

Outcome criterion_probe_battery() {
  tg::Rng rng(0xC2);
  const tg::NormalSet n64 = tg::normal_set_64();
  std::size_t probes = 0, contain_failures = 0, kind_failures = 0, exact = 0;
  for (const PolygonCase& pc : probe_sample) {
    const double ext = tg::start_box_extent(pc.poly.beta);
    const auto raw = raw_of(pc.order);
    const Region<double> base = clip_from_box(ext, raw);
    std::vector<oracle::RationalLine> lines;
    for (const auto& c : raw) lines.push_back(oracle::to_rational(c));
    for (const tg::IVec nu : n64) {
      for (const tg::Probe& pr : tg::probe_constraints(pc.poly, nu, rng)) {
        Region<double> r = base;
        const auto rc = tg::to_raw<double>(pr.constraint);
        tracked_add(r, rc);
        lines.push_back(oracle::to_rational(rc));
        const auto want = oracle::exact_intersection(lines, Rational(ext), Rational(ext));
        lines.pop_back();
        const auto snap = r.snapshot();
        const auto cmp = oracle::compare(snap, want);
        ++probes;
        if (!cmp.contains_exact || r.validate()) ++contain_failures;
        if (snap.kind != want.kind) ++kind_failures;
        if (cmp.exact_match) ++exact;
      }
    }
  }
  Outcome o;
  o.pass = contain_failures == 0 && kind_failures == 0 && probes >= kMinProbes;
  std::ostringstream os;
  os << probes << " probes on " << probe_sample.size() << " polygons x 64 normals, " << contain_failures
     << " containment failures, " << kind_failures << " kind mismatches, " << exact << " exact matches";
  o.detail = os.str();
  return o;
}

// ---------------------------------------------------------------- 3, 4

struct SharpnessStats {
  std::size_t instances = 0;
  double max_relative_excess = 0;
};

SharpnessStats sharpness;

double random_coefficient(std::mt19937_64& rng, bool well_scaled) {
  if (well_scaled) return testing::random_scaled<double>(rng, -10, 9);
  return testing::random_operand<double>(rng);
}

Outcome criterion_fuzz() {
  std::mt19937_64 rng(0xC3);
  std::size_t failures = 0, empty_wrong = 0, empties = 0, constraints = 0;
  std::string first_failure;
  for (int sys = 0; sys < kFuzzSystems; ++sys) {
    const bool well_scaled = sys % 2 == 0;
    // Well-scaled systems keep an interior center feasible so the result
    // has area; the others are unrestricted.
    const int box_exp = well_scaled ? int(rng() % 41) : int(rng() % 201) - 100;
    const double mx = std::ldexp(1.0 + double(rng() % 1024) / 1024, box_exp);
    const double my = std::ldexp(1.0 + double(rng() % 1024) / 1024, box_exp + int(rng() % 5) - 2);
    std::uniform_real_distribution<double> ux(0, mx), uy(0, my);
    const double zx = mx * 0.5, zy = my * 0.5;
    const int n = 1 + int(rng() % 64);

    Region<double> r = Region<double>::box(mx, my);
    std::vector<oracle::RationalLine> lines;
    bool checked_empty = false;
    for (int k = 0; k < n; ++k) {
      RawConstraint<double> rc{random_coefficient(rng, well_scaled), random_coefficient(rng, well_scaled), 0};
      if (rc.a == 0 && rc.b == 0) rc.a = 1;
      const int mode = int(rng() % 4);
      if (!well_scaled && mode == 0) {
        rc.c = testing::random_operand<double>(rng);
      } else {
        const double v = rc.a * ux(rng) + rc.b * uy(rng);
        rc.c = std::isfinite(v) ? v : testing::random_operand<double>(rng);
      }
      if (well_scaled && rc.a * zx + rc.b * zy < rc.c) {
        rc = {-rc.a, -rc.b, -rc.c};
      }
      tracked_add(r, rc);
      ++constraints;
      lines.push_back(oracle::to_rational(rc));
      if (r.kind() == RegionKind::Empty && !checked_empty) {
        checked_empty = true;
        ++empties;
        if (oracle::exact_intersection(lines, Rational(mx), Rational(my)).kind != RegionKind::Empty) ++empty_wrong;
      }
    }
    const auto want = oracle::exact_intersection(lines, Rational(mx), Rational(my));
    const auto cmp = oracle::compare(r.snapshot(), want);
    if (!cmp.contains_exact || r.validate()) {
      if (failures++ == 0) first_failure = "system " + std::to_string(sys);
    }
    if (well_scaled && want.kind == RegionKind::Polygon) {
      const Rational exact_area = oracle::area(want);
      if (exact_area > 0) {
        ++sharpness.instances;
        const double rel = Rational(cmp.excess_area / exact_area).get_d();
        sharpness.max_relative_excess = std::max(sharpness.max_relative_excess, rel);
      }
    }
  }
  Outcome o;
  o.pass = failures == 0 && empty_wrong == 0;
  std::ostringstream os;
  os << kFuzzSystems << " systems, " << constraints << " constraints, " << failures << " containment failures, "
     << empties << " empty results, " << empty_wrong << " unsound empties";
  if (!first_failure.empty()) os << "; first failure " << first_failure;
  o.detail = os.str();
  return o;
}

Outcome criterion_sharpness() {
  Outcome o;
  o.pass = sharpness.instances > 0 && sharpness.max_relative_excess <= kEpsSharp;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu well-scaled instances, max relative excess area %.3e <= eps_sharp %.1e",
                sharpness.instances, sharpness.max_relative_excess, kEpsSharp);
  o.detail = buf;
  return o;
}

// ---------------------------------------------------------------- 5

Outcome criterion_degenerate() {
  tg::Rng rng(0xC5);
  std::size_t wrong_kind = 0, wrong_coords = 0, total = 0;
  for (const auto kind : {tg::DegenerateKind::Point, tg::DegenerateKind::Segment, tg::DegenerateKind::Empty}) {
    const RegionKind want_kind = kind == tg::DegenerateKind::Point     ? RegionKind::Point
                                 : kind == tg::DegenerateKind::Segment ? RegionKind::Segment
                                                                       : RegionKind::Empty;
    for (int i = 0; i < kDegenerateEach; ++i) {
      const int beta = 1 + i % 30;
      const tg::DegenerateCase dc = tg::gen_degenerate(kind, beta, rng);
      const Region<double> r = clip_from_box(tg::start_box_extent(beta), raw_of(dc.constraints));
      ++total;
      if (r.kind() != want_kind || r.validate()) {
        ++wrong_kind;
        continue;
      }
      std::vector<oracle::RationalPoint> pts;
      for (const tg::IVec v : dc.expected) pts.push_back({Rational(v.x), Rational(v.y)});
      if (oracle::geometry(r.snapshot()).shape != oracle::canonical(want_kind, pts)) ++wrong_coords;
    }
  }
  Outcome o;
  o.pass = wrong_kind == 0 && wrong_coords == 0;
  std::ostringstream os;
  os << total << " cases (" << kDegenerateEach << " each of point, segment, empty), " << wrong_kind
     << " wrong kinds, " << wrong_coords << " wrong coordinates";
  o.detail = os.str();
  return o;
}

// ---------------------------------------------------------------- 6

std::size_t container_fuzz_failures() {
  using Store = RegionStore<double>;
  std::mt19937_64 rng(0xC6);
  Store s;
  std::vector<std::pair<int, double>> ref;  // (octant, n), kept sorted
  const auto before = [](const std::pair<int, double>& x, const std::pair<int, double>& y) {
    return compare_directions(DirectionKey<double>{x.first, x.second}, DirectionKey<double>{y.first, y.second}) ==
           Order::Before;
  };
  std::size_t failures = 0;
  for (int step = 0; step < kContainerOps; ++step) {
    if (ref.empty() || rng() % 100 < (ref.size() < 50 ? 60u : 40u)) {
      std::pair<int, double> e{int(rng() % 8), double(rng() % 2048) / 2048};
      if (e.first % 2 == 1 && e.second == 0) e.second = 1;
      const auto it = std::lower_bound(ref.begin(), ref.end(), e, before);
      if (it != ref.end() && !before(e, *it)) continue;
      const auto rank = static_cast<std::size_t>(std::count_if(
          ref.begin(), it, [&](const std::pair<int, double>& x) { return x.first == e.first; }));
      s.insert_edge(e.first, rank, Edge<double>{e.second, 0, {}});
      ref.insert(it, e);
    } else {
      const std::size_t first = rng() % ref.size();
      const std::size_t count = 1 + rng() % std::min<std::size_t>(ref.size(), 6);
      s.remove_span(first, count);
      std::vector<std::pair<int, double>> kept;
      for (std::size_t i = 0; i < ref.size(); ++i)
        if ((i + ref.size() - first) % ref.size() >= count) kept.push_back(ref[i]);
      ref = std::move(kept);
    }
    if (s.check_invariants() || s.size() != ref.size()) {
      ++failures;
      continue;
    }
    if (!ref.empty()) {
      Position p = s.first();
      for (std::size_t i = 0; i < ref.size(); ++i, p = s.next(p))
        if (p.octant != ref[i].first || s.edge(p).n != ref[i].second) {
          ++failures;
          break;
        }
    }
  }
  return failures;
}

Outcome criterion_budgets() {
  const std::size_t fuzz_failures = container_fuzz_failures();
  Outcome o;
  o.pass = budget.division_violations == 0 && budget.comparison_violations == 0 && fuzz_failures == 0 &&
           budget.insertions > 0;
  std::ostringstream os;
  os << budget.insertions << " insertions, max divisions " << budget.max_divisions << " (limit 2), "
     << budget.comparison_violations << " searches above 4*ceil(log2 n_e)+16 (max " << budget.max_comparisons
     << " comparisons, max n_e " << budget.max_edges << "), container fuzz " << kContainerOps << " ops with "
     << fuzz_failures << " failures";
  o.detail = os.str();
  return o;
}

// ---------------------------------------------------------------- 7

Outcome criterion_kernel() {
  std::mt19937_64 rng(0xC7);
  std::size_t op_failures = 0, sign_failures = 0;
  for (int i = 0; i < kKernelPairs; ++i) {
    const double x = testing::random_operand<double>(rng);
    double y = testing::random_operand<double>(rng);
    const mpq_class qx(x), qy(y);
    if (!testing::is_least_upper(ru_add(x, y), qx + qy)) ++op_failures;
    if (!testing::is_least_upper(ru_mul(x, y), qx * qy)) ++op_failures;
    if (y == 0) y = 1;
    if (!testing::is_least_upper(ru_div(x, y), qx / mpq_class(y))) ++op_failures;
  }
  for (int i = 0; i < kSignTrials; ++i) {
    std::array<SignedTriple<double>, 6> t{};
    const int mode = i % 4;
    for (auto& term : t) {
      term.negative = rng() & 1;
      for (auto& f : term.f)
        f = mode == 0 ? testing::random_operand<double>(rng) : testing::random_scaled<double>(rng, -40, 40);
    }
    if (mode == 1) {
      // The last term cancels the nearest double of the others' sum.
      mpq_class s = 0;
      for (std::size_t k = 0; k < 5; ++k) {
        const mpq_class p = mpq_class(t[k].f[0]) * t[k].f[1] * t[k].f[2];
        s += t[k].negative ? mpq_class(-p) : p;
      }
      t[5] = {true, {s.get_d(), 1.0, 1.0}};
    } else if (mode == 2) {
      // Exact cancellation of two pairs: the sign comes from the rest.
      t[1] = {!t[0].negative, {t[0].f[1], t[0].f[2], t[0].f[0]}};
      t[3] = {!t[2].negative, {t[2].f[2], t[2].f[0], t[2].f[1]}};
    }
    if (static_cast<int>(exact_sign_3x3<double>(t)) != testing::rational_sign(t)) ++sign_failures;
  }
  Outcome o;
  o.pass = op_failures == 0 && sign_failures == 0;
  std::ostringstream os;
  os << kKernelPairs << " operand pairs x 3 operations, " << op_failures << " not least upper bounds; " << kSignTrials
     << " exact-sign trials, " << sign_failures << " mismatches";
  o.detail = os.str();
  return o;
}

}  // namespace

int main() {
  bool all = true;
  const auto run = [&](int number, Outcome (*fn)()) {
    const auto start = Clock::now();
    const Outcome o = fn();
    report(number, o, start);
    all = all && o.pass;
  };
  run(1, criterion_exact_reproduction);
  run(2, criterion_probe_battery);
  run(3, criterion_fuzz);
  run(4, criterion_sharpness);
  run(5, criterion_degenerate);
  run(6, criterion_budgets);
  run(7, criterion_kernel);
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
