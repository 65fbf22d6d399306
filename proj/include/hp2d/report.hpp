// Text formats used by the command-line tool.
//
// Constraint file, line oriented:
//   # comment                      (also allowed after data)
//   box <mx> <my>                  exactly once, before any constraint
//   <a> <b> <c>                    the constraint a x + b y >= c
//   probe <a> <b> <c>              a constraint tried separately on the
//                                  final region (used by `verify`)
// Numbers are decimal or C99 hex-float ("0x1.8p+3", "-0x1p-2"). Decimal
// input is rounded to nearest; hex input that fits the precision is exact.
//
// The region report is a JSON object; see report_json for its fields.
#ifndef HP2D_REPORT_HPP_
#define HP2D_REPORT_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hp2d/clip_engine.hpp"
#include "hp2d/oracle.hpp"

namespace hp2d::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest hex-float spelling that reads back to exactly v.
template <Scalar T>
std::string format_scalar(T v);

/// Parses one number; throws ParseError on malformed or non-finite input.
template <Scalar T>
T parse_scalar(std::string_view text);

template <Scalar T>
struct ConstraintFile {
  T mx{};
  T my{};
  std::vector<RawConstraint<T>> constraints;
  std::vector<RawConstraint<T>> probes;
};

template <Scalar T>
ConstraintFile<T> parse_constraint_file(std::istream& in);

template <Scalar T>
void write_constraint_file(std::ostream& out, const ConstraintFile<T>& file, std::string_view header_comment = {});

/// Fields: precision, box [mx, my], kind, entries [{octant, n, c, vertex?}]
/// where vertex holds ur us ud or os od, and counters. All scalars are
/// hex-float strings.
template <Scalar T>
nlohmann::json report_json(const Snapshot<T>& snap, T mx, T my, const OpCounters& counters);

template <Scalar T>
Snapshot<T> snapshot_from_json(const nlohmann::json& report);

/// Static SVG drawing of the region with its vertices.
std::string render_svg(const oracle::SnapshotGeometry& region, double mx, double my);

}  // namespace hp2d::io

#endif  // HP2D_REPORT_HPP_
