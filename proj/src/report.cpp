#include "hp2d/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace hp2d::io {

using nlohmann::json;

template <Scalar T>
std::string format_scalar(T v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  std::string body(buf, res.ptr);
  if (!std::isfinite(v)) return body;
  if (body.front() == '-') return "-0x" + body.substr(1);
  return "0x" + body;
}

template <Scalar T>
T parse_scalar(std::string_view text) {
  bool negative = false;
  std::string_view s = text;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto fmt = std::chars_format::general;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    fmt = std::chars_format::hex;
  }
  if (s.empty() || s.front() == '-' || s.front() == '+') throw ParseError("malformed number '" + std::string(text) + "'");
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v, fmt);
  if (res.ec == std::errc::result_out_of_range) throw ParseError("number out of range '" + std::string(text) + "'");
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("malformed number '" + std::string(text) + "'");
  if (!std::isfinite(v)) throw ParseError("non-finite number '" + std::string(text) + "'");
  return negative ? -v : v;
}

template <Scalar T>
ConstraintFile<T> parse_constraint_file(std::istream& in) {
  ConstraintFile<T> file;
  bool have_box = false;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    const auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    try {
      if (tok[0] == "box") {
        if (have_box) throw ParseError("duplicate box line");
        if (tok.size() != 3) throw ParseError("box needs two numbers");
        file.mx = parse_scalar<T>(tok[1]);
        file.my = parse_scalar<T>(tok[2]);
        have_box = true;
        continue;
      }
      const bool probe = tok[0] == "probe";
      const std::size_t first = probe ? 1 : 0;
      if (tok.size() != first + 3) throw ParseError("expected three numbers");
      if (!have_box) throw ParseError("constraint before the box line");
      RawConstraint<T> rc{parse_scalar<T>(tok[first]), parse_scalar<T>(tok[first + 1]), parse_scalar<T>(tok[first + 2])};
      (probe ? file.probes : file.constraints).push_back(rc);
    } catch (const ParseError& e) {
      throw ParseError(where() + e.what());
    }
  }
  if (!have_box) throw ParseError("missing box line");
  return file;
}

template <Scalar T>
void write_constraint_file(std::ostream& out, const ConstraintFile<T>& file, std::string_view header_comment) {
  if (!header_comment.empty()) {
    std::istringstream lines{std::string(header_comment)};
    for (std::string l; std::getline(lines, l);) out << "# " << l << '\n';
  }
  out << "box " << format_scalar(file.mx) << ' ' << format_scalar(file.my) << '\n';
  for (const auto& c : file.constraints)
    out << format_scalar(c.a) << ' ' << format_scalar(c.b) << ' ' << format_scalar(c.c) << '\n';
  for (const auto& c : file.probes)
    out << "probe " << format_scalar(c.a) << ' ' << format_scalar(c.b) << ' ' << format_scalar(c.c) << '\n';
}

namespace {

template <Scalar T>
T scalar_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw ParseError(std::string("report: missing field '") + key + "'");
  const std::string s = j[key].get<std::string>();
  if (s == "inf") return plus_infinity<T>;
  return parse_scalar<T>(s);
}

RegionKind kind_from(const std::string& s) {
  for (RegionKind k : {RegionKind::Empty, RegionKind::Point, RegionKind::Segment, RegionKind::Polygon})
    if (s == to_string(k)) return k;
  throw ParseError("report: unknown kind '" + s + "'");
}

}  // namespace

template <Scalar T>
json report_json(const Snapshot<T>& snap, T mx, T my, const OpCounters& counters) {
  json j;
  j["precision"] = std::same_as<T, float> ? 32 : 64;
  j["box"] = {format_scalar(mx), format_scalar(my)};
  j["kind"] = to_string(snap.kind);
  json entries = json::array();
  for (const auto& e : snap.entries) {
    json item{{"octant", e.constraint.octant}, {"n", format_scalar(e.constraint.n)}, {"c", format_scalar(e.constraint.c)}};
    if (e.box) {
      const auto& b = *e.box;
      item["vertex"] = {{"ur", format_scalar(b.ur)}, {"us", format_scalar(b.us)}, {"ud", format_scalar(b.ud)},
                        {"or", format_scalar(b.or_)}, {"os", format_scalar(b.os)}, {"od", format_scalar(b.od)}};
    }
    entries.push_back(std::move(item));
  }
  j["entries"] = std::move(entries);
  j["counters"] = {{"divisions", counters.divisions},
                   {"direction_comparisons", counters.direction_comparisons},
                   {"side_tests", counters.side_tests},
                   {"exact_fallbacks", counters.exact_fallbacks}};
  return j;
}

template <Scalar T>
Snapshot<T> snapshot_from_json(const json& report) {
  try {
    Snapshot<T> snap;
    snap.kind = kind_from(report.at("kind").get<std::string>());
    for (const auto& item : report.at("entries")) {
      SnapshotEntry<T> e;
      e.constraint.octant = item.at("octant").get<int>();
      if (e.constraint.octant < 0 || e.constraint.octant >= kOctants) throw ParseError("report: octant out of range");
      e.constraint.n = scalar_field<T>(item, "n");
      e.constraint.c = scalar_field<T>(item, "c");
      if (item.contains("vertex")) {
        const auto& v = item["vertex"];
        e.box = VertexBox<T>{scalar_field<T>(v, "ur"), scalar_field<T>(v, "us"), scalar_field<T>(v, "ud"),
                             scalar_field<T>(v, "or"), scalar_field<T>(v, "os"), scalar_field<T>(v, "od")};
      }
      snap.entries.push_back(e);
    }
    const std::size_t need = snap.kind == RegionKind::Point ? 2 : snap.kind == RegionKind::Segment ? 3 : 0;
    if ((need != 0 && snap.entries.size() != need) || (snap.kind == RegionKind::Polygon && snap.entries.size() < 3))
      throw ParseError("report: wrong number of entries for its kind");
    return snap;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::string render_svg(const oracle::SnapshotGeometry& region, double mx, double my) {
  constexpr double size = 480, pad = 16;
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : region.shape.vertices) pts.emplace_back(p.x.get_d(), p.y.get_d());

  double x0 = 0, y0 = 0, x1 = mx, y1 = my;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  double span = std::max(x1 - x0, y1 - y0);
  if (!(span > 0)) span = std::max({std::fabs(x0), std::fabs(y0), 1.0}) * 1e-3;
  const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  const auto sx = [&](double x) { return pad + (x - cx) / span * size * 0.9 + size / 2; };
  const auto sy = [&](double y) { return pad + size / 2 - (y - cy) / span * size * 0.9; };

  std::ostringstream svg;
  svg.precision(17);
  const double total = size + 2 * pad;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
      << "\" viewBox=\"0 0 " << total << ' ' << total << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << pad << "\" y=\"" << pad << "\" font-family=\"monospace\" font-size=\"12\">"
      << to_string(region.shape.kind) << " (" << pts.size() << " vertices)</text>\n";
  if (pts.size() >= 3) {
    svg << "<polygon fill=\"#cfe3ff\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) svg << sx(x) << ',' << sy(y) << ' ';
    svg << "\"/>\n";
  } else if (pts.size() == 2) {
    svg << "<line stroke=\"#1f4e9c\" stroke-width=\"2\" x1=\"" << sx(pts[0].first) << "\" y1=\"" << sy(pts[0].second)
        << "\" x2=\"" << sx(pts[1].first) << "\" y2=\"" << sy(pts[1].second) << "\"/>\n";
  }
  for (const auto& [x, y] : pts)
    svg << "<circle r=\"3\" fill=\"#b00020\" cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

template std::string format_scalar<float>(float);
template std::string format_scalar<double>(double);
template float parse_scalar<float>(std::string_view);
template double parse_scalar<double>(std::string_view);
template ConstraintFile<float> parse_constraint_file<float>(std::istream&);
template ConstraintFile<double> parse_constraint_file<double>(std::istream&);
template void write_constraint_file<float>(std::ostream&, const ConstraintFile<float>&, std::string_view);
template void write_constraint_file<double>(std::ostream&, const ConstraintFile<double>&, std::string_view);
template json report_json<float>(const Snapshot<float>&, float, float, const OpCounters&);
template json report_json<double>(const Snapshot<double>&, double, double, const OpCounters&);
template Snapshot<float> snapshot_from_json<float>(const json&);
template Snapshot<double> snapshot_from_json<double>(const json&);

}  // namespace hp2d::io
