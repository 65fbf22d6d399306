// hp2d: clip constraint files, generate corpora, verify against the exact
// oracle, and draw reports.
//
// Exit codes: 0 success, 1 verification failure, 2 parse or usage error,
// 3 contract violation (for example an invalid box).
#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hp2d/clip_engine.hpp"
#include "hp2d/errors.hpp"
#include "hp2d/oracle.hpp"
#include "hp2d/report.hpp"
#include "hp2d/testgen.hpp"

namespace fs = std::filesystem;
using namespace hp2d;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitParse = 2;
constexpr int kExitContract = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::ParseError("cannot write '" + path.string() + "'");
  out << text;
}

template <Scalar T>
io::ConstraintFile<T> load(const std::string& path) {
  std::istringstream in(read_file(path));
  return io::parse_constraint_file<T>(in);
}

template <Scalar T>
Region<T> clip_all(const io::ConstraintFile<T>& file) {
  Region<T> region = Region<T>::box(file.mx, file.my);
  for (const auto& rc : file.constraints) region.add_constraint(rc);
  return region;
}

template <Scalar T>
int run_clip(const std::string& input, const std::string& out_path, const std::string& svg_path) {
  const auto file = load<T>(input);
  reset_op_counters();
  const Region<T> region = clip_all(file);
  const auto snap = region.snapshot();
  const std::string text = io::report_json(snap, file.mx, file.my, op_counters()).dump(2) + "\n";
  if (out_path.empty()) std::cout << text;
  else write_file(out_path, text);
  if (!svg_path.empty())
    write_file(svg_path, io::render_svg(oracle::geometry(snap), double(file.mx), double(file.my)));
  return 0;
}

struct GenOptions {
  int beta = 8;
  std::uint64_t seed = 1;
  int set = 32;
  std::string degenerate;
  std::size_t budget = 20;
  std::string out;
  std::size_t probe_directions = 2;
};

template <Scalar T>
std::vector<RawConstraint<T>> to_raw_all(const std::vector<testgen::IntConstraint>& ics) {
  std::vector<RawConstraint<T>> out;
  for (const auto& ic : ics) out.push_back(testgen::to_raw<T>(ic));
  return out;
}

template <Scalar T>
int run_gen(const GenOptions& opt) {
  using namespace testgen;
  if (opt.beta < 1 || opt.beta > 30) throw ContractViolation("--beta must lie in [1, 30]");
  if (std::same_as<T, float> && opt.beta > 1) throw ContractViolation("32-bit corpora need --beta 1");
  fs::create_directories(opt.out);
  Rng rng(opt.seed);
  const NormalSet ns = opt.set == 64 ? normal_set_64() : normal_set_32();
  const NormalSet probes_from = normal_set_64();
  const T extent = static_cast<T>(start_box_extent(opt.beta));

  std::vector<DegenerateKind> kinds;
  if (opt.degenerate == "point" || opt.degenerate == "all") kinds.push_back(DegenerateKind::Point);
  if (opt.degenerate == "segment" || opt.degenerate == "all") kinds.push_back(DegenerateKind::Segment);
  if (opt.degenerate == "empty" || opt.degenerate == "all") kinds.push_back(DegenerateKind::Empty);
  if (!opt.degenerate.empty() && kinds.empty()) throw ContractViolation("--degenerate must be point, segment, empty or all");

  for (std::size_t i = 0; i < opt.budget; ++i) {
    io::ConstraintFile<T> file{extent, extent, {}, {}};
    std::ostringstream comment;
    std::vector<IVec> vertices;
    if (kinds.empty()) {
      const auto normals = random_valid_subset(ns, rng, 3, 0.5);
      const GeneratedPolygon p = build_polygon(normals, opt.beta, rng);
      auto cons = polygon_constraints(p);
      rng.shuffle(cons.begin(), cons.end());
      file.constraints = to_raw_all<T>(cons);
      for (std::size_t k = 0; k < p.x.size(); ++k) vertices.push_back({p.x[k], p.y[k]});
      comment << "polygon with " << p.x.size() << " vertices, beta " << opt.beta;
    } else {
      const DegenerateKind kind = kinds[i % kinds.size()];
      const DegenerateCase dc = gen_degenerate(kind, opt.beta, rng);
      file.constraints = to_raw_all<T>(dc.constraints);
      vertices = dc.expected;
      comment << (kind == DegenerateKind::Point ? "point" : kind == DegenerateKind::Segment ? "segment" : "empty")
              << " case, beta " << opt.beta;
    }
    if (!vertices.empty()) {
      for (std::size_t d = 0; d < opt.probe_directions; ++d) {
        const IVec nu = probes_from[static_cast<std::size_t>(rng.uniform(0, 63))];
        for (const Probe& pr : probe_levels(vertices, opt.beta, nu, rng)) file.probes.push_back(to_raw<T>(pr.constraint));
      }
    }
    comment << "\nseed " << opt.seed << ", case " << i;
    std::ostringstream text;
    io::write_constraint_file(text, file, comment.str());
    char name[32];
    std::snprintf(name, sizeof name, "case_%05zu.txt", i);
    write_file(fs::path(opt.out) / name, text.str());
  }
  std::cout << "wrote " << opt.budget << " cases to " << opt.out << "\n";
  return 0;
}

// Deliberately breaks a snapshot: used to check that verify notices.
template <Scalar T>
void inject_fault(Snapshot<T>& snap) {
  if (snap.entries.empty()) return;
  T& c = snap.entries.front().constraint.c;
  c = c + std::max(std::fabs(c), T(1));
}

template <Scalar T>
std::vector<oracle::RationalLine> rational_lines(const std::vector<RawConstraint<T>>& cs) {
  std::vector<oracle::RationalLine> out;
  for (const auto& c : cs) out.push_back(oracle::to_rational(c));
  return out;
}

template <Scalar T>
bool check_case(const Region<T>& region, const std::vector<oracle::RationalLine>& lines, const io::ConstraintFile<T>& f,
                bool fault, std::string& why) {
  if (auto err = region.validate()) {
    why = "invalid region: " + *err;
    return false;
  }
  auto snap = region.snapshot();
  if (fault) inject_fault(snap);
  const auto exact = oracle::exact_intersection(lines, oracle::Rational(double(f.mx)), oracle::Rational(double(f.my)));
  const auto cmp = oracle::compare(snap, exact);
  if (!cmp.contains_exact) {
    why = snap.kind == RegionKind::Empty ? "region reported empty but the exact set is not"
                                         : "region misses part of the exact set";
    return false;
  }
  return true;
}

template <Scalar T>
int run_verify(const std::vector<std::string>& inputs, bool fault) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path().string());
    } else {
      files.push_back(in);
    }
  }
  std::sort(files.begin(), files.end());
  std::size_t checks = 0, failures = 0;
  for (const auto& path : files) {
    const auto file = load<T>(path);
    const Region<T> region = clip_all(file);
    auto lines = rational_lines(file.constraints);
    std::string why;
    ++checks;
    if (!check_case(region, lines, file, fault, why)) {
      ++failures;
      std::cerr << path << ": " << why << "\n";
    }
    for (std::size_t k = 0; k < file.probes.size(); ++k) {
      Region<T> probed = region;
      probed.add_constraint(file.probes[k]);
      lines.push_back(oracle::to_rational(file.probes[k]));
      ++checks;
      if (!check_case(probed, lines, file, fault, why)) {
        ++failures;
        std::cerr << path << ": probe " << k << ": " << why << "\n";
      }
      lines.pop_back();
    }
  }
  std::cout << "verified " << files.size() << " files, " << checks << " checks, " << failures << " failures\n";
  return failures == 0 ? 0 : kExitVerify;
}

template <Scalar T>
int run_plot(const std::string& report_path, const std::string& svg_path) {
  const auto j = nlohmann::json::parse(read_file(report_path), nullptr, false);
  if (j.is_discarded()) throw io::ParseError("report is not valid JSON");
  const auto snap = io::snapshot_from_json<T>(j);
  double mx = 1, my = 1;
  if (j.contains("box") && j["box"].size() == 2) {
    mx = io::parse_scalar<double>(j["box"][0].get<std::string>());
    my = io::parse_scalar<double>(j["box"][1].get<std::string>());
  }
  const std::string svg = io::render_svg(oracle::geometry(snap), mx, my);
  if (svg_path.empty()) std::cout << svg;
  else write_file(svg_path, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative half-plane intersection in the plane"};
  app.require_subcommand(1);
  app.fallthrough();
  int precision = 64;
  app.add_option("--precision", precision, "Scalar width in bits")->check(CLI::IsMember({32, 64}));

  std::string input, out_path, svg_path;
  auto* clip = app.add_subcommand("clip", "Clip the box of a constraint file and print the region report");
  clip->add_option("file", input, "Constraint file")->required();
  clip->add_option("--out", out_path, "Write the report here instead of stdout");
  clip->add_option("--svg", svg_path, "Also draw the region");

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "Write a corpus of generated test problems");
  gen->add_option("--beta", gen_opt.beta, "Size parameter (coordinates below 2^(beta+17))");
  gen->add_option("--seed", gen_opt.seed, "64-bit seed");
  gen->add_option("--set", gen_opt.set, "Normal set for polygons")->check(CLI::IsMember({32, 64}));
  gen->add_option("--degenerate", gen_opt.degenerate, "point, segment, empty or all");
  gen->add_option("--budget", gen_opt.budget, "Number of cases");
  gen->add_option("--out", gen_opt.out, "Output directory")->required();

  std::vector<std::string> verify_inputs;
  bool fault = false;
  auto* verify = app.add_subcommand("verify", "Clip every file and compare against the exact oracle");
  verify->add_option("inputs", verify_inputs, "Corpus directories or files")->required();
  verify->add_flag("--inject-fault", fault, "Corrupt every result before checking (harness self-test)");

  std::string report_path;
  auto* plot = app.add_subcommand("plot", "Render a region report as SVG");
  plot->add_option("report", report_path, "Report written by clip")->required();
  plot->add_option("--svg", svg_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  const bool single = precision == 32;
  try {
    if (clip->parsed()) return single ? run_clip<float>(input, out_path, svg_path) : run_clip<double>(input, out_path, svg_path);
    if (gen->parsed()) return single ? run_gen<float>(gen_opt) : run_gen<double>(gen_opt);
    if (verify->parsed()) return single ? run_verify<float>(verify_inputs, fault) : run_verify<double>(verify_inputs, fault);
    if (plot->parsed()) return single ? run_plot<float>(report_path, svg_path) : run_plot<double>(report_path, svg_path);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kExitContract;
  }
  return kExitParse;
}
