// Command-line front end: build, assemble, analyze, approx, verify, export-svg.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "asymcurve/construction.hpp"
#include "asymcurve/functionals.hpp"
#include "asymcurve/io.hpp"
#include "asymcurve/verify.hpp"

namespace fs = std::filesystem;
using namespace asymcurve;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw RangeError("bad number in list: " + item);
    out.push_back(v);
  }
  return out;
}

fs::path sibling(const fs::path& p, const std::string& ext) {
  fs::path q = p;
  q.replace_extension(ext);
  return q;
}

void emit(const nlohmann::json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and analyse bump-refined planar curves"};
  app.require_subcommand(1);

  // build
  int b_n = 4, b_depth = 0, b_spb = 16;
  std::size_t b_budget = default_budget();
  std::string b_out, b_manifest, b_svg;
  auto* build = app.add_subcommand("build", "Build one block and write CSV + manifest");
  build->add_option("--n", b_n, "block index n")->required()->check(CLI::PositiveNumber);
  build->add_option("--depth", b_depth, "refinement depth (default n)");
  build->add_option("--samples-per-bump", b_spb, "samples per bump")->check(CLI::Range(2, 1 << 20));
  build->add_option("--budget", b_budget, "total sample budget");
  build->add_option("--out", b_out, "curve CSV path")->required();
  build->add_option("--manifest", b_manifest, "manifest path (default: CSV path with .json)");
  build->add_option("--svg", b_svg, "also write an SVG");

  // assemble
  int a_nmax = 5, a_cap = 5, a_spb = 16;
  std::size_t a_budget = default_budget();
  std::string a_out, a_svg;
  auto* assemble = app.add_subcommand("assemble", "Assemble the closed curve");
  assemble->add_option("--n-max", a_nmax, "last block")->check(CLI::Range(2, 64));
  assemble->add_option("--depth-cap", a_cap, "depth cap per block")->check(CLI::PositiveNumber);
  assemble->add_option("--samples-per-bump", a_spb, "samples per bump")->check(CLI::Range(2, 1 << 20));
  assemble->add_option("--budget", a_budget, "total sample budget");
  assemble->add_option("--out", a_out, "curve CSV path")->required();
  assemble->add_option("--svg", a_svg, "also write an SVG");

  // analyze
  std::string z_in, z_out, z_deltas;
  std::size_t z_pairs = 200'000;
  std::uint64_t z_seed = 0;
  double z_eps = 0.01;
  int z_nbudget = 64;
  auto* analyze = app.add_subcommand("analyze", "Classify a curve from its CSV");
  analyze->add_option("--in", z_in, "curve CSV")->required();
  analyze->add_option("--deltas", z_deltas,
                      "decreasing chord scales (default 2^-3..2^-10 times the diameter)");
  analyze->add_option("--pairs", z_pairs, "pair budget per scan")->check(CLI::PositiveNumber);
  analyze->add_option("--seed", z_seed, "sampling seed");
  analyze->add_option("--epsilon", z_eps, "uniform approximability tolerance");
  analyze->add_option("--n-budget", z_nbudget, "largest partition size tried");
  analyze->add_option("--out", z_out, "report JSON (default stdout)");

  // approx
  std::string p_in, p_sub, p_mode = "equal";
  double p_eps = 0.01;
  int p_nmax = 1000;
  auto* approx = app.add_subcommand("approx", "Minimal partition size for a subarc");
  approx->add_option("--in", p_in, "curve CSV")->required();
  approx->add_option("--epsilon", p_eps, "tolerance")->check(CLI::PositiveNumber);
  approx->add_option("--n-max", p_nmax, "largest n tried")->check(CLI::PositiveNumber);
  approx->add_option("--mode", p_mode, "equal or dp")->check(CLI::IsMember({"equal", "dp"}));
  approx->add_option("--sub", p_sub, "S0,S1 arclengths (default: whole curve)");

  // verify
  std::string v_suite = "all", v_report;
  RunConfig v_cfg = default_run_config();
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--suite", v_suite, "all or a comma list of L1..L12");
  verify->add_option("--n", v_cfg.n, "block index for the n-dependent checks")->check(CLI::Range(2, 12));
  verify->add_option("--n-max", v_cfg.n_max, "last block of the assembled curve")->check(CLI::Range(2, 12));
  verify->add_option("--depth-cap", v_cfg.depth_cap, "depth cap")->check(CLI::PositiveNumber);
  verify->add_option("--seed", v_cfg.seed, "sampling seed");
  verify->add_option("--pairs", v_cfg.pair_budget, "pair budget per scan")->check(CLI::PositiveNumber);
  verify->add_option("--report", v_report, "report JSON (default stdout)");

  // export-svg
  std::string e_in, e_out;
  double e_stroke = 0.002;
  auto* svg = app.add_subcommand("export-svg", "Render a curve CSV as SVG");
  svg->add_option("--in", e_in, "curve CSV")->required();
  svg->add_option("--out", e_out, "SVG path")->required();
  svg->add_option("--stroke", e_stroke, "stroke width")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      const int depth = b_depth > 0 ? b_depth : b_n;
      const CurveStack stack = build_gamma_n(b_n, depth, b_spb, b_budget);
      for (const auto& w : stack.warnings()) std::cerr << "warning: " << w << "\n";
      write_csv(fs::path(b_out), stack.top());
      const fs::path manifest = b_manifest.empty() ? sibling(b_out, ".json") : fs::path(b_manifest);
      write_text(manifest, build_manifest(stack, b_spb, b_budget).dump(2) + "\n");
      if (!b_svg.empty()) write_svg(fs::path(b_svg), stack.top());
      return 0;
    }
    if (*assemble) {
      const AssembledCurve g = assemble_gamma(a_nmax, a_cap, a_spb, a_budget);
      write_csv(fs::path(a_out), g.curve);
      if (!a_svg.empty()) write_svg(fs::path(a_svg), g.curve);
      return 0;
    }
    if (*analyze) {
      const SampledCurve c = read_csv(fs::path(z_in));
      const double diam = point_set_diameter(c.points());
      std::vector<double> deltas;
      if (z_deltas.empty())
        for (int e = 3; e <= 10; ++e) deltas.push_back(std::ldexp(diam, -e));
      else
        deltas = parse_list(z_deltas);
      PairScanConfig cfg;
      cfg.delta = diam;
      cfg.pair_budget = z_pairs;
      cfg.seed = z_seed;
      emit(to_json(classify(c, deltas, z_eps, z_nbudget, cfg)), z_out);
      return 0;
    }
    if (*approx) {
      const SampledCurve c = read_csv(fs::path(p_in));
      SubarcRef sub{0.0, c.length()};
      if (!p_sub.empty()) {
        const auto v = parse_list(p_sub);
        if (v.size() != 2) throw RangeError("--sub needs S0,S1");
        sub = {v[0], v[1]};
      }
      const UAMode mode = p_mode == "dp" ? UAMode::dp : UAMode::equal;
      const UAResult r = uniform_approx_n(c, sub, p_eps, p_nmax, mode);
      nlohmann::json j = to_json(r);
      j["subarc"] = {sub.s_start, sub.s_end};
      j["epsilon"] = p_eps;
      j["mode"] = p_mode;
      emit(j, "");
      return r.found ? 0 : 1;
    }
    if (*verify) {
      std::vector<std::string> ids;
      std::stringstream ss(v_suite);
      for (std::string id; std::getline(ss, id, ',');) ids.push_back(id);
      const auto reports = run_suite(ids, v_cfg);
      emit(suite_report(reports, v_cfg), v_report);
      for (const auto& r : reports)
        std::fprintf(stderr, "%-4s %s%s\n", r.check_id.c_str(),
                     r.errored ? "ERROR" : (r.pass ? "pass" : "FAIL"),
                     r.gating ? "" : " (advisory)");
      return exit_code(reports);
    }
    if (*svg) {
      write_svg(fs::path(e_out), read_csv(fs::path(e_in)), e_stroke);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
