// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asymcurve/construction.hpp"
#include "asymcurve/functionals.hpp"
#include "asymcurve/verify.hpp"

using namespace asymcurve;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double peak_rss_mb() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return static_cast<double>(u.ru_maxrss) / 1024.0;
}

struct Outcome {
  bool pass = false;
  std::string summary;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s  %s: %s [%.2fs]\n", id, o.pass ? "PASS" : "FAIL", title,
              o.summary.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CheckReport single(const std::string& id) {
  RunConfig cfg = default_run_config();
  const auto r = run_suite({id}, cfg);
  return r.front();
}

Outcome from_report(const CheckReport& r) {
  std::string s = fmt("%s measured %.6g", r.check_id.c_str(), r.measured);
  if (r.bound.lower) s += fmt(", lower %.6g", *r.bound.lower);
  if (r.bound.upper) s += fmt(", upper %.6g", *r.bound.upper);
  s += fmt(", margin %.3g", r.margin);
  return {r.pass && !r.errored, s};
}

const AssembledCurve& gamma5() {
  static const AssembledCurve g = assemble_gamma(5, 5);
  return g;
}

const CurveStack& stack(int n) {
  static std::vector<std::unique_ptr<CurveStack>> cache(8);
  if (!cache[n]) cache[n] = std::make_unique<CurveStack>(build_gamma_n(n, n));
  return *cache[n];
}

std::vector<double> ladder_deltas(double diam) {
  std::vector<double> d;
  for (int k = 3; k <= 10; ++k) d.push_back(std::ldexp(diam, -k));
  return d;
}

SampledCurve circle(Index m) {
  Eigen::Matrix2Xd p(2, m);
  for (Index j = 0; j < m; ++j) {
    const double th = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    p.col(j) = Point(std::cos(th), std::sin(th));
  }
  return SampledCurve(std::move(p), true);
}

SampledCurve segment(Index m) {
  Eigen::Matrix2Xd p(2, m + 1);
  for (Index j = 0; j <= m; ++j)
    p.col(j) = Point(j == m ? 1.0 : static_cast<double>(j) / static_cast<double>(m), 0.0);
  return SampledCurve(std::move(p), false);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const auto start = Clock::now();

  criterion(1, "bump length sandwich", [] {
    const auto t0 = Clock::now();
    Outcome o = from_report(single("L1"));
    const double t = seconds_since(t0);
    o.pass = o.pass && t < 1.0;
    o.summary += fmt(", runtime %.3fs < 1s", t);
    return o;
  });

  criterion(2, "bump deviation", [] {
    const auto t0 = Clock::now();
    Outcome o = from_report(single("L2"));
    const double t = seconds_since(t0);
    o.pass = o.pass && t < 1.0;
    o.summary += fmt(", runtime %.3fs < 1s", t);
    return o;
  });

  criterion(3, "level-ratio sandwich", [] {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst_low = INFINITY, worst_high = INFINITY;
    for (int n : {4, 5}) {
      const CurveStack& st = stack(n);
      for (int k = 2; k <= st.depth(); ++k) {
        const double beta = st.level(k).params->beta;
        const double r = st.level(k).curve.length() / st.level(k - 1).curve.length();
        worst_low = std::min(worst_low, (r - 1.0) / beta);
        worst_high = std::min(worst_high, 6.0 - (r - 1.0) / beta);
        ok = ok && r >= 1.0 + 0.95 * beta && r <= 1.0 + 6.0 * beta;
      }
    }
    const double t = seconds_since(t0), mb = peak_rss_mb();
    return Outcome{ok && t < 300.0 && mb < 2048.0,
                   fmt("min (r-1)/beta %.4g >= 0.95, min 6-(r-1)/beta %.4g >= 0, "
                       "runtime %.1fs < 300s, peak memory %.0f MB < 2048 MB",
                       worst_low, worst_high, t, mb)};
  });

  criterion(4, "non-smoothness witness", [] {
    bool ok = true;
    std::string s;
    for (int n : {4, 5}) {
      const double v = std::ldexp(stack(n).top().length(), n);
      ok = ok && v >= std::exp(0.2) && v <= 2 * std::exp(3.0);
      s += fmt("n=%d: 2^n length %.6g in [%.4f, %.4f]; ", n, v, std::exp(0.2), 2 * std::exp(3.0));
    }
    return Outcome{ok, s};
  });

  criterion(5, "cross-level deviation", [] { return from_report(single("L3")); });

  criterion(6, "conformality scans", [] {
    bool ok = true;
    std::string s;
    PairScanConfig cfg;
    cfg.pair_budget = 200000;
    for (int n : {4, 5}) {
      const SampledCurve& c = stack(n).top();
      cfg.delta = point_set_diameter(c.points());
      const double v = scan_sup(c, Functional::conformality, cfg).sup_value;
      const double bound = 1.0 + 45.0 / std::sqrt(n);
      ok = ok && v <= bound;
      s += fmt("n=%d sup %.4g <= %.4g; ", n, v, bound);
    }
    const SampledCurve& g = gamma5().curve;
    const PairEvaluator ev(g);
    const auto ladder = scan_ladder(ev, Functional::conformality,
                                    ladder_deltas(point_set_diameter(g.points())), cfg);
    std::vector<double> sups;
    for (const auto& r : ladder)
      if (r) sups.push_back(r->sup_value);
    bool mono = sups.size() >= 2 && sups.back() < sups.front();
    for (std::size_t i = 1; i < sups.size(); ++i) mono = mono && sups[i] <= sups[i - 1];
    s += "assembled ladder";
    for (double v : sups) s += fmt(" %.4g", v);
    s += mono ? " (non-increasing, decreasing overall)" : " (not monotone)";
    return Outcome{ok && mono, s};
  });

  criterion(7, "chord-arc constant", [] {
    const SampledCurve& g = gamma5().curve;
    PairScanConfig cfg;
    cfg.delta = g.length();
    cfg.pair_budget = 200000;
    const ScanResult r = scan_sup(g, Functional::chordarc, cfg);
    const double gate = 8 * std::exp(8.0);
    return Outcome{r.sup_value <= gate,
                   fmt("sup %.6g <= 8e^8 = %.6g; empirical scale <= 10: %s (%zu pairs)",
                       r.sup_value, gate, r.sup_value <= 10.0 ? "yes" : "no",
                       r.pairs_evaluated)};
  });

  criterion(8, "uniform approximability", [] {
    const SampledCurve seg = segment(512);
    const UAResult rs = uniform_approx_n(seg, {0.0, seg.length()}, 0.01, 64, UAMode::equal);
    const SampledCurve circ = circle(16384);
    const UAResult rc = uniform_approx_n(circ, {0.0, circ.length()}, 0.01, 64, UAMode::equal);
    const double oracle13 = std::numbers::pi / (13 * std::sin(std::numbers::pi / 13));
    const double oracle12 = std::numbers::pi / (12 * std::sin(std::numbers::pi / 12));
    bool ok = rs.found && rs.n == 1 && rc.found && rc.n == 13 && oracle12 > 1.01 &&
              oracle13 <= 1.01;

    // Minimal n on the blocks of gamma. The last block only has to fail up
    // to the previous block's n for the sequence to increase strictly.
    const AssembledCurve& g = gamma5();
    auto block = [&](int m) { return SubarcRef{g.marker_s[m], g.marker_s[m - 1]}; };
    const UAResult r3 = uniform_approx_n(g.curve, block(3), 0.05, 1'000'000, UAMode::equal);
    const UAResult r4 = uniform_approx_n(g.curve, block(4), 0.05, 1'000'000, UAMode::equal);
    ok = ok && r3.found && r4.found && r4.n > r3.n;
    UAResult r5;
    if (ok) {
      r5 = uniform_approx_n(g.curve, block(5), 0.05, r4.n, UAMode::equal);
      ok = !r5.found;
    }
    return Outcome{ok, fmt("segment n=%d; circle n=%d (oracle n=13); gamma blocks at eps 0.05: "
                           "m=3 n=%d, m=4 n=%d, m=5 n>%d",
                           rs.n, rc.n, r3.n, r4.n, r4.n)};
  });

  criterion(9, "slope bound", [] { return from_report(single("L6")); });

  criterion(10, "projection ratio", [] { return from_report(single("L4")); });

  criterion(11, "oracle equivalence", [] {
    std::mt19937_64 rng(11);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    std::size_t curves = 0, mismatches = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const Index m = 20 + static_cast<Index>(rng() % 281);
      std::vector<Point> pts{Point::Zero()};
      double heading = 0.0;
      for (Index j = 1; j < m; ++j) {
        heading += uni(-1.0, 1.0);
        pts.push_back(pts.back() + uni(0.1, 1.0) * Point(std::cos(heading), std::sin(heading)));
      }
      const SampledCurve c = SampledCurve::from_points(pts, trial % 3 == 0);
      const PairEvaluator ev(c);
      PairScanConfig cfg;
      cfg.delta = uni(0.5, 5.0);
      cfg.pair_budget = 100000;
      for (Functional f : {Functional::chordarc, Functional::conformality}) {
        const ScanResult r = scan_sup(ev, f, cfg);
        double brute = 1.0;
        bool have = false;
        for (Index i = 0; i < c.size(); ++i)
          for (Index j = i + 1; j < c.size(); ++j) {
            const double chord = (c.point(i) - c.point(j)).norm();
            if (chord > cfg.delta || chord == 0.0) continue;
            const double v = ev.eval(f, c.s(i), c.s(j));
            if (!have || v > brute) brute = v;
            have = true;
          }
        ++curves;
        if (!r.exhaustive || r.sup_value != brute) ++mismatches;
      }
    }

    std::size_t worse = 0, subarcs = 0;
    const SampledCurve circ = circle(4096);
    const SampledCurve& g = gamma5().curve;
    for (const SampledCurve* c : {&circ, &g}) {
      for (int trial = 0; trial < 100; ++trial) {
        // Sized by sample count so the dp mode stays within its vertex limit.
        const Index first = static_cast<Index>(rng() % static_cast<std::uint64_t>(c->size() - 1600));
        const Index last = first + 10 + static_cast<Index>(rng() % 1500);
        const SubarcRef sub{c->s(first) + uni(0.0, 0.5) * (c->s(first + 1) - c->s(first)),
                            c->s(last)};
        const auto eq = ua_chord_sums(*c, sub, 8, UAMode::equal);
        const auto dp = ua_chord_sums(*c, sub, 8, UAMode::dp);
        for (std::size_t k = 0; k < eq.size(); ++k)
          if (dp[k] < eq[k]) {
            ++worse;
            break;
          }
        ++subarcs;
      }
    }
    return Outcome{mismatches == 0 && worse == 0,
                   fmt("%zu exhaustive scans, %zu differ from brute force bitwise; "
                       "%zu subarcs, dp worse than equal on %zu",
                       curves, mismatches, subarcs, worse)};
  });

  criterion(12, "deterministic verify report", [] {
    const fs::path dir = fs::temp_directory_path() / ("asymcurve_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    int codes[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path report = dir / ("report" + std::to_string(i) + ".json");
      const std::string cmd = std::string("\"") + ASYMCURVE_CLI_PATH +
                              "\" verify --suite all --report \"" + report.string() + "\" 2>\"" +
                              (dir / "stderr.txt").string() + "\"";
      const int status = std::system(cmd.c_str());
      codes[i] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    const std::string a = slurp(dir / "report0.json"), b = slurp(dir / "report1.json");
    const bool same = !a.empty() && a == b;
    fs::remove_all(dir);
    return Outcome{same && codes[0] == 0 && codes[1] == 0,
                   fmt("exit codes %d and %d, %zu report bytes, identical: %s", codes[0],
                       codes[1], a.size(), same ? "yes" : "no")};
  });

  std::printf("acceptance: %d of 12 criteria failed, %.1fs total, peak memory %.0f MB\n",
              failures, seconds_since(start), peak_rss_mb());
  return failures == 0 ? 0 : 1;
}
