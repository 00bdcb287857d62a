#include "asymcurve/verify.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "asymcurve/bump.hpp"
#include "asymcurve/construction.hpp"
#include "asymcurve/functionals.hpp"
#include "asymcurve/io.hpp"

namespace asymcurve {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const Bound& b) { return {{"lower", opt(b.lower)}, {"upper", opt(b.upper)}}; }

struct Case {
  json detail;
  double measured = 0.0;
  Bound bound;
  bool ok = true;  // side conditions beyond the bound itself
};

double scale_of(const Bound& b) {
  double s = 0.0;
  if (b.lower) s = std::max(s, std::abs(*b.lower));
  if (b.upper) s = std::max(s, std::abs(*b.upper));
  return s > 0.0 ? s : 1.0;
}

/// Headline is the first failing case, else the smallest relative margin.
CheckReport finish(const std::string& id, const std::string& ref,
                   std::vector<Case> cases, bool gating) {
  if (cases.empty()) throw Error(id + ": no cases evaluated");
  CheckReport r;
  r.check_id = id;
  r.reference = ref;
  r.gating = gating;
  r.pass = true;
  std::size_t head = 0;
  double worst = INFINITY;
  bool head_failed = false;
  json list = json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    Case& c = cases[i];
    const double m = c.bound.margin(c.measured);
    const bool pass = c.ok && m >= 0.0;
    c.detail["measured"] = c.measured;
    c.detail["bound"] = to_json(c.bound);
    c.detail["margin"] = m;
    c.detail["pass"] = pass;
    list.push_back(c.detail);
    if (head_failed) continue;
    if (!pass) {
      head = i;
      head_failed = true;
      r.pass = false;
    } else if (m / scale_of(c.bound) < worst) {
      worst = m / scale_of(c.bound);
      head = i;
    }
  }
  r.measured = cases[head].measured;
  r.bound = cases[head].bound;
  r.margin = r.bound.margin(r.measured);
  r.details = {{"headline_case", head}, {"cases", std::move(list)}};
  return r;
}

SampledCurve unit_segment(Index m) {
  Eigen::Matrix2Xd p(2, m + 1);
  for (Index j = 0; j <= m; ++j)
    p.col(j) = Point(j == m ? 1.0 : static_cast<double>(j) / static_cast<double>(m), 0.0);
  return SampledCurve(std::move(p), false);
}

/// Unit-length arc of constant signed curvature kappa starting at the origin
/// heading along +x.
SampledCurve unit_arc(double kappa, Index m) {
  const double r = 1.0 / kappa;
  Eigen::Matrix2Xd p(2, m + 1);
  for (Index j = 0; j <= m; ++j) {
    const double th = static_cast<double>(j) / static_cast<double>(m) * kappa;
    p.col(j) = Point(r * std::sin(th), r * (1.0 - std::cos(th)));
  }
  return SampledCurve(std::move(p), false);
}

SampledCurve ellipse(double a, double b, Index m) {
  Eigen::Matrix2Xd p(2, m);
  for (Index j = 0; j < m; ++j) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    p.col(j) = Point(a * std::cos(th), b * std::sin(th));
  }
  return SampledCurve(std::move(p), true);
}

SampledCurve concat(const std::vector<const SampledCurve*>& parts) {
  std::vector<Point> pts;
  for (const SampledCurve* c : parts)
    for (Index i = pts.empty() ? 0 : 1; i < c->size(); ++i) pts.push_back(c->point(i));
  return SampledCurve::from_points(pts, false);
}

std::vector<double> scaled(const std::vector<double>& f, double by) {
  std::vector<double> out;
  for (double v : f) out.push_back(v * by);
  return out;
}

class Context {
 public:
  explicit Context(const RunConfig& cfg) : cfg_(cfg) {}

  const RunConfig& cfg() const { return cfg_; }

  const CurveStack& stack(int n) {
    auto it = stacks_.find(n);
    if (it == stacks_.end())
      it = stacks_
               .emplace(n, build_gamma_n(n, std::min(n, cfg_.depth_cap),
                                         cfg_.samples_per_bump, cfg_.budget))
               .first;
    return it->second;
  }

  const AssembledCurve& gamma() {
    if (!gamma_)
      gamma_ = assemble_gamma(cfg_.n_max, cfg_.depth_cap, cfg_.samples_per_bump,
                              cfg_.budget);
    return *gamma_;
  }

  PairScanConfig scan(double delta, std::size_t budget) const {
    PairScanConfig c;
    c.delta = delta;
    c.pair_budget = budget;
    c.seed = cfg_.seed;
    return c;
  }

 private:
  const RunConfig& cfg_;
  std::map<int, CurveStack> stacks_;
  std::optional<AssembledCurve> gamma_;
};

const double kHs[] = {0.01, 0.02, 0.05};

struct Base {
  const char* name;
  double kappa;
  SampledCurve curve;
};

// L1 compares against polylines, so it needs the fine grid; deviation only
// needs the crest on a sample, which any even m gives.
std::vector<Base> l1_bases(Index m) {
  return {{"segment", 0.0, unit_segment(m)}, {"arc", -0.5, unit_arc(-0.5, m)}};
}

CheckReport check_l1(Context& ctx) {
  const Tolerances& tol = ctx.cfg().tol;
  std::vector<Case> cases;
  for (const Base& b : l1_bases(65536))
    for (double h : kHs) {
      const double quad = embedded_length(b.kappa, h);
      const double err = std::abs(quad - embedded_length(b.kappa, h, 8192));
      const double poly = embed_bump(b.curve, h, 1).length() / b.curve.length();
      Case c;
      c.measured = quad;
      c.bound = {1.0 + h * h, 1.0 + 4.0 * h * h + std::abs(b.kappa) * h};
      c.ok = err < tol.quadrature && std::abs(poly - quad) < tol.quadrature;
      c.detail = {{"base", b.name},     {"kappa", b.kappa},
                  {"h", h},             {"quadrature_error", err},
                  {"polyline_length", poly}, {"polyline_gap", std::abs(poly - quad)}};
      cases.push_back(std::move(c));
    }
  return finish("L1", "bump length sandwich 1 + h^2 <= length <= 1 + 4h^2 + K h",
                std::move(cases), true);
}

CheckReport check_l2(Context& ctx) {
  std::vector<Case> cases;
  for (const Base& b : l1_bases(8192))
    for (double h : kHs) {
      Case c;
      c.measured = max_deviation(embed_bump(b.curve, h, 1), b.curve);
      c.bound.upper = h + ctx.cfg().tol.deviation;
      c.detail = {{"base", b.name}, {"kappa", b.kappa}, {"h", h}};
      cases.push_back(std::move(c));
    }
  return finish("L2", "deviation of the embedded bump from its base is at most h",
                std::move(cases), true);
}

CheckReport check_l3(Context& ctx) {
  const int n = ctx.cfg().n;
  const CurveStack& st = ctx.stack(n);
  std::vector<Case> cases;
  for (int k = 1; k < st.depth(); ++k) {
    double sum = 0.0;
    for (int j = k; j < st.depth(); ++j) {
      const LevelParams& p = *st.level(j + 1).params;
      sum += p.eps * std::sqrt(p.beta);
    }
    const double advisory = 4.0 * st.level(k + 1).params->eps / std::sqrt(n);
    Case c;
    c.measured = max_deviation(st.top(), st.level(k).curve);
    c.bound.upper = ctx.cfg().tol.cross_level * 2.0 * sum;
    c.detail = {{"n", n},
                {"k", k},
                {"depth", st.depth()},
                {"summed_bound", 2.0 * sum},
                {"advisory_bound", advisory},
                {"within_advisory", c.measured <= advisory}};
    cases.push_back(std::move(c));
  }
  return finish("L3",
                "top level stays within 2 sum eps sqrt(beta) of every lower level; "
                "4 eps / sqrt(n) reported",
                std::move(cases), n >= 5);
}

CheckReport check_l4(Context& ctx) {
  const int n = ctx.cfg().n;
  const CurveStack& st = ctx.stack(n);
  const double slack = ctx.cfg().tol.excess_slack;
  std::vector<Case> cases;
  for (int k = 2; k <= st.depth(); ++k) {
    const Level& L = st.level(k);
    const double beta = L.params->beta;
    double worst = 1.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < L.map.child_s.size(); ++i) {
      const double r = (L.map.child_s[i + 1] - L.map.child_s[i]) /
                       (L.map.parent_s[i + 1] - L.map.parent_s[i]);
      if (r > worst) {
        worst = r;
        at = i;
      }
    }
    Case c;
    c.measured = worst;
    c.bound.upper = 1.0 + slack * 8.0 * beta;
    c.detail = {{"n", n},
                {"level", k},
                {"beta", beta},
                {"raw_bound", 1.0 + 8.0 * beta},
                {"raw_margin", 1.0 + 8.0 * beta - worst},
                {"at_child_s", L.map.child_s[at]},
                {"segments", L.map.child_s.size() - 1}};
    cases.push_back(std::move(c));
  }
  return finish("L4", "arclength of a child arc over its parent arc is at most 1 + 8 beta",
                std::move(cases), n >= 5);
}

CheckReport check_l5(Context& ctx) {
  constexpr int lo = 8, hi = 12, grid = 16;
  std::vector<SampledCurve> blocks;
  for (int n = hi; n >= lo; --n) blocks.push_back(build_level1(n));
  std::vector<const SampledCurve*> parts;
  for (const auto& b : blocks) parts.push_back(&b);
  const SampledCurve curve = concat(parts);
  const PairEvaluator ev(curve);

  // Grid samples with their block; shared endpoints go to the finer block.
  std::vector<std::pair<Index, int>> pts;
  Index base = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int n = hi - static_cast<int>(b);
    const Index m = blocks[b].size() - 1;
    for (Index j = b == 0 ? 0 : grid; j <= m; j += grid) pts.emplace_back(base + j, n);
    base += m;
  }

  std::map<std::pair<int, int>, std::pair<double, std::size_t>> best;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double v = ev.conformality(curve.s(pts[i].first), curve.s(pts[j].first));
      const auto key = std::minmax(pts[i].second, pts[j].second);
      auto& [mx, count] = best[{key.second, key.first}];
      mx = std::max(mx, v);
      ++count;
    }
  std::vector<Case> cases;
  for (const auto& [key, val] : best) {
    Case c;
    c.measured = val.first;
    c.bound.upper = 1.0 + std::numbers::pi / std::min(key.first, key.second);
    c.detail = {{"n1", key.first}, {"n2", key.second}, {"pairs", val.second}};
    cases.push_back(std::move(c));
  }
  return finish("L5", "level-1 graphs of blocks n1, n2: conformality at most 1 + pi / min(n1, n2)",
                std::move(cases), ctx.cfg().n >= 5);
}

CheckReport check_l6(Context& ctx) {
  const int n = ctx.cfg().n;
  const CurveStack& st = ctx.stack(n);
  std::vector<Case> cases;
  for (int k = 2; k <= st.depth(); ++k) {
    const Level& L = st.level(k);
    const ArclengthInterpolator interp(st.level(k - 1).curve);
    const double slope = 8.0 * std::sqrt(L.params->beta);
    double excess = -INFINITY, ratio = 0.0;
    std::size_t pieces = 0, bad_order = 0;
    for (const PieceRecord& pc : L.pieces) {
      if (!pc.embellished) continue;
      ++pieces;
      const double len = pc.parent_s1 - pc.parent_s0;
      const Point o = L.curve.point(pc.child_begin);
      const Point t = interp.unit_tangent(pc.parent_s0);
      const Point up = pc.side * rot90(t);
      double prev_x = -INFINITY;
      for (Index j = pc.child_begin; j <= pc.child_end; ++j) {
        const Point d = (L.curve.point(j) - o) / len;
        const double x = d.dot(t), y = d.dot(up);
        if (j > pc.child_begin) {
          if (!(x > prev_x)) ++bad_order;
          excess = std::max(excess, y - slope * x);
          if (x > 0.0) ratio = std::max(ratio, y / x);
        }
        prev_x = x;
      }
    }
    Case c;
    c.measured = excess;
    c.bound.upper = ctx.cfg().tol.slope;
    c.ok = bad_order == 0;
    c.detail = {{"n", n},
                {"level", k},
                {"slope_bound", slope},
                {"max_slope", ratio},
                {"pieces", pieces},
                {"non_monotone_steps", bad_order}};
    cases.push_back(std::move(c));
  }
  return finish("L6",
                "each embedded piece is a graph over its start tangent with "
                "Y(t) <= 8 sqrt(beta) t",
                std::move(cases), n >= 5);
}

CheckReport check_l7(Context& ctx) {
  const int n = ctx.cfg().n;
  const CurveStack& st = ctx.stack(n);
  std::vector<Case> cases;
  for (int k = 2; k <= st.depth(); ++k) {
    const Level& L = st.level(k);
    const auto& P = L.curve.points();
    const auto& S = L.curve.arclen();
    double worst = 1.0;
    std::size_t windows = 0, pairs = 0;
    for (std::size_t p = 0; p < L.pieces.size(); ++p) {
      if (!L.pieces[p].embellished) continue;
      const Index lo = L.pieces[p].child_begin;
      Index hi = L.pieces[p].child_end;
      if (p + 1 < L.pieces.size() && L.pieces[p + 1].embellished) hi = L.pieces[p + 1].child_end;
      ++windows;
      for (Index a = lo; a < hi; ++a)
        for (Index b = a + 1; b <= hi; ++b) {
          worst = std::max(worst, (S[b] - S[a]) / (P.col(b) - P.col(a)).norm());
          ++pairs;
        }
    }
    Case c;
    c.measured = worst;
    c.bound.upper = 1.0 + 32.0 / std::sqrt(n);
    c.detail = {{"n", n}, {"level", k}, {"windows", windows}, {"pairs", pairs}};
    cases.push_back(std::move(c));
  }
  return finish("L7", "chord-arc ratio on one bump or two adjacent bumps at most 1 + 32 / sqrt(n)",
                std::move(cases), n >= 5);
}

Case ladder_case(Context& ctx, const SampledCurve& curve, double bound, json detail) {
  const PairEvaluator ev(curve);
  const double diam = point_set_diameter(curve.points());
  std::vector<double> deltas{diam};
  for (double d : scaled(ctx.cfg().deltas, diam)) deltas.push_back(d);
  const auto ladder =
      scan_ladder(ev, Functional::conformality, deltas, ctx.scan(diam, ctx.cfg().pair_budget));
  std::size_t pairs = 0;
  for (const auto& r : ladder)
    if (r) pairs += r->pairs_evaluated;
  if (!ladder.front()) throw EmptyScanError("no pairs scanned");
  Case c;
  c.measured = ladder.front()->sup_value;
  c.bound.upper = bound;
  detail["argmax"] = {ladder.front()->s_a, ladder.front()->s_b};
  detail["pairs_evaluated"] = pairs;
  detail["samples"] = curve.size();
  c.detail = std::move(detail);
  return c;
}

CheckReport check_l8(Context& ctx) {
  const int n = ctx.cfg().n;
  std::vector<Case> cases;
  for (int m = std::max(2, n - 1); m <= n; ++m) {
    const CurveStack& st = ctx.stack(m);
    cases.push_back(ladder_case(ctx, st.top(), 1.0 + 45.0 / std::sqrt(m),
                                {{"n", m}, {"depth", st.depth()}}));
  }
  return finish("L8", "conformality within one block at most 1 + 45 / sqrt(n)",
                std::move(cases), n >= 5);
}

CheckReport check_l9(Context& ctx) {
  const int n = ctx.cfg().n;
  const int N = std::max(2, n - 1);
  std::vector<const SampledCurve*> parts;
  for (int m = n; m >= N; --m) parts.push_back(&ctx.stack(m).top());
  const SampledCurve uni = concat(parts);
  std::vector<Case> cases;
  cases.push_back(ladder_case(ctx, uni, 1.0 + 78.0 / std::sqrt(N),
                              {{"N", N}, {"blocks", json::array({N, n})}}));
  return finish("L9", "conformality over the union of blocks n >= N at most 1 + 78 / sqrt(N)",
                std::move(cases), n >= 5);
}

CheckReport check_l10(Context& ctx) {
  const int n = ctx.cfg().n;
  const double lower = std::exp(0.2), upper = 2.0 * std::exp(3.0);
  std::vector<Case> cases;
  for (int m = std::max(2, n - 1); m <= n; ++m) {
    const CurveStack& st = ctx.stack(m);
    const double scale = std::ldexp(1.0, m);
    double product = scale * st.level(1).curve.length();
    json ratios = json::array();
    bool ratios_ok = true;
    for (int k = 2; k <= st.depth(); ++k) {
      const double beta = st.level(k).params->beta;
      product *= 1.0 + beta;
      const double r = st.level(k).curve.length() / st.level(k - 1).curve.length();
      const bool in = r >= 1.0 + ctx.cfg().tol.ratio_low * beta && r <= 1.0 + 6.0 * beta;
      ratios_ok = ratios_ok && in;
      ratios.push_back({{"level", k}, {"ratio", r}, {"beta", beta}, {"within", in}});
    }
    Case c;
    c.measured = scale * st.top().length();
    c.bound = {lower, upper};
    c.ok = c.measured >= ctx.cfg().tol.product_slack * product;
    c.detail = {{"n", m},
                {"depth", st.depth()},
                {"product_bound", product},
                {"level_ratios", ratios},
                {"level_ratios_within", ratios_ok}};
    cases.push_back(std::move(c));
  }
  return finish("L10", "e^(1/5) <= 2^n length(block n) <= 2 e^3", std::move(cases), true);
}

CheckReport check_l11(Context& ctx) {
  const AssembledCurve& g = ctx.gamma();
  const PairEvaluator ev(g.curve);
  const double diam = point_set_diameter(g.curve.points());
  const auto deltas = scaled(ctx.cfg().deltas, diam);
  const auto ladder = scan_ladder(ev, Functional::conformality, deltas,
                                  ctx.scan(diam, ctx.cfg().pair_budget));
  json rungs = json::array();
  std::vector<double> sups;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    rungs.push_back({{"delta", deltas[i]},
                     {"sup", ladder[i] ? json(ladder[i]->sup_value) : json(nullptr)}});
    if (ladder[i]) sups.push_back(ladder[i]->sup_value);
  }
  if (sups.size() < 2) throw EmptyScanError("conformality ladder has fewer than two rungs");
  bool monotone = true;
  for (std::size_t i = 1; i < sups.size(); ++i) monotone = monotone && sups[i] <= sups[i - 1];

  std::vector<Case> cases;
  Case trend;
  trend.measured = sups.back();
  trend.bound.upper = sups.front();
  trend.ok = monotone && sups.back() < sups.front();
  trend.detail = {{"part", "conformality ladder"}, {"ladder", rungs}, {"non_increasing", monotone}};
  cases.push_back(std::move(trend));

  const ScanResult ca = scan_sup(ev, Functional::chordarc,
                                 ctx.scan(g.curve.length(), ctx.cfg().pair_budget));
  json witnesses = json::array();
  for (int m = 2; m <= ctx.cfg().n_max; ++m) {
    const double r = ev.chordarc(g.marker_s[static_cast<std::size_t>(m)],
                                 g.marker_s[static_cast<std::size_t>(m - 1)]);
    witnesses.push_back({{"n", m}, {"ratio", r}, {"at_least_e_fifth", r >= std::exp(0.2)}});
  }
  Case chord;
  chord.measured = ca.sup_value;
  chord.bound.upper = 8.0 * std::exp(8.0);
  chord.detail = {{"part", "chord-arc sup"},
                  {"scan", to_json(ca)},
                  {"within_10", ca.sup_value <= 10.0},
                  {"marker_witnesses", witnesses}};
  cases.push_back(std::move(chord));
  CheckReport r = finish("L11",
                         "conformality sup decreases along the delta ladder; "
                         "chord-arc constant at most 8 e^8",
                         std::move(cases), true);
  r.details["diameter"] = diam;
  r.details["samples"] = g.curve.size();
  return r;
}

CheckReport check_l12(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  struct Fixture {
    std::string name;
    SampledCurve curve;
  };
  std::vector<Fixture> fx;
  fx.push_back({"circle", ellipse(1.0, 1.0, 16384)});
  fx.push_back({"ellipse", ellipse(1.0, 0.5, 4096)});
  fx.push_back({"segment", unit_segment(256)});
  fx.push_back({"gamma", ctx.gamma().curve});

  std::vector<Case> cases;
  for (const Fixture& f : fx) {
    const double diam = point_set_diameter(f.curve.points());
    const ClassificationReport rep =
        classify(f.curve, scaled(cfg.deltas, diam), cfg.fixture_epsilon, cfg.ua_n_max,
                 ctx.scan(diam, cfg.fixture_pair_budget));
    Case c;
    c.measured = rep.forward_consistent ? 1.0 : 0.0;
    c.bound.lower = 1.0;
    json extra = json::object();
    if (f.name == "circle") {
      const UAResult& whole = rep.ua.front().result;
      c.ok = whole.found && whole.n == 13 && rep.smoothness_to_one && rep.conformality_to_one;
      extra = {{"ua_whole_n", whole.n}, {"expected_ua_whole_n", 13}};
    } else if (f.name == "segment") {
      bool all_one = true;
      for (const auto& e : rep.ua) all_one = all_one && e.result.found && e.result.n == 1;
      c.ok = all_one && rep.smoothness_to_one && rep.chordarc.sup_value == 1.0;
      extra = {{"ua_all_one", all_one}};
    } else if (f.name == "ellipse") {
      c.ok = rep.smoothness_to_one && rep.conformality_to_one && rep.ua_all_found;
    } else {
      extra = {{"not_smooth", !rep.smoothness_to_one}};
    }
    c.detail = {{"fixture", f.name}, {"samples", f.curve.size()}, {"report", to_json(rep)}};
    c.detail.update(extra);
    cases.push_back(std::move(c));
  }
  return finish("L12",
                "smooth trend implies conformal trend and uniform approximability",
                std::move(cases), true);
}

using CheckFn = CheckReport (*)(Context&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r{
      {"L1", check_l1},   {"L2", check_l2},   {"L3", check_l3},  {"L4", check_l4},
      {"L5", check_l5},   {"L6", check_l6},   {"L7", check_l7},  {"L8", check_l8},
      {"L9", check_l9},   {"L10", check_l10}, {"L11", check_l11}, {"L12", check_l12}};
  return r;
}

}  // namespace

double Bound::margin(double v) const {
  double m = INFINITY;
  if (lower) m = std::min(m, v - *lower);
  if (upper) m = std::min(m, *upper - v);
  return m;
}

RunConfig default_run_config() {
  RunConfig c;
  c.budget = default_budget();
  return c;
}

json to_json(const RunConfig& c) {
  return {{"n", c.n},
          {"depth_cap", c.depth_cap},
          {"n_max", c.n_max},
          {"samples_per_bump", c.samples_per_bump},
          {"budget", c.budget},
          {"seed", c.seed},
          {"deltas", c.deltas},
          {"epsilon", c.epsilon},
          {"fixture_epsilon", c.fixture_epsilon},
          {"ua_n_max", c.ua_n_max},
          {"pair_budget", c.pair_budget},
          {"fixture_pair_budget", c.fixture_pair_budget},
          {"tolerances",
           {{"quadrature", c.tol.quadrature},
            {"deviation", c.tol.deviation},
            {"cross_level", c.tol.cross_level},
            {"excess_slack", c.tol.excess_slack},
            {"ratio_low", c.tol.ratio_low},
            {"product_slack", c.tol.product_slack},
            {"slope", c.tol.slope}}}};
}

std::string config_digest(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const CheckReport& r) {
  return {{"check_id", r.check_id},     {"reference", r.reference},
          {"bound", to_json(r.bound)},  {"measured", r.measured},
          {"margin", r.margin},         {"pass", r.pass},
          {"gating", r.gating},         {"errored", r.errored},
          {"details", r.details},       {"config_digest", r.config_digest}};
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

std::vector<CheckReport> run_suite(const std::vector<std::string>& ids,
                                   const RunConfig& cfg) {
  if (cfg.n < 2 || cfg.depth_cap < 1 || cfg.n_max < 2 || cfg.samples_per_bump < 2 ||
      cfg.budget == 0 || cfg.deltas.size() < 2 || !(cfg.epsilon > 0.0) ||
      !(cfg.fixture_epsilon > 0.0) || cfg.ua_n_max < 1 || cfg.pair_budget == 0 ||
      cfg.fixture_pair_budget == 0)
    throw RangeError("invalid run configuration");

  std::vector<std::string> wanted;
  for (const std::string& id : ids) {
    if (id == "all") {
      wanted = check_ids();
      break;
    }
    bool known = false;
    for (const auto& k : check_ids()) known = known || k == id;
    if (!known) throw RangeError("unknown check " + id);
    wanted.push_back(id);
  }

  const std::string digest = config_digest(cfg);
  Context ctx(cfg);
  std::vector<CheckReport> out;
  for (const auto& [id, fn] : registry()) {
    if (std::find(wanted.begin(), wanted.end(), id) == wanted.end()) continue;
    CheckReport r;
    try {
      r = fn(ctx);
    } catch (const std::exception& e) {
      r = CheckReport{};
      r.check_id = id;
      r.errored = true;
      r.pass = false;
      r.measured = NAN;
      r.margin = NAN;
      r.details = {{"error", e.what()}};
    }
    r.config_digest = digest;
    out.push_back(std::move(r));
  }
  return out;
}

int exit_code(const std::vector<CheckReport>& reports) {
  int code = 0;
  for (const CheckReport& r : reports) {
    if (r.errored) return 2;
    if (r.gating && !r.pass) code = 1;
  }
  return code;
}

json suite_report(const std::vector<CheckReport>& reports, const RunConfig& cfg) {
  json checks = json::array();
  std::size_t passed = 0, failed = 0, errored = 0, advisory_failed = 0;
  for (const CheckReport& r : reports) {
    checks.push_back(to_json(r));
    if (r.errored) ++errored;
    else if (r.pass) ++passed;
    else if (r.gating) ++failed;
    else ++advisory_failed;
  }
  return {{"config", to_json(cfg)},
          {"config_digest", config_digest(cfg)},
          {"checks", std::move(checks)},
          {"summary",
           {{"total", reports.size()},
            {"passed", passed},
            {"failed", failed},
            {"advisory_failed", advisory_failed},
            {"errored", errored},
            {"exit_code", exit_code(reports)}}}};
}

}  // namespace asymcurve
