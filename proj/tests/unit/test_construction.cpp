#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../support/gen.hpp"
#include "asymcurve/construction.hpp"

using namespace asymcurve;
using testgen::pi;

namespace {

const CurveStack& stack5() {
  static const CurveStack s = build_gamma_n(5, 5);
  return s;
}

const CurveStack& stack4() {
  static const CurveStack s = build_gamma_n(4, 4);
  return s;
}

double turning_angle(const Point& in, const Point& out) {
  return std::abs(std::atan2(cross2(in, out), in.dot(out)));
}

}  // namespace

TEST_CASE("level 1") {
  const SampledCurve c = build_level1(3);
  CHECK(c.point(0) == Point(0.125, 0.0));
  CHECK(c.point(c.size() - 1) == Point(0.25, 0.0));
  const Point crest = c.point(512);
  CHECK(crest.x() == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(crest.y() == doctest::Approx(1.0 / 24).epsilon(1e-15));
  CHECK(c.points().row(1).maxCoeff() == crest.y());

  for (int n = 2; n <= 12; ++n) {
    const double l = build_level1(n).length();
    CHECK(l >= std::ldexp(1.0 + 1.0 / (n * n), -n));
    CHECK(l <= std::ldexp(1.0 + 4.0 / (n * n), -n));
  }
  CHECK_THROWS_AS(build_level1(0), RangeError);
  CHECK_THROWS_AS(build_level1(3, 63), RangeError);
}

TEST_CASE("level parameters") {
  const LevelParams p = level_params(build_level1(10), 10, 4, 1e-3);
  CHECK(p.beta == 3.0 / 100.0);
  CHECK(p.eps <= p.eps_prev_prev / 2);
  CHECK(p.eps > 0.0);

  const SampledCurve l4 = build_level1(4);
  const LevelParams q = level_params(l4, 4, 2, std::ldexp(1.0, -5));
  CHECK(q.eps_prev_prev == 1.0 / 32);
  CHECK(q.beta == 1.0 / 16);
  // Level-1 sup curvature is about 2 pi^2 2^n / n, far above 2^(n+1) sqrt(beta).
  CHECK(q.K_prev > std::ldexp(1.0, 5) * std::sqrt(q.beta));
  CHECK(q.eps == std::sqrt(q.beta) / q.K_prev);
  // Two inflections split level 1 into three subarcs: convex, concave, convex.
  REQUIRE(q.subarcs.size() == 3);
  CHECK(q.signs == std::vector<int>{-1, 1, -1});
  CHECK(q.subarcs.front().s_start == 0.0);
  CHECK(q.subarcs.back().s_end == l4.length());

  // A gently curved base takes the halving branch.
  const LevelParams r = level_params(testgen::arc(100.0, 0.01, 64), 4, 2, 1.0 / 32);
  CHECK(r.eps == 1.0 / 64);
  REQUIRE(r.signs.size() == 1);
  CHECK(r.signs[0] == -1);  // counter-clockwise arc: bump goes to the right

  // Straight base: no curvature, one subarc, positive side.
  const LevelParams s = level_params(testgen::segment({0, 0}, {1, 0}, 100), 4, 2, 1.0 / 32);
  CHECK(s.K_prev == 0.0);
  CHECK(s.eps == 1.0 / 64);
  CHECK(s.signs == std::vector<int>{1});

  CHECK_THROWS_AS(level_params(l4, 4, 1, 0.1), RangeError);
}

TEST_CASE("short subarcs pass through with a warning") {
  const SampledCurve seg = testgen::segment({0, 0}, {1, 0}, 100);
  LevelParams p = level_params(seg, 4, 2, 1.0 / 32);
  p.eps = 2.0;
  p.partitions = {partition_equal(1.0, 2.0)};
  CHECK_FALSE(p.partitions[0]);
  const RefineResult r = refine_level(seg, p, 16);
  CHECK(r.curve.points() == seg.points());
  REQUIRE(r.pieces.size() == 1);
  CHECK_FALSE(r.pieces[0].embellished);
  CHECK(level_params(build_level1(4), 4, 2, 1e9).warnings.empty());
}

TEST_CASE("refinement bookkeeping") {
  const CurveStack& st = stack4();
  for (int k = 2; k <= st.depth(); ++k) {
    const Level& L = st.level(k);
    const SampledCurve& prev = st.level(k - 1).curve;
    const LevelParams& p = *L.params;
    CHECK(p.beta == static_cast<double>(k - 1) / 16.0);
    long long total = 0;
    for (const auto& part : p.partitions) total += part ? part->N : 1;
    CHECK(static_cast<std::size_t>(total) == p.piece_count());
    CHECK(L.pieces.size() == p.piece_count());
    CHECK(L.curve.point(0) == prev.point(0));
    CHECK(L.curve.point(L.curve.size() - 1) == prev.point(prev.size() - 1));
    CHECK(L.curve.size() == static_cast<Index>(p.piece_count()) * 16 + 1);

    // Pieces tile the parent and share child endpoints.
    for (std::size_t i = 0; i < L.pieces.size(); ++i) {
      const PieceRecord& pc = L.pieces[i];
      CHECK(pc.parent_s0 < pc.parent_s1);
      if (i > 0) {
        CHECK(pc.parent_s0 == doctest::Approx(L.pieces[i - 1].parent_s1).epsilon(1e-12));
        CHECK(pc.child_begin == L.pieces[i - 1].child_end);
      }
    }

    const double ratio = L.curve.length() / prev.length();
    CHECK(ratio >= 1.0 + 0.95 * p.beta);
    CHECK(ratio <= 1.0 + 6.0 * p.beta);
  }
}

TEST_CASE("parameter maps are monotone and keep endpoints") {
  for (const CurveStack* st : {&stack4(), &stack5()})
    for (int k = 2; k <= st->depth(); ++k) {
      const ParamMap& m = st->level(k).map;
      REQUIRE(m.child_s.size() == m.parent_s.size());
      CHECK(m.child_s.front() == 0.0);
      CHECK(m.parent_s.front() == 0.0);
      CHECK(m.child_s.back() == st->level(k).curve.length());
      CHECK(m.parent_s.back() == doctest::Approx(st->level(k - 1).curve.length()).epsilon(1e-12));
      bool increasing = true;
      for (std::size_t i = 1; i < m.child_s.size(); ++i)
        increasing = increasing && m.child_s[i] > m.child_s[i - 1] && m.parent_s[i] > m.parent_s[i - 1];
      CHECK(increasing);
    }
}

TEST_CASE("projection across levels") {
  const CurveStack& st = stack5();
  const double L = st.top().length();
  testgen::Gen g(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double s = g.uniform(0, L);
    CHECK(project_to_level(st, s, st.depth()) == s);
  }
  for (int j = 1; j <= st.depth(); ++j) CHECK(project_to_level(st, 0.0, j) == 0.0);
  CHECK_THROWS_AS(project_to_level(st, 0.1, 0), RangeError);
  CHECK_THROWS_AS(project_to_level(st, 0.1, 6), RangeError);

  // Monotone composition down to level 1.
  std::vector<double> ss;
  for (int i = 0; i < 2000; ++i) ss.push_back(g.uniform(0, L));
  std::sort(ss.begin(), ss.end());
  double last = -1.0;
  for (double s : ss) {
    const double t = project_to_level(st, s, 1);
    CHECK(t >= last);
    last = t;
  }

  // Sampled pairs: child arclength over parent arclength stays within 1 + 8 beta.
  for (int k = 2; k <= st.depth(); ++k) {
    const Level& lv = st.level(k);
    const double beta = lv.params->beta;
    const double Lk = lv.curve.length();
    double worst = 0.0;
    for (int trial = 0; trial < 20000; ++trial) {
      double a = g.uniform(0, Lk), b = g.uniform(0, Lk);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-12) continue;
      worst = std::max(worst, (b - a) / (lv.map.to_parent(b) - lv.map.to_parent(a)));
    }
    CHECK(worst <= 1.0 + 8.0 * beta);
    CHECK(worst >= 1.0);
  }
}

TEST_CASE("whole blocks") {
  const CurveStack d1 = build_gamma_n(4, 1);
  CHECK(d1.depth() == 1);
  CHECK(d1.top().points() == build_level1(4).points());

  const CurveStack& s4 = stack4();
  double product = 1.0;
  for (int k = 1; k <= 3; ++k) product *= 1.0 + k / 16.0;
  CHECK(std::ldexp(s4.top().length(), 4) >= std::exp(0.2));
  CHECK(std::ldexp(s4.top().length(), 4) >= product);
  CHECK(std::ldexp(stack5().top().length(), 5) <= 2 * std::exp(3.0));
  CHECK(stack5().warnings().empty());

  // eps halves at least at every level.
  for (int k = 3; k <= 5; ++k)
    CHECK(stack5().level(k).params->eps <= 0.5 * stack5().level(k - 1).params->eps);

  CHECK_THROWS_AS(build_gamma_n(4, 5), RangeError);
  CHECK_THROWS_AS(build_gamma_n(4, 0), RangeError);
  try {
    build_gamma_n(5, 5, 16, 10000);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.projected() > e.budget());
    CHECK(e.budget() == 10000);
  }
}

TEST_CASE("builds are deterministic") {
  const CurveStack a = build_gamma_n(4, 4);
  const CurveStack& b = stack4();
  for (int k = 1; k <= 4; ++k) {
    CHECK(a.level(k).curve.points() == b.level(k).curve.points());
    CHECK(a.level(k).map.child_s == b.level(k).map.child_s);
  }
}

TEST_CASE("fold is reported with the piece") {
  // Bumps pushed towards the centre of a tight circle fold.
  const SampledCurve c = testgen::arc(0.05, 3.0, 256);
  LevelParams p;
  p.n = 2;
  p.k = 2;
  p.beta = 0.9;
  p.eps = c.length();
  p.subarcs = {{0.0, c.length()}};
  p.partitions = {partition_equal(c.length(), p.eps)};
  p.signs = {1};
  try {
    refine_level(c, p, 16);
    FAIL("expected a fold");
  } catch (const OffsetDegeneracyError& e) {
    CHECK(e.piece() == 0);
    CHECK(e.s() > 0.0);
  }
}

TEST_CASE("assembled curve") {
  const AssembledCurve g = assemble_gamma(3, 3);
  const SampledCurve& c = g.curve;
  CHECK(c.closed());
  CHECK(c.point(0) == Point(0.0, 0.0));
  for (int n = 0; n <= 3; ++n) CHECK(c.at(g.marker_s[static_cast<std::size_t>(n)]) == Point(std::ldexp(1.0, -n), 0.0));

  // Cap samples lie on their circles and on the bottom line.
  bool c2_left = false, c2_right = false;
  for (Index i = 0; i < c.size(); ++i) {
    if (c.s(i) < g.blocks.back().s0) continue;
    const Point p = c.point(i);
    if (p == Point(0.0, -0.25)) c2_left = true;
    if (p == Point(1.0, -0.25)) c2_right = true;
    if (p.x() > 1.0) CHECK(std::abs((p - Point(1.0, -0.125)).norm() - 0.125) < 1e-15);
    else if (p.x() < 0.0) CHECK(std::abs((p - Point(0.0, -0.125)).norm() - 0.125) < 1e-15);
    else if (p.y() < 0.0 && p.x() > 0.0 && p.x() < 1.0) CHECK(p.y() == -0.25);
  }
  CHECK(c2_left);
  CHECK(c2_right);

  // Blocks tile the loop in order.
  CHECK(g.blocks.front().s0 == 0.0);
  for (std::size_t i = 1; i < g.blocks.size(); ++i) CHECK(g.blocks[i].s0 == g.blocks[i - 1].s1);
  CHECK(g.blocks.back().s1 == c.s(c.size() - 1));

  // Junctions away from the origin turn no more sharply than the sampled
  // blocks turn at their own interior vertices.
  auto turn_at = [&](Index i) {
    return turning_angle(c.point(i) - c.point(i - 1), c.point(c.segment_end(i)) - c.point(i));
  };
  std::vector<Index> joints;
  for (int n = 0; n <= 3; ++n) {
    const Index i = c.segment_at(g.marker_s[static_cast<std::size_t>(n)]);
    REQUIRE(c.point(i) == Point(std::ldexp(1.0, -n), 0.0));
    joints.push_back(i);
  }
  std::sort(joints.begin(), joints.end());
  double interior = 0.0;
  for (Index i = joints.front() + 1; i < joints.back(); ++i)
    if (std::find(joints.begin(), joints.end(), i) == joints.end())
      interior = std::max(interior, turn_at(i));
  for (Index i : joints) CHECK(turn_at(i) <= interior);
  CHECK(turn_at(joints.front() - 1) < 1e-12);  // the tail is straight

  double budget = pi * 0.125 + 1.0;
  for (int n = 1; n <= 3; ++n) budget += std::ldexp(2 * std::exp(3.0), -n);
  CHECK(c.length() < budget);
  CHECK_THROWS_AS(assemble_gamma(0, 3), RangeError);
}

TEST_CASE("truncated blocks stay close to the closing segment") {
  // Blocks beyond n_max = 3 and 4 deviate from the x-axis tail by at most
  // their level-1 amplitude plus the summed refinement deviation.
  const SampledCurve tail3 = testgen::segment({0, 0}, {0.125, 0}, 1);
  const SampledCurve tail4 = testgen::segment({0, 0}, {0.0625, 0}, 1);
  for (const auto& [st, tail] : {std::pair{&stack4(), &tail3}, std::pair{&stack5(), &tail4}}) {
    const int n = st->n;
    const double bound = 1.0 / (n * std::ldexp(1.0, n)) + 4 * st->level(2).params->eps / std::sqrt(n);
    CHECK(max_deviation(st->top(), *tail) <= bound);
  }
}
