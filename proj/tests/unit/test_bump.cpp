#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../support/gen.hpp"
#include "asymcurve/bump.hpp"

using namespace asymcurve;
using testgen::pi;

namespace {

/// Explicit offset of a unit-length arc of curvature kappa (kappa != 0),
/// evaluated from the analytic frame, m segments.
SampledCurve analytic_embedding(double kappa, double h, Index m) {
  Eigen::Matrix2Xd p(2, m + 1);
  const double r = 1.0 / kappa;
  for (Index j = 0; j <= m; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(m);
    const double th = kappa * s;
    const Point base(r * std::sin(th), r * (1.0 - std::cos(th)));
    const Point normal(-std::sin(th), std::cos(th));
    const double sn = std::sin(pi * std::min(s, 1.0 - s));
    p.col(j) = base + h * sn * sn * normal;
  }
  return SampledCurve(std::move(p), false);
}

SampledCurve unit_arc(double kappa, Index m) { return analytic_embedding(kappa, 0.0, m); }

}  // namespace

TEST_CASE("bump values") {
  const double h = 0.3;
  CHECK(bump_eval(h, 0.0).value == 0.0);
  CHECK(bump_eval(h, 0.0).derivative == 0.0);
  CHECK(bump_eval(h, 1.0).value == 0.0);
  CHECK(bump_eval(h, 1.0).derivative == 0.0);
  CHECK(bump_eval(h, 0.5).value == doctest::Approx(h).epsilon(1e-15));
  CHECK(std::abs(bump_eval(h, 0.5).derivative) < 1e-15);
  CHECK_THROWS_AS(bump_eval(h, -1e-9), RangeError);
  CHECK_THROWS_AS(bump_eval(h, 1.0 + 1e-9), RangeError);

  double best = 0.0, at = 0.0;
  for (int j = 0; j <= 100000; ++j) {
    const double t = j / 100000.0;
    const double d = std::abs(bump_eval(h, t).derivative);
    if (d > best) {
      best = d;
      at = t;
    }
  }
  CHECK(best == doctest::Approx(pi * h).epsilon(1e-12));
  CHECK(std::min(std::abs(at - 0.25), std::abs(at - 0.75)) < 1e-9);
}

TEST_CASE("bump derivative matches central differences") {
  testgen::Gen g(21);
  for (int trial = 0; trial < 200; ++trial) {
    const double h = g.uniform(0.0, 2.0), t = g.uniform(1e-3, 1 - 1e-3), e = 1e-6;
    const double fd = (bump_eval(h, t + e).value - bump_eval(h, t - e).value) / (2 * e);
    CHECK(bump_eval(h, t).derivative == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("embedded speed") {
  testgen::Gen g(22);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = g.uniform(0, 1), k = g.uniform(-1, 1);
    CHECK(embedded_speed(k, 0.0, t) == 1.0);
    CHECK(embedded_speed(k, g.uniform(0, 0.5), 0.0) == 1.0);
  }
  CHECK_THROWS_AS(embedded_speed(10.0, 0.2, 0.5), OffsetDegeneracyError);
}

TEST_CASE("embedded length agrees with an explicit fine polyline") {
  // kappa = -1, h = 0.05, polyline at step 1e-5 from the analytic frame.
  const double kappa = -1.0, h = 0.05;
  const SampledCurve explicit_curve = analytic_embedding(kappa, h, 100000);
  CHECK(std::abs(embedded_length(kappa, h) - explicit_curve.length()) < 1e-8);
  // The rule has converged: doubling the nodes changes nothing at 1e-12.
  CHECK(std::abs(embedded_length(kappa, h) - embedded_length(kappa, h, 8192)) < 1e-12);
}

TEST_CASE("embed_bump basics") {
  const SampledCurve seg = testgen::segment({0, 0}, {1, 0}, 2048);
  const SampledCurve flat = embed_bump(seg, 0.0, 1);
  CHECK(flat.points() == seg.points());

  const SampledCurve up = embed_bump(seg, 0.05, 1);
  CHECK(up.point(0) == seg.point(0));
  CHECK(up.point(up.size() - 1) == seg.point(seg.size() - 1));
  CHECK(up.length() >= 1.0 + 0.05 * 0.05);
  CHECK(up.length() <= 1.0 + 4 * 0.05 * 0.05);
  CHECK(up.point(1024).y() == doctest::Approx(0.05).epsilon(1e-12));

  const SampledCurve arc = unit_arc(-0.5, 4096);
  const SampledCurve ea = embed_bump(arc, 0.02, 1);
  CHECK(max_deviation(ea, arc) <= 0.02 + 1e-12);

  Eigen::Matrix2Xd loop(2, 3);
  loop << 0, 1, 0, 0, 0, 1;
  CHECK_THROWS_AS(embed_bump(SampledCurve(loop, true), 0.1, 1), RangeError);
  // Offset towards the centre of a small circle folds the curve.
  CHECK_THROWS_AS(embed_bump(testgen::arc(0.1, 1.0 / 0.1 * 1.0, 512), 0.2, 1), OffsetDegeneracyError);
}

TEST_CASE("embed_bump properties over random bases") {
  testgen::Gen g(23);
  for (int trial = 0; trial < 30; ++trial) {
    const double kappa = g.uniform(-1.0, 1.0);
    const double h = g.uniform(0.0, 0.05);
    const SampledCurve base = std::abs(kappa) < 1e-3 ? testgen::segment({0, 0}, {1, 0}, 1024)
                                                     : unit_arc(kappa, 1024);
    const int side = trial % 2 ? 1 : -1;
    const SampledCurve e = embed_bump(base, h, side);
    CHECK(e.point(0) == base.point(0));
    CHECK(e.point(e.size() - 1) == base.point(base.size() - 1));
    CHECK(max_deviation(e, base) <= h + 1e-12);

    // End tangents agree with the base within two steps.
    const double step = 1.0 / 1024;
    const Point t0 = (e.point(1) - e.point(0)).normalized();
    const Point b0 = (base.point(1) - base.point(0)).normalized();
    CHECK((t0 - b0).norm() <= 2 * step);
    const Index m = e.size() - 1;
    const Point t1 = (e.point(m) - e.point(m - 1)).normalized();
    const Point b1 = (base.point(m) - base.point(m - 1)).normalized();
    CHECK((t1 - b1).norm() <= 2 * step);

    // Length sandwich in the normalisation where the bump bends outward.
    const SampledCurve outward = embed_bump(base, h, kappa <= 0 ? 1 : -1);
    const double K = std::abs(kappa);
    CHECK(outward.length() >= 1.0 + h * h - 1e-9);
    CHECK(outward.length() <= 1.0 + 4 * h * h + K * h + 1e-9);
  }
}

TEST_CASE("embed_bump mirrors with the side on a straight base") {
  testgen::Gen g(24);
  for (int trial = 0; trial < 10; ++trial) {
    const double h = g.uniform(0.0, 0.3);
    const SampledCurve seg = testgen::segment({0, 0}, {1, 0}, g.integer(4, 500));
    const SampledCurve a = embed_bump(seg, h, 1);
    const SampledCurve b = embed_bump(seg, h, -1);
    for (Index j = 0; j < a.size(); ++j) {
      CHECK(a.point(j).x() == b.point(j).x());
      CHECK(a.point(j).y() == -b.point(j).y());
    }
  }
}

TEST_CASE("partition_equal") {
  const auto p = partition_equal(1.0, 0.3);
  REQUIRE(p);
  CHECK(p->N == 3);
  CHECK(p->alpha == doctest::Approx(1.0 / 0.9).epsilon(1e-15));
  const auto q = partition_equal(0.3, 0.3);
  REQUIRE(q);
  CHECK(q->N == 1);
  CHECK(q->alpha == 1.0);
  CHECK_FALSE(partition_equal(0.2, 0.3));
  CHECK_THROWS_AS(partition_equal(0.0, 0.3), RangeError);
  CHECK_THROWS_AS(partition_equal(1.0, 0.0), RangeError);

  testgen::Gen g(25);
  for (int trial = 0; trial < 10000; ++trial) {
    const double eps = std::exp(g.uniform(-12, 0));
    const double len = eps * std::exp(g.uniform(0, 12));
    const auto r = partition_equal(len, eps);
    REQUIRE(r);
    CHECK(r->N >= 1);
    CHECK(r->alpha >= 1.0);
    CHECK(r->alpha < 2.0);
    CHECK(std::abs(r->N * r->alpha * eps - len) <= 1e-12 * len);
    CHECK(std::abs(r->N * r->piece_length - len) <= 1e-12 * len);
  }
}
