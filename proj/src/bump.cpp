#include "asymcurve/bump.hpp"

#include <cmath>
#include <numbers>

namespace asymcurve {

namespace {

// sin(pi t) evaluated through the nearer endpoint, so t = 1 gives exactly 0.
double sin_pi(double t) {
  return std::sin(std::numbers::pi * std::min(t, 1.0 - t));
}

}  // namespace

BumpValue bump_eval(double h, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw RangeError("bump parameter outside [0, 1]");
  const double s = sin_pi(t);
  // sin(2 pi t) = 2 sin(pi t) cos(pi t); the cosine keeps its sign.
  const double c = std::cos(std::numbers::pi * t);
  return {h * s * s, h * std::numbers::pi * 2.0 * s * c};
}

double embedded_speed(double kappa, double h, double t) {
  const BumpValue f = bump_eval(h, t);
  const double normal = 1.0 - kappa * f.value;
  if (normal <= 0.0) throw OffsetDegeneracyError(t, 0);
  return std::hypot(normal, f.derivative);
}

double embedded_length(double kappa, double h, int nodes) {
  // Endpoint weights 1/2 each; both endpoint values are 1.
  double sum = 1.0;
  for (int i = 1; i < nodes; ++i)
    sum += embedded_speed(kappa, h, static_cast<double>(i) / nodes);
  return sum / nodes;
}

SampledCurve embed_bump(const SampledCurve& base, double h, int side) {
  if (base.closed()) throw RangeError("embed_bump needs an open base");
  const ArclengthInterpolator interp(base);
  const double total = base.length();
  const Index n = base.size();
  Eigen::Matrix2Xd out(2, n);
  for (Index i = 0; i < n; ++i) {
    const double s = base.s(i);
    const double t = i == n - 1 ? 1.0 : s / total;
    const double f = side * bump_eval(h, t).value;
    if (f == 0.0) {
      out.col(i) = base.point(i);
      continue;
    }
    if (1.0 - interp.curvature(s) * f <= 0.0)
      throw OffsetDegeneracyError(s, 0);
    out.col(i) = base.point(i) + f * rot90(interp.unit_tangent(s));
  }
  return SampledCurve(std::move(out), false);
}

std::optional<PartitionSpec> partition_equal(double length, double epsilon) {
  if (!(length > 0.0 && epsilon > 0.0))
    throw RangeError("partition needs positive length and epsilon");
  auto N = static_cast<long long>(std::floor(length / epsilon));
  // Guard the floor against a quotient rounded across an integer.
  if (N > 0 && N * epsilon > length) --N;
  if ((N + 1) * epsilon <= length) ++N;
  if (N == 0) return std::nullopt;
  return PartitionSpec{N, length / (N * epsilon), length / N};
}

}  // namespace asymcurve
