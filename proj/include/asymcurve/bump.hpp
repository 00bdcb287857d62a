#pragma once

#include <optional>

#include "asymcurve/geometry.hpp"

namespace asymcurve {

struct BumpValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// f_h(t) = h sin^2(pi t) and its derivative h pi sin(2 pi t) on [0, 1].
/// Both vanish exactly at t = 0 and t = 1.
BumpValue bump_eval(double h, double t);

/// Speed of the base point offset by f_h along the normal of a base with
/// curvature kappa: sqrt((1 - kappa f)^2 + f'^2). Throws
/// OffsetDegeneracyError when 1 - kappa f <= 0.
double embedded_speed(double kappa, double h, double t);

/// Length of f_h embedded on a unit-length base of constant curvature kappa,
/// by the trapezoid rule on `nodes` intervals. The integrand is smooth and
/// periodic in t, so the rule converges geometrically.
double embedded_length(double kappa, double h, int nodes = 4096);

/// Offset every sample of `base` by side * f_h(s / length) along the normal
/// of the base's Hermite interpolant. The output shares the base's sample
/// grid, and its endpoints are the base endpoints bit for bit.
SampledCurve embed_bump(const SampledCurve& base, double h, int side);

struct PartitionSpec {
  long long N = 0;
  double alpha = 1.0;
  double piece_length = 0.0;
};

/// N = floor(length / epsilon) equal pieces; alpha = length / (N epsilon).
/// Returns nullopt when length < epsilon.
std::optional<PartitionSpec> partition_equal(double length, double epsilon);

}  // namespace asymcurve
