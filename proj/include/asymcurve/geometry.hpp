#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "asymcurve/error.hpp"

namespace asymcurve {

using Index = Eigen::Index;
using Point = Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Small planar primitives. Templated on the Eigen expression type so they
// accept columns of a Matrix2Xd, Vector2d or any 2-vector expression.
// ---------------------------------------------------------------------------

template <typename A, typename B>
inline typename A::Scalar cross2(const Eigen::MatrixBase<A>& a,
                                 const Eigen::MatrixBase<B>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Counter-clockwise rotation by 90 degrees.
template <typename A>
inline Eigen::Matrix<typename A::Scalar, 2, 1> rot90(
    const Eigen::MatrixBase<A>& v) {
  return {-v.y(), v.x()};
}

/// Signed Menger curvature of three points: 4 * signed area over the product
/// of the side lengths. Positive for a counter-clockwise turn.
template <typename A, typename B, typename C>
inline typename A::Scalar menger_curvature(const Eigen::MatrixBase<A>& a,
                                           const Eigen::MatrixBase<B>& b,
                                           const Eigen::MatrixBase<C>& c) {
  using Scalar = typename A::Scalar;
  const auto ab = (b - a).eval();
  const auto bc = (c - b).eval();
  const Scalar denom = ab.norm() * bc.norm() * (c - a).norm();
  if (denom == Scalar(0)) return Scalar(0);
  return Scalar(2) * cross2(ab, bc) / denom;
}

template <typename P, typename A, typename B>
inline typename P::Scalar point_segment_distance(const Eigen::MatrixBase<P>& p,
                                                 const Eigen::MatrixBase<A>& a,
                                                 const Eigen::MatrixBase<B>& b) {
  using Scalar = typename P::Scalar;
  const auto ab = (b - a).eval();
  const Scalar len2 = ab.squaredNorm();
  Scalar t = len2 > Scalar(0) ? (p - a).dot(ab) / len2 : Scalar(0);
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

// ---------------------------------------------------------------------------
// SampledCurve
// ---------------------------------------------------------------------------

/// Immutable planar polyline with a cumulative arclength table.
///
/// For a closed curve the segment from the last point back to the first is
/// part of the curve; `length()` includes it while `arclen()` only covers the
/// stored points. Arclength positions on a closed curve live in
/// [0, length()) and are wrapped modulo `length()` by the lookup helpers.
class SampledCurve {
 public:
  SampledCurve() = default;

  /// Throws InsufficientDataError for fewer than two points and
  /// RangeError for non-finite or coincident consecutive points.
  SampledCurve(Eigen::Matrix2Xd points, bool closed);

  static SampledCurve from_points(std::span<const Point> points, bool closed);

  Index size() const { return points_.cols(); }
  bool closed() const { return closed_; }
  const Eigen::Matrix2Xd& points() const { return points_; }
  const Eigen::VectorXd& arclen() const { return arclen_; }
  Point point(Index i) const { return points_.col(i); }
  double s(Index i) const { return arclen_[i]; }

  /// Total length, including the closing segment of a closed curve.
  double length() const { return length_; }

  /// Number of segments (size - 1, or size for closed curves).
  Index segment_count() const { return closed_ ? size() : size() - 1; }

  /// Wrap a position into [0, length) for closed curves; clamp otherwise.
  double normalize(double s) const;

  /// Segment i containing arclength s: s(i) <= s <= end of segment i.
  Index segment_at(double s) const;

  /// Point at arclength s, linearly interpolated along the polyline.
  Point at(double s) const;

  /// Arclength at the end of segment i (handles the closing segment).
  double segment_end_s(Index i) const {
    return i + 1 < size() ? arclen_[i + 1] : length_;
  }
  /// Endpoint index of segment i.
  Index segment_end(Index i) const { return i + 1 < size() ? i + 1 : 0; }

 private:
  Eigen::Matrix2Xd points_;
  Eigen::VectorXd arclen_;
  double length_ = 0.0;
  bool closed_ = false;
};

struct FrenetSample {
  double s = 0.0;
  Point position = Point::Zero();
  Point tangent = Point::UnitX();
  Point normal = Point::UnitY();
  double kappa = 0.0;
  bool one_sided = false;
};

/// Signed curvature sampled along a curve. `step` is the grid resolution the
/// sup was taken over.
struct CurvatureProfile {
  std::vector<double> s;
  std::vector<double> kappa;
  double sup_abs = 0.0;
  double step = 0.0;
};

struct SubarcRef {
  double s_start = 0.0;
  double s_end = 0.0;
};

/// C1 cubic Hermite interpolant of a polyline's samples in its own arclength.
///
/// Node derivatives come from the quadratic through each sample and its two
/// neighbours (one-sided at open ends). Exact node arclengths reproduce the
/// stored points bit for bit.
class ArclengthInterpolator {
 public:
  explicit ArclengthInterpolator(const SampledCurve& curve);

  Point position(double s) const;
  /// Derivative with respect to arclength (not normalised).
  Point derivative(double s) const;
  Point unit_tangent(double s) const { return derivative(s).normalized(); }
  /// Signed curvature of the interpolant.
  double curvature(double s) const;

  const SampledCurve& curve() const { return *curve_; }

 private:
  struct Local {
    Index i0, i1;
    double h, t;
  };
  Local locate(double s) const;

  const SampledCurve* curve_;
  Eigen::Matrix2Xd tangents_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Resample at arclength positions 0, step, 2 step, ... using the Hermite
/// interpolant. Open curves always keep their final point; endpoints are
/// reproduced exactly.
SampledCurve resample_by_arclength(const SampledCurve& curve, double step);

/// Length of the stored subarc [s_start, s_end], exact for the polyline.
double arc_length(const SampledCurve& curve, const SubarcRef& sub);

FrenetSample frenet_frame(const SampledCurve& curve, double s);

/// Menger curvature at every stored sample. End samples of an open curve
/// take the value of their neighbouring triple.
CurvatureProfile curvature_profile(const SampledCurve& curve);

/// Resample at `step` first, then profile.
CurvatureProfile curvature_profile(const SampledCurve& curve, double step);

/// Default zero threshold: 1e-9 * sup|kappa|, floored at 1e-14.
double default_kappa_tol(const CurvatureProfile& profile);

std::vector<double> inflection_points(const CurvatureProfile& profile,
                                      double kappa_tol);

/// One-sided Hausdorff distance: sup over samples of a of the exact
/// distance to the polyline b.
double max_deviation(const SampledCurve& a, const SampledCurve& b);

/// Subarc between the points at arclengths a and b. On a closed curve the
/// arc of smaller sample diameter is returned (ties go to the shorter arc).
SampledCurve subarc(const SampledCurve& curve, double a, double b);

/// Counter-clockwise convex hull without collinear vertices.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Diameter of a convex polygon given by convex_hull (rotating calipers).
double hull_diameter(const std::vector<Point>& hull);

/// Diameter of the point set.
double point_set_diameter(const Eigen::Matrix2Xd& points);

}  // namespace asymcurve
