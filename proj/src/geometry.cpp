#include "asymcurve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asymcurve/arc_index.hpp"

namespace asymcurve {

// ---------------------------------------------------------------------------
// SampledCurve
// ---------------------------------------------------------------------------

SampledCurve::SampledCurve(Eigen::Matrix2Xd points, bool closed)
    : points_(std::move(points)), closed_(closed) {
  const Index n = points_.cols();
  if (n < 2) throw InsufficientDataError("a curve needs at least two points");
  if (!points_.allFinite()) throw RangeError("curve has non-finite coordinates");

  arclen_.resize(n);
  arclen_[0] = 0.0;
  for (Index i = 1; i < n; ++i) {
    const double d = (points_.col(i) - points_.col(i - 1)).norm();
    if (d == 0.0)
      throw RangeError("coincident consecutive points at index " +
                       std::to_string(i));
    arclen_[i] = arclen_[i - 1] + d;
  }
  length_ = arclen_[n - 1];
  if (closed_) {
    const double d = (points_.col(0) - points_.col(n - 1)).norm();
    if (d == 0.0)
      throw RangeError("closed curve repeats its first point at the end");
    length_ += d;
  }
}

SampledCurve SampledCurve::from_points(std::span<const Point> points,
                                       bool closed) {
  Eigen::Matrix2Xd m(2, static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    m.col(static_cast<Index>(i)) = points[i];
  return SampledCurve(std::move(m), closed);
}

double SampledCurve::normalize(double s) const {
  if (closed_) {
    double r = std::fmod(s, length_);
    if (r < 0.0) r += length_;
    if (r >= length_) r = 0.0;
    return r;
  }
  return std::clamp(s, 0.0, length_);
}

Index SampledCurve::segment_at(double s) const {
  s = normalize(s);
  const double* begin = arclen_.data();
  const double* end = begin + size();
  Index i = static_cast<Index>(std::upper_bound(begin, end, s) - begin) - 1;
  return std::clamp<Index>(i, 0, segment_count() - 1);
}

Point SampledCurve::at(double s) const {
  s = normalize(s);
  const Index i = segment_at(s);
  const double s0 = arclen_[i];
  if (s == s0) return points_.col(i);
  const double s1 = segment_end_s(i);
  const Index j = segment_end(i);
  if (s == s1) return points_.col(j);
  const double t = (s - s0) / (s1 - s0);
  return points_.col(i) + t * (points_.col(j) - points_.col(i));
}

// ---------------------------------------------------------------------------
// ArclengthInterpolator
// ---------------------------------------------------------------------------

namespace {

// Derivative at the middle node of the quadratic through three samples
// spaced h1 and h2 apart.
Point quadratic_mid_derivative(const Point& pm, const Point& p0,
                               const Point& pp, double h1, double h2) {
  return (h1 * h1 * (pp - p0) + h2 * h2 * (p0 - pm)) / (h1 * h2 * (h1 + h2));
}

// Derivative at the first node of the quadratic through nodes at 0, h1,
// h1 + h2.
Point quadratic_start_derivative(const Point& p0, const Point& p1,
                                 const Point& p2, double h1, double h2) {
  return -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * p0 +
         (h1 + h2) / (h1 * h2) * p1 - h1 / (h2 * (h1 + h2)) * p2;
}

}  // namespace

ArclengthInterpolator::ArclengthInterpolator(const SampledCurve& curve)
    : curve_(&curve), tangents_(2, curve.size()) {
  const Index n = curve.size();
  const auto& s = curve.arclen();
  auto p = [&](Index i) -> Point { return curve.point(i); };

  if (n == 2 && !curve.closed()) {
    const Point d = (p(1) - p(0)) / curve.length();
    tangents_.col(0) = d;
    tangents_.col(1) = d;
    return;
  }
  for (Index i = 0; i < n; ++i) {
    if (curve.closed()) {
      const Index im = (i + n - 1) % n;
      const Index ip = (i + 1) % n;
      const double h1 = i > 0 ? s[i] - s[i - 1] : curve.length() - s[n - 1];
      const double h2 = curve.segment_end_s(i) - s[i];
      tangents_.col(i) = quadratic_mid_derivative(p(im), p(i), p(ip), h1, h2);
    } else if (i == 0) {
      tangents_.col(i) =
          quadratic_start_derivative(p(0), p(1), p(2), s[1] - s[0], s[2] - s[1]);
    } else if (i == n - 1) {
      // Mirror of the start formula on the reversed curve.
      tangents_.col(i) = -quadratic_start_derivative(
          p(n - 1), p(n - 2), p(n - 3), s[n - 1] - s[n - 2], s[n - 2] - s[n - 3]);
    } else {
      tangents_.col(i) = quadratic_mid_derivative(p(i - 1), p(i), p(i + 1),
                                                  s[i] - s[i - 1], s[i + 1] - s[i]);
    }
  }
}

ArclengthInterpolator::Local ArclengthInterpolator::locate(double s) const {
  const SampledCurve& c = *curve_;
  s = c.normalize(s);
  const Index i = c.segment_at(s);
  const double s0 = c.s(i);
  const double h = c.segment_end_s(i) - s0;
  return {i, c.segment_end(i), h, (s - s0) / h};
}

Point ArclengthInterpolator::position(double s) const {
  const Local l = locate(s);
  const SampledCurve& c = *curve_;
  if (l.t == 0.0) return c.point(l.i0);
  if (l.t == 1.0) return c.point(l.i1);
  const double t = l.t, t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * c.point(l.i0) + (h10 * l.h) * tangents_.col(l.i0) +
         h01 * c.point(l.i1) + (h11 * l.h) * tangents_.col(l.i1);
}

Point ArclengthInterpolator::derivative(double s) const {
  const Local l = locate(s);
  const SampledCurve& c = *curve_;
  const double t = l.t, t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  return (d00 * c.point(l.i0) + d01 * c.point(l.i1)) / l.h +
         d10 * tangents_.col(l.i0) + d11 * tangents_.col(l.i1);
}

double ArclengthInterpolator::curvature(double s) const {
  const Local l = locate(s);
  const SampledCurve& c = *curve_;
  const double t = l.t;
  const Point d1 = derivative(s);
  const Point d2 = ((12 * t - 6) * c.point(l.i0) + (6 - 12 * t) * c.point(l.i1)) /
                       (l.h * l.h) +
                   ((6 * t - 4) * tangents_.col(l.i0) +
                    (6 * t - 2) * tangents_.col(l.i1)) /
                       l.h;
  const double speed = d1.norm();
  return cross2(d1, d2) / (speed * speed * speed);
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

SampledCurve resample_by_arclength(const SampledCurve& curve, double step) {
  const double total = curve.length();
  if (!(step > 0.0) || !(step < total))
    throw InvalidStepError("resampling step must lie in (0, curve length)");

  std::vector<double> positions;
  const auto k = static_cast<std::size_t>(std::floor(total / step));
  positions.reserve(k + 2);
  for (std::size_t j = 0; j <= k; ++j) positions.push_back(j * step);
  // A position within 1e-9 step of the end is the end itself.
  while (!positions.empty() && total - positions.back() <= 1e-9 * step)
    positions.pop_back();
  if (!curve.closed()) positions.push_back(total);

  const ArclengthInterpolator interp(curve);
  Eigen::Matrix2Xd pts(2, static_cast<Index>(positions.size()));
  for (std::size_t j = 0; j < positions.size(); ++j)
    pts.col(static_cast<Index>(j)) = interp.position(positions[j]);
  if (!curve.closed()) pts.col(pts.cols() - 1) = curve.point(curve.size() - 1);
  return SampledCurve(std::move(pts), curve.closed());
}

double arc_length(const SampledCurve& curve, const SubarcRef& sub) {
  if (!(sub.s_start >= 0.0 && sub.s_start < sub.s_end &&
        sub.s_end <= curve.length()))
    throw RangeError("subarc must satisfy 0 <= s_start < s_end <= length");
  return sub.s_end - sub.s_start;
}

FrenetSample frenet_frame(const SampledCurve& curve, double s) {
  const Index n = curve.size();
  if (n < 3) throw InsufficientDataError("frenet frame needs three samples");
  if (!(s >= 0.0 && s <= curve.length()))
    throw RangeError("arclength outside the curve");

  FrenetSample out;
  out.s = s;
  out.position = curve.at(s);

  const Index seg = curve.segment_at(s);
  const Index next = curve.segment_end(seg);
  const double s_next = curve.segment_end_s(seg);
  const Index i = (s - curve.s(seg) <= s_next - s) ? seg : next;

  auto p = [&](Index k) -> Point { return curve.point(k); };
  if (!curve.closed() && (i == 0 || i == n - 1)) {
    out.one_sided = true;
    out.tangent = i == 0 ? (p(1) - p(0)).normalized()
                         : (p(n - 1) - p(n - 2)).normalized();
    const Index c = i == 0 ? 1 : n - 2;
    out.kappa = menger_curvature(p(c - 1), p(c), p(c + 1));
  } else {
    const Index im = (i + n - 1) % n;
    const Index ip = (i + 1) % n;
    double h1 = curve.s(i) - curve.s(im);
    if (h1 <= 0.0) h1 += curve.length();
    double h2 = curve.segment_end_s(i) - curve.s(i);
    out.tangent = quadratic_mid_derivative(p(im), p(i), p(ip), h1, h2).normalized();
    out.kappa = menger_curvature(p(im), p(i), p(ip));
  }
  out.normal = rot90(out.tangent);
  return out;
}

CurvatureProfile curvature_profile(const SampledCurve& curve) {
  const Index n = curve.size();
  if (n < 3) throw InsufficientDataError("curvature needs three samples");
  CurvatureProfile prof;
  prof.s.resize(static_cast<std::size_t>(n));
  prof.kappa.resize(static_cast<std::size_t>(n));
  const auto& pts = curve.points();
  for (Index i = 0; i < n; ++i) {
    Index c = i;
    if (!curve.closed()) c = std::clamp<Index>(i, 1, n - 2);
    const Index im = (c + n - 1) % n;
    const Index ip = (c + 1) % n;
    const double k = menger_curvature(pts.col(im), pts.col(c), pts.col(ip));
    prof.s[static_cast<std::size_t>(i)] = curve.s(i);
    prof.kappa[static_cast<std::size_t>(i)] = k;
    prof.sup_abs = std::max(prof.sup_abs, std::abs(k));
  }
  prof.step = curve.length() / static_cast<double>(curve.segment_count());
  return prof;
}

CurvatureProfile curvature_profile(const SampledCurve& curve, double step) {
  CurvatureProfile prof = curvature_profile(resample_by_arclength(curve, step));
  prof.step = step;
  return prof;
}

double default_kappa_tol(const CurvatureProfile& profile) {
  return std::max(1e-9 * profile.sup_abs, 1e-14);
}

std::vector<double> inflection_points(const CurvatureProfile& profile,
                                      double kappa_tol) {
  std::vector<std::size_t> significant;
  for (std::size_t i = 0; i < profile.kappa.size(); ++i)
    if (std::abs(profile.kappa[i]) >= kappa_tol) significant.push_back(i);

  std::vector<double> crossings;
  for (std::size_t q = 1; q < significant.size(); ++q) {
    const std::size_t j = significant[q - 1], k = significant[q];
    const double kj = profile.kappa[j], kk = profile.kappa[k];
    if ((kj > 0.0) == (kk > 0.0)) continue;
    const double sj = profile.s[j], sk = profile.s[k];
    crossings.push_back(sj + (sk - sj) * kj / (kj - kk));
  }

  std::vector<double> merged;
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    if (i + 1 < crossings.size() &&
        crossings[i + 1] - crossings[i] < profile.step) {
      merged.push_back(0.5 * (crossings[i] + crossings[i + 1]));
      ++i;
    } else {
      merged.push_back(crossings[i]);
    }
  }
  return merged;
}

double max_deviation(const SampledCurve& a, const SampledCurve& b) {
  const SegmentIndex index(b);
  Index hint = 0;
  double sup = 0.0;
  for (Index i = 0; i < a.size(); ++i)
    sup = std::max(sup, index.distance(a.point(i), hint));
  return sup;
}

SampledCurve subarc(const SampledCurve& curve, double a, double b) {
  const ArcIndex index(curve);
  const ArcSpan arc = index.select(a, b);
  std::vector<Point> pts;
  pts.push_back(curve.at(arc.s0));
  for (const IndexRange& r : index.interior(arc))
    for (Index i = r.lo; i < r.hi; ++i) pts.push_back(curve.point(i));
  pts.push_back(curve.at(arc.s1()));
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return SampledCurve::from_points(pts, false);
}

std::vector<Point> convex_hull(std::vector<Point> p) {
  std::sort(p.begin(), p.end(), [](const Point& u, const Point& v) {
    return u.x() < v.x() || (u.x() == v.x() && u.y() < v.y());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;

  // Andrew's monotone chain.
  std::vector<Point> hull(2 * p.size());
  std::size_t k = 0;
  auto turn = [](const Point& o, const Point& u, const Point& v) {
    return cross2(u - o, v - o);
  };
  for (const Point& q : p) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], q) <= 0.0) --k;
    hull[k++] = q;
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  return hull;
}

double hull_diameter(const std::vector<Point>& hull) {
  const std::size_t h = hull.size();
  if (h < 2) return 0.0;
  if (h == 2) return (hull[0] - hull[1]).norm();
  auto area = [&](std::size_t a, std::size_t b, std::size_t c) {
    return std::abs(cross2(hull[b] - hull[a], hull[c] - hull[a]));
  };
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t ni = (i + 1) % h;
    while (area(i, ni, (j + 1) % h) > area(i, ni, j)) j = (j + 1) % h;
    best = std::max({best, (hull[i] - hull[j]).norm(), (hull[ni] - hull[j]).norm()});
  }
  return best;
}

double point_set_diameter(const Eigen::Matrix2Xd& points) {
  std::vector<Point> p(static_cast<std::size_t>(points.cols()));
  for (Index i = 0; i < points.cols(); ++i) p[static_cast<std::size_t>(i)] = points.col(i);
  return hull_diameter(convex_hull(std::move(p)));
}

}  // namespace asymcurve
