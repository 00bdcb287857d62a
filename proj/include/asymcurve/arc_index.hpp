#pragma once

#include <array>
#include <vector>

#include "asymcurve/geometry.hpp"

namespace asymcurve {

/// A forward arc of a curve: starts at arclength `s0` and runs `length`
/// along the traversal direction, wrapping past the seam of a closed curve.
struct ArcSpan {
  double s0 = 0.0;
  double length = 0.0;
  double s1() const { return s0 + length; }
};

/// Half-open range of sample indices [lo, hi).
struct IndexRange {
  Index lo = 0;
  Index hi = 0;
  Index size() const { return hi - lo; }
};

struct Box {
  double min_x, min_y, max_x, max_y;
};

/// Spatial hierarchy over the samples of one curve, keyed by sample index.
///
/// Bounding boxes over aligned blocks of consecutive samples let range
/// maxima (farthest point, the conformality numerator, subarc diameter) be
/// computed exactly by branch and bound instead of by a linear sweep.
/// The index borrows the curve; keep the curve alive.
class ArcIndex {
 public:
  explicit ArcIndex(const SampledCurve& curve);

  const SampledCurve& curve() const { return *curve_; }

  /// Samples strictly inside the arc (at most two ranges on a closed curve).
  std::vector<IndexRange> interior(const ArcSpan& arc) const;

  /// max over interior samples w of |a - w| + |w - b|; `floor` if none.
  double max_detour(const Point& a, const Point& b,
                    const std::vector<IndexRange>& ranges, double floor) const;

  /// max over samples w in ranges of |p - w|; `floor` if none.
  double farthest_from(const Point& p, const std::vector<IndexRange>& ranges,
                       double floor) const;

  /// Max pairwise distance over the arc's interior samples and endpoints,
  /// from the convex hulls stored with the tree nodes.
  double diameter(const ArcSpan& arc) const;

  /// The subarc between arclengths a and b. Open curves: the unique arc.
  /// Closed curves: the arc of smaller sample diameter; a relative tie below
  /// 1e-12 goes to the shorter arc.
  ArcSpan select(double a, double b) const;

 private:
  static constexpr Index kLeaf = 16;

  struct Chunk {
    Index lo, hi;
    int level;  // -1: raw samples, else tree node covering [lo, hi)
  };

  std::vector<Chunk> decompose(const std::vector<IndexRange>& ranges) const;
  Box box_of(const Chunk& c) const;
  /// Children of a tree node above the leaf level; returns how many.
  int split(const Chunk& c, std::array<Chunk, 2>& out) const;

  double farthest_from(const Point& p, const std::vector<Chunk>& chunks,
                       double floor) const;

  const SampledCurve* curve_;
  std::vector<std::vector<Box>> levels_;
  // Convex hull of every tree node, flattened per level: node b of level l
  // owns hull_pts_[l][hull_off_[l][b] .. hull_off_[l][b + 1]).
  std::vector<std::vector<std::size_t>> hull_off_;
  std::vector<std::vector<Point>> hull_pts_;
  // Evenly spread samples with their pairwise distances; they give a cheap
  // lower bound on the diameter of any arc containing several of them.
  std::vector<Index> anchors_;
  std::vector<double> anchor_dist_;
};

/// Nearest-segment queries against one polyline.
class SegmentIndex {
 public:
  explicit SegmentIndex(const SampledCurve& curve);

  /// Exact distance from p to the polyline. `hint` is a segment index used
  /// to seed the search and is updated to the nearest segment found, so
  /// queries along a nearby curve stay cheap.
  double distance(const Point& p, Index& hint) const;

 private:
  static constexpr Index kLeaf = 16;

  double segment_distance(const Point& p, Index seg) const;

  const SampledCurve* curve_;
  std::vector<std::vector<Box>> levels_;
};

}  // namespace asymcurve
