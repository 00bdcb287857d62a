#include "asymcurve/arc_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace asymcurve {

namespace {

Box empty_box() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, inf, -inf, -inf};
}

void grow(Box& b, const Point& p) {
  b.min_x = std::min(b.min_x, p.x());
  b.min_y = std::min(b.min_y, p.y());
  b.max_x = std::max(b.max_x, p.x());
  b.max_y = std::max(b.max_y, p.y());
}

Box merge(const Box& a, const Box& b) {
  return {std::min(a.min_x, b.min_x), std::min(a.min_y, b.min_y),
          std::max(a.max_x, b.max_x), std::max(a.max_y, b.max_y)};
}

// Upper bound on |p - w| for w in the box. Every operation is monotone, so
// the bound dominates the distance computed for any sample inside.
double max_dist(const Point& p, const Box& b) {
  const double dx = std::max(std::abs(p.x() - b.min_x), std::abs(p.x() - b.max_x));
  const double dy = std::max(std::abs(p.y() - b.min_y), std::abs(p.y() - b.max_y));
  return std::sqrt(dx * dx + dy * dy);
}

double min_dist(const Point& p, const Box& b) {
  const double dx = std::max({b.min_x - p.x(), 0.0, p.x() - b.max_x});
  const double dy = std::max({b.min_y - p.y(), 0.0, p.y() - b.max_y});
  return std::sqrt(dx * dx + dy * dy);
}

// Aligned box levels over n elements: level 0 blocks hold `leaf` elements,
// each further level pairs up the blocks below it.
template <typename ElementBox>
std::vector<std::vector<Box>> build_levels(Index n, Index leaf,
                                           ElementBox element_box) {
  std::vector<std::vector<Box>> levels;
  if (n <= 0) return levels;
  std::vector<Box> base(static_cast<std::size_t>((n + leaf - 1) / leaf));
  for (std::size_t b = 0; b < base.size(); ++b) {
    Box box = empty_box();
    const Index lo = static_cast<Index>(b) * leaf;
    const Index hi = std::min(lo + leaf, n);
    for (Index i = lo; i < hi; ++i) box = merge(box, element_box(i));
    base[b] = box;
  }
  levels.push_back(std::move(base));
  while (levels.back().size() > 1) {
    const auto& below = levels.back();
    std::vector<Box> up((below.size() + 1) / 2);
    for (std::size_t b = 0; b < up.size(); ++b) {
      up[b] = below[2 * b];
      if (2 * b + 1 < below.size()) up[b] = merge(up[b], below[2 * b + 1]);
    }
    levels.push_back(std::move(up));
  }
  return levels;
}

struct Scored {
  double key;
  std::size_t idx;
  bool operator<(const Scored& o) const { return key < o.key; }
};

}  // namespace

// ---------------------------------------------------------------------------
// ArcIndex
// ---------------------------------------------------------------------------

ArcIndex::ArcIndex(const SampledCurve& curve) : curve_(&curve) {
  const auto& pts = curve.points();
  levels_ = build_levels(curve.size(), kLeaf, [&](Index i) {
    const Point p = pts.col(i);
    return Box{p.x(), p.y(), p.x(), p.y()};
  });
  hull_off_.resize(levels_.size());
  hull_pts_.resize(levels_.size());
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    auto& off = hull_off_[l];
    auto& hp = hull_pts_[l];
    off.push_back(0);
    std::vector<Point> buf;
    for (std::size_t b = 0; b < levels_[l].size(); ++b) {
      buf.clear();
      if (l == 0) {
        const Index lo = static_cast<Index>(b) * kLeaf;
        for (Index i = lo; i < std::min(lo + kLeaf, curve.size()); ++i)
          buf.push_back(pts.col(i));
      } else {
        const auto& po = hull_off_[l - 1];
        const auto& pp = hull_pts_[l - 1];
        const std::size_t end = std::min(2 * b + 2, po.size() - 1);
        buf.assign(pp.begin() + static_cast<std::ptrdiff_t>(po[2 * b]),
                   pp.begin() + static_cast<std::ptrdiff_t>(po[end]));
      }
      const std::vector<Point> h = convex_hull(buf);
      hp.insert(hp.end(), h.begin(), h.end());
      off.push_back(hp.size());
    }
  }

  constexpr Index kAnchors = 16;
  const Index n = curve.size();
  for (Index q = 0; q < std::min(kAnchors, n); ++q)
    anchors_.push_back(q * n / std::min(kAnchors, n));
  const std::size_t na = anchors_.size();
  anchor_dist_.resize(na * na);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      anchor_dist_[i * na + j] = (pts.col(anchors_[i]) - pts.col(anchors_[j])).norm();
}

std::vector<IndexRange> ArcIndex::interior(const ArcSpan& arc) const {
  const SampledCurve& c = *curve_;
  const double* s = c.arclen().data();
  const Index n = c.size();
  auto above = [&](double v) {
    return static_cast<Index>(std::upper_bound(s, s + n, v) - s);
  };
  auto below = [&](double v) {
    return static_cast<Index>(std::lower_bound(s, s + n, v) - s);
  };

  std::vector<IndexRange> out;
  const double s1 = arc.s1();
  if (!c.closed() || s1 <= c.length()) {
    const IndexRange r{above(arc.s0), below(s1)};
    if (r.hi > r.lo) out.push_back(r);
    return out;
  }
  // Wrapping arc: the tail of the table, then sample 0 onward.
  const IndexRange tail{above(arc.s0), n};
  const IndexRange head{0, below(s1 - c.length())};
  if (tail.hi > tail.lo) out.push_back(tail);
  if (head.hi > head.lo) out.push_back(head);
  return out;
}

std::vector<ArcIndex::Chunk> ArcIndex::decompose(
    const std::vector<IndexRange>& ranges) const {
  std::vector<Chunk> out;
  const Index n = curve_->size();
  const int nlevels = static_cast<int>(levels_.size());
  for (const IndexRange& r : ranges) {
    Index i = r.lo;
    while (i < r.hi) {
      int best = -1;
      Index end = 0;
      for (int l = 0; l < nlevels; ++l) {
        const Index w = kLeaf << l;
        if (i % w != 0) break;
        const Index e = std::min(i + w, n);
        if (e > r.hi) break;
        best = l;
        end = e;
      }
      if (best < 0) {
        const Index next = std::min((i / kLeaf + 1) * kLeaf, r.hi);
        out.push_back({i, next, -1});
        i = next;
      } else {
        out.push_back({i, end, best});
        i = end;
      }
    }
  }
  return out;
}

Box ArcIndex::box_of(const Chunk& c) const {
  if (c.level >= 0)
    return levels_[static_cast<std::size_t>(c.level)]
                  [static_cast<std::size_t>(c.lo / (kLeaf << c.level))];
  Box b = empty_box();
  for (Index i = c.lo; i < c.hi; ++i) grow(b, curve_->point(i));
  return b;
}

int ArcIndex::split(const Chunk& c, std::array<Chunk, 2>& out) const {
  const Index half = kLeaf << (c.level - 1);
  const Index mid = c.lo + half;
  out[0] = {c.lo, std::min(mid, c.hi), c.level - 1};
  if (mid >= c.hi) return 1;
  out[1] = {mid, c.hi, c.level - 1};
  return 2;
}

double ArcIndex::max_detour(const Point& a, const Point& b,
                            const std::vector<IndexRange>& ranges,
                            double floor) const {
  const auto& pts = curve_->points();
  double best = floor;
  auto eval = [&](const Chunk& c) {
    for (Index i = c.lo; i < c.hi; ++i) {
      const Point w = pts.col(i);
      best = std::max(best, (a - w).norm() + (w - b).norm());
    }
  };
  auto bound = [&](const Chunk& c) {
    const Box box = box_of(c);
    return max_dist(a, box) + max_dist(b, box);
  };

  std::vector<Chunk> store;
  std::priority_queue<Scored> heap;
  for (const Chunk& c : decompose(ranges)) {
    if (c.level <= 0) {
      eval(c);
    } else {
      store.push_back(c);
      heap.push({bound(c), store.size() - 1});
    }
  }
  std::array<Chunk, 2> kids;
  while (!heap.empty() && heap.top().key > best) {
    const Chunk c = store[heap.top().idx];
    heap.pop();
    const int k = split(c, kids);
    for (int q = 0; q < k; ++q) {
      const double ub = bound(kids[q]);
      if (ub <= best) continue;
      if (kids[q].level == 0) {
        eval(kids[q]);
      } else {
        store.push_back(kids[q]);
        heap.push({ub, store.size() - 1});
      }
    }
  }
  return best;
}

double ArcIndex::farthest_from(const Point& p,
                               const std::vector<IndexRange>& ranges,
                               double floor) const {
  return farthest_from(p, decompose(ranges), floor);
}

double ArcIndex::farthest_from(const Point& p, const std::vector<Chunk>& chunks,
                               double floor) const {
  const auto& pts = curve_->points();
  double best = floor;
  auto eval = [&](const Chunk& c) {
    for (Index i = c.lo; i < c.hi; ++i)
      best = std::max(best, (p - pts.col(i)).norm());
  };
  std::vector<Chunk> store;
  std::priority_queue<Scored> heap;
  for (const Chunk& c : chunks) {
    if (c.level <= 0) {
      eval(c);
    } else {
      store.push_back(c);
      heap.push({max_dist(p, box_of(c)), store.size() - 1});
    }
  }
  std::array<Chunk, 2> kids;
  while (!heap.empty() && heap.top().key > best) {
    const Chunk c = store[heap.top().idx];
    heap.pop();
    const int k = split(c, kids);
    for (int q = 0; q < k; ++q) {
      const double ub = max_dist(p, box_of(kids[q]));
      if (ub <= best) continue;
      if (kids[q].level == 0) {
        eval(kids[q]);
      } else {
        store.push_back(kids[q]);
        heap.push({ub, store.size() - 1});
      }
    }
  }
  return best;
}

double ArcIndex::diameter(const ArcSpan& arc) const {
  std::vector<Point> pts{curve_->at(arc.s0), curve_->at(arc.s1())};
  for (const Chunk& c : decompose(interior(arc))) {
    if (c.level < 0) {
      for (Index i = c.lo; i < c.hi; ++i) pts.push_back(curve_->point(i));
      continue;
    }
    const auto l = static_cast<std::size_t>(c.level);
    const auto b = static_cast<std::size_t>(c.lo / (kLeaf << c.level));
    pts.insert(pts.end(), hull_pts_[l].begin() + static_cast<std::ptrdiff_t>(hull_off_[l][b]),
               hull_pts_[l].begin() + static_cast<std::ptrdiff_t>(hull_off_[l][b + 1]));
  }
  return hull_diameter(convex_hull(std::move(pts)));
}

ArcSpan ArcIndex::select(double a, double b) const {
  const SampledCurve& c = *curve_;
  a = c.normalize(a);
  b = c.normalize(b);
  if (a == b) throw DegenerateSubarcError("subarc endpoints coincide");
  const double lo = std::min(a, b), hi = std::max(a, b);
  const ArcSpan first{lo, hi - lo};
  if (!c.closed()) return first;
  const ArcSpan second{hi, c.length() - (hi - lo)};
  constexpr double kTie = 1e-12;

  // A polyline arc's sample diameter never exceeds its length. If the
  // shorter arc is shorter than a lower bound on the other arc's diameter,
  // the shorter arc wins without any search.
  {
    const bool first_short = first.length <= second.length;
    const ArcSpan& shorter = first_short ? first : second;
    const ArcSpan& longer = first_short ? second : first;
    std::vector<std::size_t> inside;
    for (std::size_t q = 0; q < anchors_.size(); ++q) {
      double off = c.s(anchors_[q]) - longer.s0;
      if (off < 0.0) off += c.length();
      if (off > 0.0 && off < longer.length) inside.push_back(q);
    }
    double lb = 0.0;
    const std::size_t na = anchors_.size();
    for (std::size_t i = 0; i < inside.size(); ++i)
      for (std::size_t j = i + 1; j < inside.size(); ++j)
        lb = std::max(lb, anchor_dist_[inside[i] * na + inside[j]]);
    if (shorter.length < lb * (1.0 - kTie)) return shorter;
  }

  const double d1 = diameter(first), d2 = diameter(second);
  if (std::abs(d1 - d2) < kTie * std::max(d1, d2))
    return first.length <= second.length ? first : second;
  return d1 < d2 ? first : second;
}

// ---------------------------------------------------------------------------
// SegmentIndex
// ---------------------------------------------------------------------------

SegmentIndex::SegmentIndex(const SampledCurve& curve) : curve_(&curve) {
  const auto& pts = curve.points();
  levels_ = build_levels(curve.segment_count(), kLeaf, [&](Index i) {
    Box b = empty_box();
    grow(b, pts.col(i));
    grow(b, pts.col(curve.segment_end(i)));
    return b;
  });
}

double SegmentIndex::segment_distance(const Point& p, Index seg) const {
  return point_segment_distance(p, curve_->point(seg),
                                curve_->point(curve_->segment_end(seg)));
}

double SegmentIndex::distance(const Point& p, Index& hint) const {
  const Index m = curve_->segment_count();
  hint = std::clamp<Index>(hint, 0, m - 1);
  double best = segment_distance(p, hint);
  if (best == 0.0) return 0.0;

  struct Node {
    double key;
    int level;
    Index block;
    bool operator<(const Node& o) const { return key > o.key; }  // min-heap
  };
  std::priority_queue<Node> heap;
  const int top = static_cast<int>(levels_.size()) - 1;
  for (std::size_t b = 0; b < levels_[top].size(); ++b)
    heap.push({min_dist(p, levels_[top][b]), top, static_cast<Index>(b)});

  while (!heap.empty() && heap.top().key < best) {
    const Node nd = heap.top();
    heap.pop();
    if (nd.level == 0) {
      const Index lo = nd.block * kLeaf;
      const Index hi = std::min(lo + kLeaf, m);
      for (Index i = lo; i < hi; ++i) {
        const double d = segment_distance(p, i);
        if (d < best) {
          best = d;
          hint = i;
        }
      }
      continue;
    }
    const auto& below = levels_[static_cast<std::size_t>(nd.level - 1)];
    for (Index k = 2 * nd.block; k < std::min<Index>(2 * nd.block + 2, below.size()); ++k) {
      const double key = min_dist(p, below[static_cast<std::size_t>(k)]);
      if (key < best) heap.push({key, nd.level - 1, k});
    }
  }
  return best;
}

}  // namespace asymcurve
