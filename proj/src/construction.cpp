#include "asymcurve/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace asymcurve {

namespace {

double sin_pi_ratio(long long j, long long m) {
  // sin(pi j / m) through the nearer end, exact 0 at j = 0 and j = m.
  return std::sin(std::numbers::pi * static_cast<double>(std::min(j, m - j)) /
                  static_cast<double>(m));
}

double interp_map(const std::vector<double>& from, const std::vector<double>& to,
                  double s) {
  if (from.empty()) return s;
  if (s <= from.front()) return to.front();
  if (s >= from.back()) return to.back();
  const auto it = std::upper_bound(from.begin(), from.end(), s);
  const auto i = static_cast<std::size_t>(it - from.begin()) - 1;
  if (s == from[i]) return to[i];
  const double t = (s - from[i]) / (from[i + 1] - from[i]);
  return to[i] + t * (to[i + 1] - to[i]);
}

}  // namespace

double ParamMap::to_parent(double s) const { return interp_map(child_s, parent_s, s); }
double ParamMap::to_child(double s) const { return interp_map(parent_s, child_s, s); }

std::size_t LevelParams::piece_count() const {
  std::size_t count = 0;
  for (const auto& p : partitions) count += p ? static_cast<std::size_t>(p->N) : 1;
  return count;
}

std::vector<std::string> CurveStack::warnings() const {
  std::vector<std::string> out;
  for (const Level& l : levels)
    if (l.params) out.insert(out.end(), l.params->warnings.begin(), l.params->warnings.end());
  return out;
}

std::size_t default_budget() {
  if (const char* env = std::getenv("ASYMCURVE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 200'000'000;
}

SampledCurve build_level1(int n, int samples) {
  if (n < 1) throw RangeError("level-1 block index must be at least 1");
  if (samples < 64) throw RangeError("level 1 needs at least 64 samples");
  const double x0 = std::ldexp(1.0, -n);
  const double x1 = std::ldexp(1.0, -(n - 1));
  const double h = 1.0 / (n * std::ldexp(1.0, n));
  Eigen::Matrix2Xd pts(2, samples + 1);
  for (int j = 0; j <= samples; ++j) {
    const double x = j == samples ? x1 : x0 + (x1 - x0) * j / samples;
    const double sn = sin_pi_ratio(j, samples);
    pts.col(j) = Point(x, h * sn * sn);
  }
  return SampledCurve(std::move(pts), false);
}

LevelParams level_params(const SampledCurve& prev, int n, int k,
                         double eps_prev_prev) {
  if (n < 1 || k < 2) throw RangeError("refinement needs n >= 1 and k >= 2");
  LevelParams p;
  p.n = n;
  p.k = k;
  p.beta = static_cast<double>(k - 1) / (static_cast<double>(n) * n);
  p.eps_prev_prev = eps_prev_prev;

  const CurvatureProfile prof = curvature_profile(prev);
  p.K_prev = prof.sup_abs;
  p.eps = eps_prev_prev / 2.0;
  if (p.K_prev > 0.0) p.eps = std::min(std::sqrt(p.beta) / p.K_prev, p.eps);

  std::vector<double> cuts{0.0};
  for (double s : inflection_points(prof, default_kappa_tol(prof)))
    if (s > cuts.back() && s < prev.length()) cuts.push_back(s);
  cuts.push_back(prev.length());

  std::size_t q = 0;  // first profile sample not yet consumed
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const SubarcRef sub{cuts[i], cuts[i + 1]};
    p.subarcs.push_back(sub);
    auto part = partition_equal(sub.s_end - sub.s_start, p.eps);
    if (!part)
      p.warnings.push_back("level " + std::to_string(k) + ": subarc " +
                           std::to_string(i) + " shorter than eps, left as is");
    p.partitions.push_back(part);

    // Total turning over the subarc decides which side is convex.
    double turning = 0.0;
    bool any = false;
    while (q < prof.s.size() && prof.s[q] <= sub.s_end) {
      if (prof.s[q] >= sub.s_start) {
        turning += prof.kappa[q];
        any = true;
      }
      ++q;
    }
    if (!any) {
      const double mid = 0.5 * (sub.s_start + sub.s_end);
      const Index j = prev.segment_at(mid);
      turning = prof.kappa[static_cast<std::size_t>(
          mid - prev.s(j) <= prev.segment_end_s(j) - mid ? j : prev.segment_end(j))];
    }
    p.signs.push_back(turning > 0.0 ? -1 : 1);
  }
  return p;
}

RefineResult refine_level(const SampledCurve& prev, const LevelParams& params,
                          int samples_per_bump) {
  if (samples_per_bump < 2) throw RangeError("need at least two samples per bump");
  const ArclengthInterpolator interp(prev);
  const double amp = std::sqrt(params.beta);
  const long long S = samples_per_bump;

  RefineResult out;
  std::vector<Point> pts;
  std::vector<double> parent_s;
  pts.reserve(params.piece_count() * static_cast<std::size_t>(S) + 1);
  parent_s.reserve(pts.capacity());
  pts.push_back(prev.point(0));
  parent_s.push_back(0.0);

  auto emit = [&](double s, const Point& p) {
    pts.push_back(p);
    parent_s.push_back(s);
  };

  for (std::size_t i = 0; i < params.subarcs.size(); ++i) {
    const SubarcRef& sub = params.subarcs[i];
    const int side = params.signs[i];
    const auto& part = params.partitions[i];
    const bool last_sub = i + 1 == params.subarcs.size();
    const double b = last_sub ? prev.length() : sub.s_end;

    if (!part) {
      PieceRecord rec{sub.s_start, b, static_cast<Index>(pts.size()) - 1, 0, side,
                      false, i};
      const Index lo = prev.segment_at(sub.s_start) + 1;
      for (Index j = lo; j < prev.size() && prev.s(j) < b; ++j)
        if (prev.s(j) > sub.s_start) emit(prev.s(j), prev.point(j));
      emit(b, last_sub ? prev.point(prev.size() - 1) : interp.position(b));
      rec.child_end = static_cast<Index>(pts.size()) - 1;
      out.pieces.push_back(rec);
      continue;
    }

    for (long long m = 0; m < part->N; ++m) {
      const double s0 = sub.s_start + static_cast<double>(m) * part->piece_length;
      const double s1 = m + 1 == part->N ? b : sub.s_start + static_cast<double>(m + 1) * part->piece_length;
      PieceRecord rec{s0, s1, static_cast<Index>(pts.size()) - 1, 0, side, true, i};
      const double height = side * amp * (s1 - s0);
      for (long long j = 1; j <= S; ++j) {
        if (j == S) {
          emit(s1, (last_sub && m + 1 == part->N) ? prev.point(prev.size() - 1)
                                                  : interp.position(s1));
          break;
        }
        const double s = s0 + (s1 - s0) * static_cast<double>(j) / static_cast<double>(S);
        const double sn = sin_pi_ratio(j, S);
        const double f = height * sn * sn;
        if (1.0 - interp.curvature(s) * f <= 0.0)
          throw OffsetDegeneracyError(s, out.pieces.size());
        emit(s, interp.position(s) + f * rot90(interp.unit_tangent(s)));
      }
      rec.child_end = static_cast<Index>(pts.size()) - 1;
      out.pieces.push_back(rec);
    }
  }

  out.curve = SampledCurve::from_points(pts, false);
  const auto& al = out.curve.arclen();
  out.map.child_s.assign(al.data(), al.data() + al.size());
  out.map.parent_s = std::move(parent_s);
  return out;
}

CurveStack build_gamma_n(int n, int depth, int samples_per_bump,
                         std::size_t budget) {
  if (n < 1) throw RangeError("n must be at least 1");
  if (depth < 1 || depth > n) throw RangeError("depth must lie in [1, n]");
  CurveStack stack;
  stack.n = n;
  stack.levels.push_back({build_level1(n), {}, std::nullopt, {}});
  std::size_t total = static_cast<std::size_t>(stack.top().size());
  if (total > budget) throw ResourceError(total, budget);

  double eps_pp = std::ldexp(1.0, -(n + 1));
  for (int k = 2; k <= depth; ++k) {
    LevelParams params = level_params(stack.top(), n, k, eps_pp);
    const std::size_t projected =
        total + params.piece_count() * static_cast<std::size_t>(samples_per_bump) + 1;
    if (projected > budget) throw ResourceError(projected, budget);
    RefineResult r = refine_level(stack.top(), params, samples_per_bump);
    total += static_cast<std::size_t>(r.curve.size());
    eps_pp = params.eps;
    stack.levels.push_back(
        {std::move(r.curve), std::move(r.map), std::move(params), std::move(r.pieces)});
  }
  return stack;
}

double project_to_level(const CurveStack& stack, double s, int target) {
  if (target < 1 || target > stack.depth())
    throw RangeError("projection target outside the stack");
  for (int j = stack.depth(); j > target; --j) s = stack.level(j).map.to_parent(s);
  return s;
}

AssembledCurve assemble_gamma(int n_max, int depth_cap, int samples_per_bump,
                              std::size_t budget, double cap_step) {
  if (n_max < 1 || depth_cap < 1) throw RangeError("n_max and depth_cap must be positive");
  if (!(cap_step > 0.0)) throw InvalidStepError("cap step must be positive");
  AssembledCurve out;
  std::vector<Point> pts;
  std::vector<double> run;  // running arclength of pts, for block markers
  out.marker_s.assign(static_cast<std::size_t>(n_max) + 1, 0.0);

  auto append = [&](const Point& p) {
    run.push_back(run.empty() ? 0.0 : run.back() + (p - pts.back()).norm());
    pts.push_back(p);
  };
  auto segments = [&](double len) {
    return std::max<long long>(1, static_cast<long long>(std::ceil(len / cap_step)));
  };

  // Tail on the x-axis from the origin.
  append(Point(0.0, 0.0));
  const double tail = std::ldexp(1.0, -n_max);
  const long long mt = segments(tail);
  for (long long j = 1; j <= mt; ++j)
    append(Point(j == mt ? tail : tail * static_cast<double>(j) / static_cast<double>(mt), 0.0));
  out.blocks.push_back({0, 0.0, run.back()});

  std::size_t used = pts.size();
  for (int n = n_max; n >= 1; --n) {
    out.marker_s[static_cast<std::size_t>(n)] = run.back();
    const double s0 = run.back();
    {
      CurveStack stack = build_gamma_n(n, std::min(n, depth_cap), samples_per_bump,
                                       budget > used ? budget - used : 0);
      const SampledCurve& c = stack.top();
      for (Index i = 1; i < c.size(); ++i) append(c.point(i));
      used += static_cast<std::size_t>(c.size());
    }
    out.blocks.push_back({n, s0, run.back()});
  }
  out.marker_s[0] = run.back();

  // Caps: right semicircle down, bottom segment, left semicircle up.
  const double r = 0.125;
  const double s_caps = run.back();
  const long long m3 = segments(std::numbers::pi * r);
  for (long long j = 1; j <= m3; ++j) {
    if (j == m3) {
      append(Point(1.0, -0.25));
      break;
    }
    const double th = std::numbers::pi / 2 - std::numbers::pi * static_cast<double>(j) / static_cast<double>(m3);
    append(Point(1.0 + r * std::cos(th), -r + r * std::sin(th)));
  }
  const long long m2 = segments(1.0);
  for (long long j = 1; j <= m2; ++j)
    append(Point(j == m2 ? 0.0 : 1.0 - static_cast<double>(j) / static_cast<double>(m2), -0.25));
  const long long m1 = segments(std::numbers::pi * r);
  for (long long j = 1; j < m1; ++j) {
    const double th = -std::numbers::pi / 2 - std::numbers::pi * static_cast<double>(j) / static_cast<double>(m1);
    append(Point(r * std::cos(th), -r + r * std::sin(th)));
  }
  out.blocks.push_back({0, s_caps, run.back()});

  out.curve = SampledCurve::from_points(pts, true);
  return out;
}

}  // namespace asymcurve
