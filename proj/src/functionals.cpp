#include "asymcurve/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace asymcurve {

const char* to_string(Functional f) {
  return f == Functional::chordarc ? "chordarc" : "conformality";
}

const char* to_string(UAMode m) { return m == UAMode::equal ? "equal" : "dp"; }

// ---------------------------------------------------------------------------
// Pair ratios
// ---------------------------------------------------------------------------

PairEvaluator::PairEvaluator(const SampledCurve& curve) : index_(curve) {}

double PairEvaluator::chordarc(double a, double b) const {
  const SampledCurve& c = curve();
  const double chord = (c.at(a) - c.at(b)).norm();
  if (chord == 0.0) throw DegenerateSubarcError("subarc endpoints coincide");
  return index_.select(a, b).length / chord;
}

double PairEvaluator::conformality(double a, double b) const {
  const SampledCurve& c = curve();
  const Point pa = c.at(a), pb = c.at(b);
  const double chord = (pa - pb).norm();
  if (chord == 0.0) throw DegenerateSubarcError("subarc endpoints coincide");
  const ArcSpan arc = index_.select(a, b);
  const double detour = index_.max_detour(pa, pb, index_.interior(arc), chord);
  return std::max(1.0, detour / chord);
}

double PairEvaluator::eval(Functional f, double a, double b) const {
  return f == Functional::chordarc ? chordarc(a, b) : conformality(a, b);
}

double chordarc_ratio(const SampledCurve& curve, double a, double b) {
  return PairEvaluator(curve).chordarc(a, b);
}

double conformality_ratio(const SampledCurve& curve, double a, double b) {
  return PairEvaluator(curve).conformality(a, b);
}

// ---------------------------------------------------------------------------
// Pair scans
// ---------------------------------------------------------------------------

namespace {

struct PairRecord {
  double chord, value, s_a, s_b;
};

// Grid points per anchor whose forward arc offset lies in (0, reach].
std::vector<std::size_t> window_sizes(const std::vector<double>& sg, bool closed,
                                      double total, double reach) {
  const std::size_t m = sg.size();
  std::vector<std::size_t> w(m);
  for (std::size_t t = 0; t < m; ++t) {
    const double limit = sg[t] + reach;
    std::size_t count = static_cast<std::size_t>(
        std::upper_bound(sg.begin() + static_cast<std::ptrdiff_t>(t) + 1, sg.end(), limit) -
        sg.begin()) - t - 1;
    if (closed && limit >= total)
      count += static_cast<std::size_t>(
          std::upper_bound(sg.begin(), sg.begin() + static_cast<std::ptrdiff_t>(t), limit - total) -
          sg.begin());
    w[t] = std::min(count, m - 1);
  }
  return w;
}

std::vector<double> positions(const SampledCurve& c, const std::vector<Index>& idx) {
  std::vector<double> sg;
  sg.reserve(idx.size());
  for (Index i : idx) sg.push_back(c.s(i));
  return sg;
}

std::vector<Index> stride_grid(const SampledCurve& c, Index stride) {
  std::vector<Index> idx;
  for (Index i = 0; i < c.size(); i += stride) idx.push_back(i);
  return idx;
}

// Samples picked greedily so that consecutive picks are at least h apart.
std::vector<Index> spacing_grid(const SampledCurve& c, double h) {
  std::vector<Index> idx{0};
  double next = h;
  const double* s = c.arclen().data();
  const Index n = c.size();
  while (true) {
    const Index i = static_cast<Index>(std::lower_bound(s, s + n, next) - s);
    if (i >= n) break;
    idx.push_back(i);
    next = s[i] + h;
  }
  return idx;
}

std::size_t window_total(const std::vector<double>& sg, bool closed, double total,
                         double reach) {
  std::size_t w = 0;
  for (std::size_t x : window_sizes(sg, closed, total, reach)) w += x;
  return w;
}

ScanResult scan_impl(const PairEvaluator& ev, Functional which,
                     const PairScanConfig& cfg,
                     const std::function<void(const PairRecord&)>& sink) {
  if (!(cfg.delta > 0.0)) throw RangeError("scan delta must be positive");
  if (cfg.pair_budget < 1) throw RangeError("pair budget must be at least 1");
  const SampledCurve& c = ev.curve();
  if (c.size() < 3) throw InsufficientDataError("pair scans need three samples");

  const auto M = static_cast<std::size_t>(c.size());
  const double total = c.length();
  const double reach = cfg.reach * cfg.delta >= total
                           ? std::numeric_limits<double>::infinity()
                           : cfg.reach * cfg.delta;
  const std::size_t budget = cfg.pair_budget;

  ScanResult res;
  res.delta = cfg.delta;
  std::vector<Index> idx;
  if (cfg.endpoint_grid > 0) {
    res.stride = cfg.endpoint_grid;
    idx = stride_grid(c, cfg.endpoint_grid);
  } else if (M * (M - 1) / 2 <= budget) {
    res.stride = 1;
    idx = stride_grid(c, 1);
  } else {
    // Fit the arclength spacing to the budget; the window count scales
    // roughly like 1 / h^2, so a few multiplicative corrections suffice.
    const double span = std::min(reach, total);
    double h = std::max(std::sqrt(total * span / static_cast<double>(budget)),
                        total / std::sqrt(2.0 * static_cast<double>(budget)));
    for (int it = 0; it < 8; ++it) {
      idx = spacing_grid(c, h);
      const std::size_t w = window_total(positions(c, idx), c.closed(), total, reach);
      if (w <= budget && (w * 10 >= budget * 7 || idx.size() == M)) break;
      h *= std::sqrt(static_cast<double>(std::max<std::size_t>(w, 1)) /
                     static_cast<double>(budget)) * (w > budget ? 1.02 : 1.0);
    }
    res.spacing = h;
  }

  const std::vector<double> sg = positions(c, idx);
  const std::size_t m = sg.size();
  res.grid_size = m;
  bool have = false;
  auto visit = [&](std::size_t t, std::size_t u) {
    const double chord = (c.point(idx[t]) - c.point(idx[u])).norm();
    if (chord > cfg.delta || chord == 0.0) return;
    const double v = ev.eval(which, sg[t], sg[u]);
    ++res.pairs_evaluated;
    if (sink) sink({chord, v, sg[t], sg[u]});
    if (!have || v > res.sup_value) {
      have = true;
      res.sup_value = v;
      res.s_a = sg[t];
      res.s_b = sg[u];
    }
  };

  res.exhaustive = m * (m - 1) / 2 <= budget;
  if (res.exhaustive) {
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t u = t + 1; u < m; ++u) visit(t, u);
    return res;
  }

  const std::vector<std::size_t> w = window_sizes(sg, c.closed(), total, reach);
  std::size_t W = 0;
  for (std::size_t x : w) W += x;
  for (std::size_t t = 0; t < m; ++t) {
    if (w[t] == 0) continue;
    std::size_t quota = w[t];
    if (W > budget)
      quota = std::clamp<std::size_t>(
          static_cast<std::size_t>(static_cast<double>(budget) *
                                   static_cast<double>(w[t]) / static_cast<double>(W)),
          1, w[t]);
    if (quota == w[t]) {
      for (std::size_t k = 1; k <= w[t]; ++k) visit(t, (t + k) % m);
      continue;
    }
    // Selection sampling: each window slot kept with probability
    // needed / remaining, from a generator seeded by (seed, anchor).
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                      static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);
    std::size_t needed = quota;
    for (std::size_t k = 1; k <= w[t] && needed > 0; ++k) {
      const std::size_t remaining = w[t] - k + 1;
      if (rng() % remaining < needed) {
        visit(t, (t + k) % m);
        --needed;
      }
    }
  }
  return res;
}

}  // namespace

ScanResult scan_sup(const PairEvaluator& ev, Functional which,
                    const PairScanConfig& cfg) {
  return scan_impl(ev, which, cfg, nullptr);
}

ScanResult scan_sup(const SampledCurve& curve, Functional which,
                    const PairScanConfig& cfg) {
  const PairEvaluator ev(curve);
  return scan_sup(ev, which, cfg);
}

std::vector<std::optional<ScanResult>> scan_ladder(const PairEvaluator& ev,
                                                   Functional which,
                                                   const std::vector<double>& deltas,
                                                   const PairScanConfig& cfg) {
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1])) throw RangeError("deltas must be decreasing");

  std::vector<PairRecord> records;
  std::vector<ScanResult> own;
  for (double d : deltas) {
    PairScanConfig c = cfg;
    c.delta = d;
    own.push_back(scan_impl(ev, which, c,
                            [&](const PairRecord& r) { records.push_back(r); }));
  }

  std::vector<std::optional<ScanResult>> out;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    ScanResult r = own[i];
    bool have = false;
    for (const PairRecord& rec : records) {
      if (rec.chord > deltas[i]) continue;
      if (!have || rec.value > r.sup_value) {
        have = true;
        r.sup_value = rec.value;
        r.s_a = rec.s_a;
        r.s_b = rec.s_b;
      }
    }
    out.push_back(have ? std::optional<ScanResult>(r) : std::nullopt);
  }
  return out;
}

double smoothness_modulus(const SampledCurve& curve, double delta,
                          PairScanConfig cfg) {
  cfg.delta = delta;
  const ScanResult r = scan_sup(curve, Functional::chordarc, cfg);
  if (r.pairs_evaluated == 0) throw EmptyScanError("no sample pair within delta");
  return r.sup_value;
}

// ---------------------------------------------------------------------------
// Uniform approximability
// ---------------------------------------------------------------------------

namespace {

struct ResolvedArc {
  double s0 = 0.0;
  double length = 0.0;
  ArcSpan span;
};

ResolvedArc resolve(const SampledCurve& c, const SubarcRef& sub) {
  if (!(sub.s_start >= 0.0 && sub.s_start < sub.s_end && sub.s_end <= c.length()))
    throw RangeError("subarc must satisfy 0 <= s_start < s_end <= length");
  if (!c.closed() || sub.s_end - sub.s_start == c.length())
    return {sub.s_start, sub.s_end - sub.s_start,
            {sub.s_start, sub.s_end - sub.s_start}};
  const ArcSpan span = ArcIndex(c).select(sub.s_start, sub.s_end);
  return {span.s0, span.length, span};
}

std::vector<Point> arc_vertices(const SampledCurve& c, const ResolvedArc& arc) {
  std::vector<Point> v{c.at(arc.s0)};
  const std::size_t n = static_cast<std::size_t>(c.size());
  // Interior samples in traversal order, wrapping on closed curves. The
  // sample at `first` lies at or before s0.
  const Index first = c.segment_at(arc.s0);
  for (std::size_t k = 1; k <= n; ++k) {
    const Index i = static_cast<Index>((static_cast<std::size_t>(first) + k) % n);
    double off = c.s(i) - arc.s0;
    if (c.closed() && off < 0.0) off += c.length();
    if (off <= 0.0) continue;
    if (off >= arc.length) break;
    v.push_back(c.point(i));
  }
  v.push_back(c.at(arc.s0 + arc.length));
  return v;
}

}  // namespace

namespace {

// Point lookup for non-decreasing arclengths: gallops forward from the last
// segment instead of searching the whole table.
class Cursor {
 public:
  explicit Cursor(const SampledCurve& c) : c_(c) {}

  Point at(double s) {
    s = c_.normalize(s);
    const Index last = c_.segment_count() - 1;
    if (s < c_.s(k_)) k_ = 0;
    if (c_.segment_end_s(k_) < s) {
      // Smallest segment whose end reaches s: gallop, then bisect.
      Index lo = k_ + 1, hi = lo, step = 1;
      while (hi < last && c_.segment_end_s(hi) < s) {
        lo = hi + 1;
        step *= 2;
        hi = std::min(last, hi + step);
      }
      while (lo < hi) {
        const Index mid = lo + (hi - lo) / 2;
        if (c_.segment_end_s(mid) < s)
          lo = mid + 1;
        else
          hi = mid;
      }
      k_ = lo;
    }
    const double s0 = c_.s(k_), s1 = c_.segment_end_s(k_);
    const Index j = c_.segment_end(k_);
    if (s == s0) return c_.point(k_);
    if (s == s1) return c_.point(j);
    const double t = (s - s0) / (s1 - s0);
    return c_.point(k_) + t * (c_.point(j) - c_.point(k_));
  }

 private:
  const SampledCurve& c_;
  Index k_ = 0;
};

// Calls visit(n, chord_sum) for n = 1.. until it returns true or n_max.
template <typename Visit>
void chord_sums(const SampledCurve& curve, const ResolvedArc& arc, int n_max,
                UAMode mode, Visit visit) {
  if (n_max < 1) throw RangeError("n_max must be at least 1");
  if (mode == UAMode::equal) {
    for (int n = 1; n <= n_max; ++n) {
      Cursor cur(curve);
      double sum = 0.0;
      Point prev = cur.at(arc.s0);
      for (int i = 1; i <= n; ++i) {
        const double s = i == n ? arc.s0 + arc.length
                                : arc.s0 + arc.length * static_cast<double>(i) / n;
        const Point p = cur.at(s);
        sum += (p - prev).norm();
        prev = p;
      }
      if (visit(n, sum)) return;
    }
    return;
  }

  const std::vector<Point> v = arc_vertices(curve, arc);
  const std::size_t m = v.size();
  if (m > 20000) throw RangeError("dp mode is limited to 20000 subarc vertices");
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(m, kNone), cur(m);
  prev[0] = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    cur[0] = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
      double best = prev[j];
      for (std::size_t i = 0; i < j; ++i)
        if (prev[i] != kNone) best = std::max(best, prev[i] + (v[j] - v[i]).norm());
      cur[j] = best;
    }
    std::swap(prev, cur);
    if (visit(n, prev[m - 1])) return;
  }
}

}  // namespace

UAResult uniform_approx_n(const SampledCurve& curve, const SubarcRef& sub,
                          double epsilon, int n_max, UAMode mode) {
  if (!(epsilon > 0.0)) throw RangeError("epsilon must be positive");
  const ResolvedArc arc = resolve(curve, sub);
  UAResult res;
  res.arc_length = arc.length;
  chord_sums(curve, arc, n_max, mode, [&](int n, double sum) {
    res.n = n;
    res.ratio = arc.length / sum;
    res.found = (1.0 + epsilon) * sum >= arc.length;
    return res.found;
  });
  return res;
}

std::vector<double> ua_chord_sums(const SampledCurve& curve, const SubarcRef& sub,
                                  int n_max, UAMode mode) {
  std::vector<double> out;
  chord_sums(curve, resolve(curve, sub), n_max, mode, [&](int, double sum) {
    out.push_back(sum);
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

bool trend_to_one(const std::vector<LadderEntry>& ladder, double tol) {
  const ScanResult* last = nullptr;
  for (const LadderEntry& e : ladder) {
    if (!e.scan) continue;
    if (last && e.scan->sup_value > last->sup_value) return false;
    last = &*e.scan;
  }
  return last && last->sup_value - 1.0 <= tol;
}

std::vector<SubarcRef> stratified_subarcs(const SampledCurve& curve) {
  const double L = curve.length();
  std::vector<SubarcRef> out{{0.0, L}};
  for (int parts : {2, 4})
    for (int i = 0; i < parts; ++i)
      out.push_back({L * i / parts, i + 1 == parts ? L : L * (i + 1) / parts});
  return out;
}

ClassificationReport classify(const SampledCurve& curve,
                              const std::vector<double>& deltas, double epsilon,
                              int n_budget, const PairScanConfig& cfg,
                              std::vector<SubarcRef> subarcs) {
  if (deltas.size() < 2) throw RangeError("classification needs at least two deltas");
  const PairEvaluator ev(curve);
  ClassificationReport rep;

  PairScanConfig all = cfg;
  all.delta = curve.length();
  rep.chordarc = scan_sup(ev, Functional::chordarc, all);

  const auto conf = scan_ladder(ev, Functional::conformality, deltas, cfg);
  const auto smooth = scan_ladder(ev, Functional::chordarc, deltas, cfg);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    rep.conformality.push_back({deltas[i], conf[i]});
    rep.smoothness.push_back({deltas[i], smooth[i]});
  }

  if (subarcs.empty()) subarcs = stratified_subarcs(curve);
  rep.ua_all_found = true;
  for (const SubarcRef& sub : subarcs) {
    UAEntry e{sub, epsilon, UAMode::equal,
              uniform_approx_n(curve, sub, epsilon, n_budget, UAMode::equal)};
    rep.ua_all_found = rep.ua_all_found && e.result.found;
    rep.ua.push_back(e);
  }

  rep.conformality_to_one = trend_to_one(rep.conformality);
  rep.smoothness_to_one = trend_to_one(rep.smoothness);
  rep.forward_consistent =
      !rep.smoothness_to_one || (rep.conformality_to_one && rep.ua_all_found);
  return rep;
}

}  // namespace asymcurve
