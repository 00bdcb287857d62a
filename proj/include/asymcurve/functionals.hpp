#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asymcurve/arc_index.hpp"
#include "asymcurve/geometry.hpp"

namespace asymcurve {

enum class Functional { chordarc, conformality };

const char* to_string(Functional f);

struct PairScanConfig {
  double delta = 1.0;
  std::size_t pair_budget = 200'000;
  std::uint64_t seed = 0;
  /// Stride over curve samples. 0 picks samples at a uniform arclength
  /// spacing sized so the candidate pairs fit the budget.
  Index endpoint_grid = 0;
  /// Window pairs are restricted to arc offset <= reach * delta unless the
  /// grid is small enough to scan exhaustively.
  double reach = 8.0;
};

struct ScanResult {
  double sup_value = 1.0;
  double s_a = 0.0;
  double s_b = 0.0;
  std::size_t pairs_evaluated = 0;
  double delta = 0.0;
  Index stride = 0;       // index stride, 0 when the grid is by arclength
  double spacing = 0.0;   // arclength spacing of an automatic grid
  std::size_t grid_size = 0;
  bool exhaustive = false;
};

/// Evaluates both ratios for pairs of arclengths on one curve. Reuse one
/// instance for many pairs; it owns the spatial index.
class PairEvaluator {
 public:
  explicit PairEvaluator(const SampledCurve& curve);

  const SampledCurve& curve() const { return index_.curve(); }
  const ArcIndex& index() const { return index_; }

  double chordarc(double a, double b) const;
  double conformality(double a, double b) const;
  double eval(Functional f, double a, double b) const;

 private:
  ArcIndex index_;
};

/// Subarc length over chord; closed curves use the smaller-diameter arc.
double chordarc_ratio(const SampledCurve& curve, double a, double b);

/// max over samples w strictly inside the subarc of (|a-w| + |w-b|) / |a-b|,
/// and at least 1.
double conformality_ratio(const SampledCurve& curve, double a, double b);

/// Sup of a ratio over grid pairs with chord <= cfg.delta. A pair set that
/// fits the budget is evaluated completely; otherwise each anchor draws a
/// seeded sample of its window.
ScanResult scan_sup(const SampledCurve& curve, Functional which,
                    const PairScanConfig& cfg);
ScanResult scan_sup(const PairEvaluator& ev, Functional which,
                    const PairScanConfig& cfg);

/// Scan at every delta of a decreasing ladder. Each entry is the max over
/// all pairs evaluated by any of the ladder's scans whose chord is within
/// that delta, so the sequence is non-increasing by construction; own-scan
/// pair counts are kept per entry. Entries with no admissible pair are empty.
std::vector<std::optional<ScanResult>> scan_ladder(const PairEvaluator& ev,
                                                   Functional which,
                                                   const std::vector<double>& deltas,
                                                   const PairScanConfig& cfg);

/// Sup of the chord-arc ratio over pairs with chord <= delta. Throws
/// EmptyScanError when no pair qualifies.
double smoothness_modulus(const SampledCurve& curve, double delta,
                          PairScanConfig cfg);

enum class UAMode { equal, dp };

const char* to_string(UAMode m);

struct UAResult {
  bool found = false;
  int n = 0;           // minimal n when found, else n_max
  double ratio = 0.0;  // arc length over chord sum at n
  double arc_length = 0.0;
};

/// Smallest n <= n_max for which an n-piece partition of the subarc has
/// (1 + epsilon) * chord sum >= arc length. `equal` uses equal-arclength
/// points; `dp` maximises the chord sum over subarc vertices. On a closed
/// curve the subarc [0, length] is the whole loop cut at s_start, and other
/// subarcs are the smaller-diameter arc between the two points.
UAResult uniform_approx_n(const SampledCurve& curve, const SubarcRef& sub,
                          double epsilon, int n_max, UAMode mode);

/// Best chord sums for n = 1..n_max pieces under the given mode.
std::vector<double> ua_chord_sums(const SampledCurve& curve, const SubarcRef& sub,
                                  int n_max, UAMode mode);

struct LadderEntry {
  double delta = 0.0;
  std::optional<ScanResult> scan;
};

struct UAEntry {
  SubarcRef subarc;
  double epsilon = 0.0;
  UAMode mode = UAMode::equal;
  UAResult result;
};

struct ClassificationReport {
  ScanResult chordarc;
  std::vector<LadderEntry> conformality;
  std::vector<LadderEntry> smoothness;
  std::vector<UAEntry> ua;
  bool conformality_to_one = false;
  bool smoothness_to_one = false;
  bool ua_all_found = false;
  /// A smooth-looking trend must come with a conformal-looking trend and
  /// uniform approximability on every tested subarc.
  bool forward_consistent = false;
};

/// True when the non-empty sups never increase down the ladder and the last
/// one is within `tol` of 1.
bool trend_to_one(const std::vector<LadderEntry>& ladder, double tol = 1e-3);

/// Whole curve plus its halves and quarters by arclength.
std::vector<SubarcRef> stratified_subarcs(const SampledCurve& curve);

ClassificationReport classify(const SampledCurve& curve,
                              const std::vector<double>& deltas, double epsilon,
                              int n_budget, const PairScanConfig& cfg,
                              std::vector<SubarcRef> subarcs = {});

}  // namespace asymcurve
