#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "asymcurve/bump.hpp"
#include "asymcurve/geometry.hpp"

namespace asymcurve {

/// Piecewise-affine correspondence between child and parent arclength over
/// one refinement. Breakpoints are the child samples.
struct ParamMap {
  std::vector<double> child_s;
  std::vector<double> parent_s;

  double to_parent(double s) const;
  double to_child(double s) const;
  bool empty() const { return child_s.empty(); }
};

/// Parameters of one refinement from level k - 1 to level k.
struct LevelParams {
  int n = 0;
  int k = 0;
  double beta = 0.0;           // (k - 1) / n^2
  double K_prev = 0.0;         // sup |kappa| of the previous level
  double eps_prev_prev = 0.0;  // partition length one level further down
  double eps = 0.0;            // min(sqrt(beta) / K_prev, eps_prev_prev / 2)
  std::vector<SubarcRef> subarcs;  // previous level split at inflections
  std::vector<std::optional<PartitionSpec>> partitions;
  std::vector<int> signs;
  std::vector<std::string> warnings;

  std::size_t piece_count() const;
};

/// One bump (or one pass-through subarc) of a refined level.
struct PieceRecord {
  double parent_s0 = 0.0;
  double parent_s1 = 0.0;
  Index child_begin = 0;  // first child sample of the piece
  Index child_end = 0;    // last child sample (shared with the next piece)
  int side = 1;
  bool embellished = true;
  std::size_t subarc = 0;
};

struct RefineResult {
  SampledCurve curve;
  ParamMap map;
  std::vector<PieceRecord> pieces;
};

struct Level {
  SampledCurve curve;
  ParamMap map;                    // to the level below; empty at level 1
  std::optional<LevelParams> params;  // absent at level 1
  std::vector<PieceRecord> pieces;
};

struct CurveStack {
  int n = 0;
  std::vector<Level> levels;  // levels[j - 1] holds level j

  int depth() const { return static_cast<int>(levels.size()); }
  const Level& level(int j) const { return levels.at(static_cast<std::size_t>(j - 1)); }
  const SampledCurve& top() const { return levels.back().curve; }
  std::vector<std::string> warnings() const;
};

/// Sample budget from ASYMCURVE_BUDGET, else 2e8.
std::size_t default_budget();

/// Graph of f_{1/(n 2^n)}(2^n (t - 2^-n)) over [2^-n, 2^-(n-1)] with
/// `samples` uniform steps in t.
SampledCurve build_level1(int n, int samples = 1024);

LevelParams level_params(const SampledCurve& prev, int n, int k,
                         double eps_prev_prev);

RefineResult refine_level(const SampledCurve& prev, const LevelParams& params,
                          int samples_per_bump = 16);

CurveStack build_gamma_n(int n, int depth, int samples_per_bump = 16,
                         std::size_t budget = default_budget());

/// Map an arclength of the top level down to level `target`.
double project_to_level(const CurveStack& stack, double s, int target);

struct BlockSpan {
  int n = 0;  // 0 marks the tail segment and the caps
  double s0 = 0.0;
  double s1 = 0.0;
};

struct AssembledCurve {
  SampledCurve curve;
  std::vector<BlockSpan> blocks;  // gamma_n blocks in traversal order
  /// marker_s[n] is the arclength of M_n = (2^-n, 0) for n = 0..n_max.
  std::vector<double> marker_s;
};

/// Tail segment from the origin, gamma_{n_max} .. gamma_1 at depth
/// min(n, depth_cap), then the three caps back to the origin.
AssembledCurve assemble_gamma(int n_max, int depth_cap, int samples_per_bump = 16,
                              std::size_t budget = default_budget(),
                              double cap_step = 1.0 / 1024);

}  // namespace asymcurve
