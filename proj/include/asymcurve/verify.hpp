#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace asymcurve {

struct Tolerances {
  double quadrature = 1e-8;     // trapezoid vs refined trapezoid in L1
  double deviation = 1e-9;      // absolute slack on deviation bounds
  double cross_level = 1.1;     // factor on the summed cross-level bound
  double excess_slack = 1.5;    // factor on the excess term of L3..L9 bounds
  double ratio_low = 0.95;      // factor on the level-ratio lower excess
  double product_slack = 0.95;  // factor on the length product bound in L10
  double slope = 1e-9;          // graph slope check, in piece-normalised units
};

struct RunConfig {
  int n = 5;
  int depth_cap = 5;
  int n_max = 5;
  int samples_per_bump = 16;
  std::size_t budget = 200'000'000;
  std::uint64_t seed = 0;
  /// Ladder as multiples of the curve diameter.
  std::vector<double> deltas{0.125, 0.0625, 0.03125, 0.015625, 0.0078125,
                             0.00390625, 0.001953125, 0.0009765625};
  double epsilon = 0.05;          // UA tolerance on gamma blocks
  double fixture_epsilon = 0.01;  // UA tolerance on the fixture set
  int ua_n_max = 64;
  std::size_t pair_budget = 200'000;
  std::size_t fixture_pair_budget = 50'000;
  Tolerances tol;
  std::string report_path;
};

/// Defaults with the sample budget from ASYMCURVE_BUDGET when set.
RunConfig default_run_config();

nlohmann::json to_json(const RunConfig& cfg);

/// FNV-1a 64 of the compact JSON of the config, as 16 hex digits. The report
/// path is left out so the same run written elsewhere keeps its digest.
std::string config_digest(const RunConfig& cfg);

struct Bound {
  std::optional<double> lower;
  std::optional<double> upper;

  /// Signed distance inside the bound; negative when violated.
  double margin(double v) const;
};

struct CheckReport {
  std::string check_id;
  std::string reference;
  Bound bound;
  double measured = 0.0;
  double margin = 0.0;
  bool pass = false;
  bool gating = true;
  bool errored = false;
  nlohmann::json details = nlohmann::json::object();
  std::string config_digest;
};

nlohmann::json to_json(const CheckReport& r);

const std::vector<std::string>& check_ids();

/// Runs the named checks ("all" or a list of L1..L12). Builders are shared
/// across checks within one call.
std::vector<CheckReport> run_suite(const std::vector<std::string>& ids,
                                   const RunConfig& cfg);

/// 0 when every gating check passes, 2 when any check errored, 1 otherwise.
int exit_code(const std::vector<CheckReport>& reports);

nlohmann::json suite_report(const std::vector<CheckReport>& reports,
                            const RunConfig& cfg);

}  // namespace asymcurve
