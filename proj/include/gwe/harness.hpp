#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gwe/gw.hpp"
#include "gwe/measure.hpp"
#include "gwe/sampler.hpp"

namespace gwe {

enum class ScenarioKind { Rate, Deviation, LeCam, Semidiscrete };

std::string kind_name(ScenarioKind k);
std::optional<ScenarioKind> kind_from_name(const std::string& s);

struct MRule {
  enum class Type { Equal, Fixed, Ratio };
  Type type = Type::Equal;
  long fixed_m = 0;
  double rho = 1.0;

  long resolve(long n) const;
};

struct TrueD {
  enum class Type { Exact, SelfZero, ReferenceRun };
  Type type = Type::SelfZero;
  double value = 0;   // Exact
  long n_ref = 0;     // ReferenceRun; 0 = default rule
};

struct SolverOptions {
  int starts = 8;          // random start pairs for the alternating solver
  double tol = 1e-9;
  int max_iters = 100;
  bool exact_only = false;

  GwOptions to_gw_options() const;
};

struct ScenarioConfig {
  std::string name;
  ScenarioKind kind = ScenarioKind::Rate;
  SamplerSpec mu;
  SamplerSpec nu;
  std::vector<long> n_grid;
  MRule m_rule;
  int replications = 50;
  TrueD true_d;
  SolverOptions solver;
  std::uint64_t seed = 0;  // 0 = derive from the name
  double lecam_c = 0.1;    // LeCam only: epsilon = c * n^{-1/2}

  // Full validation (grid shape, replication count, per-kind requirements).
  void validate() const;
  std::uint64_t effective_seed() const;
};

struct RateTarget {
  double exponent = -0.5;
  bool log_factor = false;
};

// Rate exponent -2/((dx ^ dy) v 4), log factor exactly at min dimension 4.
RateTarget theoretical_rate(int dx, int dy);

// Per-scenario target: heavy-tail and semidiscrete regimes override the
// dimension rule.
RateTarget scenario_target(const ScenarioConfig& cfg);

struct RateFit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  double r_squared = 0;
  // Log-adjusted overlay for targets carrying the log factor: slope of
  // log mean|delta| against log(n^exponent * log n); target 1.
  bool has_log_adjusted = false;
  double slope_log_adjusted = 0;
};

// Ordinary least squares of y on x.
RateFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

struct RawRow {
  long n = 0;
  long m = 0;
  int replication = 0;
  double d_hat = 0;
  double true_d = 0;
  double delta = 0;
  double s1 = 0;
  double s2 = 0;
  int iterations = 0;
  std::string method;
  double seconds = 0;  // filled only when timing collection is enabled
};

struct SummaryRow {
  long n = 0;
  double mean_delta = 0;
  double stderr_mean = 0;
  double q50 = 0, q90 = 0, q99 = 0;
};

struct ScenarioResult {
  std::string scenario;
  std::vector<RawRow> raw;          // ordered by (n, replication)
  std::vector<SummaryRow> summary;  // ordered by n
  bool has_fit = false;
  RateFit fit;
  RateTarget target;
  double true_d_used = 0;
  double reference_spread = 0;     // spread across reference repetitions
  // Deviation scenarios: sqrt(n)-rescaled interquantile spreads per n.
  std::vector<double> spread_q90, spread_q99;
  // LeCam scenarios: per-n epsilon, chi-square, and rescaled risk.
  std::vector<double> lecam_eps, lecam_chi2, lecam_risk_sqrt_n;
};

struct RunControls {
  std::uint64_t global_seed = 0;
  int jobs = 1;
  bool collect_timings = false;
  // Reference runs are capped so n_ref * m_ref stays below this budget.
  long long reference_cell_budget = 33000000;
  // Injectable estimator for harness self-tests; null = estimate_gw.
  std::function<GwResult(const DiscreteMeasure&, const DiscreteMeasure&, const GwOptions&)>
      estimator;
};

ScenarioResult run_rate_scenario(const ScenarioConfig& cfg, const RunControls& rc);
ScenarioResult run_deviation_scenario(const ScenarioConfig& cfg, const RunControls& rc);
ScenarioResult run_lecam_two_point(const ScenarioConfig& cfg, const RunControls& rc);
ScenarioResult run_semidiscrete_scenario(const ScenarioConfig& cfg, const RunControls& rc);

// Dispatch on cfg.kind.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunControls& rc);

}  // namespace gwe
