#include "gwe/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "gwe/divergence.hpp"

namespace gwe {

std::string kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Rate: return "rate";
    case ScenarioKind::Deviation: return "deviation";
    case ScenarioKind::LeCam: return "lecam";
    case ScenarioKind::Semidiscrete: return "semidiscrete";
  }
  return "?";
}

std::optional<ScenarioKind> kind_from_name(const std::string& s) {
  if (s == "rate") return ScenarioKind::Rate;
  if (s == "deviation") return ScenarioKind::Deviation;
  if (s == "lecam") return ScenarioKind::LeCam;
  if (s == "semidiscrete") return ScenarioKind::Semidiscrete;
  return std::nullopt;
}

long MRule::resolve(long n) const {
  switch (type) {
    case Type::Equal: return n;
    case Type::Fixed: return fixed_m;
    case Type::Ratio: return std::max<long>(1, std::lround(rho * static_cast<double>(n)));
  }
  return n;
}

GwOptions SolverOptions::to_gw_options() const {
  GwOptions g;
  g.random_starts = starts;
  g.tol = tol;
  g.max_iters = max_iters;
  g.exact_only = exact_only;
  g.keep_plan = false;
  return g;
}

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("scenario: name must be nonempty");
  if (n_grid.size() < 4) throw ConfigError("scenario '" + name + "': n-grid length >= 4");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("scenario '" + name + "': n-grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw ConfigError("scenario '" + name + "': n-grid must be strictly increasing");
  }
  if (replications < 8) throw ConfigError("scenario '" + name + "': replications >= 8");
  mu.validate();
  nu.validate();
  if (m_rule.type == MRule::Type::Fixed && m_rule.fixed_m < 1)
    throw ConfigError("scenario '" + name + "': fixed m must be >= 1");
  if (m_rule.type == MRule::Type::Ratio && !(m_rule.rho > 0))
    throw ConfigError("scenario '" + name + "': ratio rho must be > 0");
  if (!(solver.tol > 0)) throw ConfigError("scenario '" + name + "': solver tol must be > 0");
  if (solver.starts < 0) throw ConfigError("scenario '" + name + "': solver starts must be >= 0");
  if (solver.max_iters < 1)
    throw ConfigError("scenario '" + name + "': solver max-iters must be >= 1");
  if (kind == ScenarioKind::LeCam) {
    if (mu.family != Family::TwoPoint || mu.dim != 1)
      throw ConfigError("scenario '" + name + "': lecam requires a d=1 two-point family");
    if (lecam_c < 0) throw ConfigError("scenario '" + name + "': lecam c must be >= 0");
  }
  if (kind == ScenarioKind::Semidiscrete) {
    if (nu.family != Family::FiniteSupport)
      throw ConfigError("scenario '" + name + "': semidiscrete requires finite-support nu");
    if (nu.fs_weights.minCoeff() <= 0)
      throw ConfigError("scenario '" + name + "': semidiscrete nu needs positive weights");
    if (nu.fs_atoms.rowwise().norm().maxCoeff() > 1.0 + 1e-12)
      throw ConfigError("scenario '" + name + "': semidiscrete nu atoms must lie in the unit ball");
  }
  if (true_d.type == TrueD::Type::ReferenceRun && true_d.n_ref < 0)
    throw ConfigError("scenario '" + name + "': n-ref must be >= 0");
}

std::uint64_t ScenarioConfig::effective_seed() const {
  return seed != 0 ? seed : fnv1a64(name);
}

RateTarget theoretical_rate(int dx, int dy) {
  if (dx < 1 || dy < 1) throw DomainError("theoretical_rate: dimensions must be >= 1");
  const int dmin = std::min(dx, dy);
  RateTarget t;
  t.exponent = -2.0 / static_cast<double>(std::max(dmin, 4));
  t.log_factor = (dmin == 4);
  return t;
}

RateTarget scenario_target(const ScenarioConfig& cfg) {
  if (cfg.kind == ScenarioKind::Semidiscrete) return RateTarget{-0.5, false};
  if (cfg.kind == ScenarioKind::LeCam) return RateTarget{-0.5, false};
  if (cfg.mu.family == Family::ParetoFourth || cfg.nu.family == Family::ParetoFourth) {
    const double a = cfg.mu.family == Family::ParetoFourth ? cfg.mu.alpha : cfg.nu.alpha;
    return RateTarget{-(a - 1.0) / a, false};
  }
  return theoretical_rate(cfg.mu.dim, cfg.nu.dim);
}

RateFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  if (k != y.size() || k < 2) throw DomainError("ols_fit: need >= 2 matched points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(k), my = sy / static_cast<double>(k);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DomainError("ols_fit: degenerate abscissae");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0, tss = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    rss += e * e;
    tss += (y[i] - my) * (y[i] - my);
  }
  f.stderr_slope = (k > 2) ? std::sqrt(rss / static_cast<double>(k - 2) / sxx) : 0.0;
  f.r_squared = (tss > 0) ? 1.0 - rss / tss : 1.0;
  return f;
}

namespace {

DiscreteMeasure draw(const SamplerSpec& spec, long count, const SeedPath& sp) {
  DiscreteMeasure m = sample(spec, count, sp);
  return spec.finite_support() ? consolidate(m) : m;
}

GwResult run_estimator(const RunControls& rc, const DiscreteMeasure& a,
                       const DiscreteMeasure& b, const GwOptions& o) {
  if (rc.estimator) return rc.estimator(a, b, o);
  return estimate_gw(a, b, o);
}

double nearest_rank_quantile(std::vector<double> sorted, double level) {
  const std::size_t r = sorted.size();
  const auto idx = static_cast<std::size_t>(std::min<double>(
      static_cast<double>(r - 1),
      std::max(0.0, std::ceil(level * static_cast<double>(r)) - 1.0)));
  return sorted[idx];
}

struct ResolvedTrueD {
  double value = 0;
  double spread = 0;
};

long cap_reference_n(long requested, const MRule& rule, long long budget) {
  long n = requested;
  while (n > 2 && static_cast<long long>(n) * rule.resolve(n) > budget) {
    n = n * 9 / 10;
  }
  return std::max<long>(2, n);
}

ResolvedTrueD resolve_true_d(const ScenarioConfig& cfg, const RunControls& rc) {
  switch (cfg.true_d.type) {
    case TrueD::Type::Exact:
      return {cfg.true_d.value, 0.0};
    case TrueD::Type::SelfZero:
      return {0.0, 0.0};
    case TrueD::Type::ReferenceRun: {
      const long max_n = cfg.n_grid.back();
      long req = cfg.true_d.n_ref > 0 ? cfg.true_d.n_ref
                                      : std::max<long>(10 * max_n, 100000);
      const long n_ref = cap_reference_n(req, cfg.m_rule, rc.reference_cell_budget);
      const long m_ref = cfg.m_rule.resolve(n_ref);
      const std::uint64_t sseed = cfg.effective_seed();
      GwOptions o = cfg.solver.to_gw_options();
      double sum = 0, lo = 0, hi = 0;
      for (int r = 0; r < 3; ++r) {
        const std::uint64_t code = 0xFFFF0000ULL + static_cast<std::uint64_t>(r);
        const DiscreteMeasure mh =
            draw(cfg.mu, n_ref, SeedPath{rc.global_seed, sseed, code, 2});
        const DiscreteMeasure nh =
            draw(cfg.nu, m_ref, SeedPath{rc.global_seed, sseed, code, 3});
        const double d = run_estimator(rc, mh, nh, o).d_hat;
        sum += d;
        lo = (r == 0) ? d : std::min(lo, d);
        hi = (r == 0) ? d : std::max(hi, d);
      }
      return {sum / 3.0, hi - lo};
    }
  }
  return {0.0, 0.0};
}

struct RepOutcome {
  RawRow row;
  bool failed = false;
  std::string error;
};

// Shared replication engine: samples the pair, runs the estimator, and
// fills one raw row.  mu_spec may vary with n (LeCam).
ScenarioResult run_replicated(
    const ScenarioConfig& cfg, const RunControls& rc,
    const std::function<SamplerSpec(long)>& mu_spec_for_n,
    const std::function<double(long)>& true_d_for_n) {
  const std::uint64_t sseed = cfg.effective_seed();
  const GwOptions gw_opts = cfg.solver.to_gw_options();
  const int reps = cfg.replications;
  const std::size_t n_count = cfg.n_grid.size();
  std::vector<RepOutcome> slots(n_count * static_cast<std::size_t>(reps));

  const long total = static_cast<long>(n_count) * reps;
#pragma omp parallel for schedule(dynamic) num_threads(rc.jobs)
  for (long task = 0; task < total; ++task) {
    const std::size_t ni = static_cast<std::size_t>(task) / static_cast<std::size_t>(reps);
    const int rep = static_cast<int>(task % reps);
    const long n = cfg.n_grid[ni];
    const long m = cfg.m_rule.resolve(n);
    RepOutcome& out = slots[ni * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)];
    const std::uint64_t code =
        (static_cast<std::uint64_t>(ni) << 32) | static_cast<std::uint64_t>(rep);
    try {
      const SamplerSpec mu_spec = mu_spec_for_n(n);
      const auto t0 = std::chrono::steady_clock::now();
      const DiscreteMeasure mh = draw(mu_spec, n, SeedPath{rc.global_seed, sseed, code, 0});
      const DiscreteMeasure nh = draw(cfg.nu, m, SeedPath{rc.global_seed, sseed, code, 1});
      const GwResult g = run_estimator(rc, mh, nh, gw_opts);
      const auto t1 = std::chrono::steady_clock::now();
      const double td = true_d_for_n(n);
      out.row.n = n;
      out.row.m = m;
      out.row.replication = rep;
      out.row.d_hat = g.d_hat;
      out.row.true_d = td;
      out.row.delta = std::abs(g.d_hat - td);
      out.row.s1 = g.s1;
      out.row.s2 = g.s2;
      out.row.iterations = g.iterations;
      out.row.method = g.method;
      out.row.seconds =
          rc.collect_timings ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
  }

  for (std::size_t ni = 0; ni < n_count; ++ni)
    for (int rep = 0; rep < reps; ++rep) {
      const RepOutcome& o = slots[ni * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)];
      if (o.failed) {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "scenario '%s' replication failed at seed-path "
                      "(global=%llu, scenario=%llu, n=%ld, replication=%d): %s",
                      cfg.name.c_str(), static_cast<unsigned long long>(rc.global_seed),
                      static_cast<unsigned long long>(sseed), cfg.n_grid[ni], rep,
                      o.error.c_str());
        throw ConstructionError(buf);
      }
    }

  ScenarioResult res;
  res.scenario = cfg.name;
  res.raw.reserve(slots.size());
  for (const RepOutcome& o : slots) res.raw.push_back(o.row);

  for (std::size_t ni = 0; ni < n_count; ++ni) {
    std::vector<double> deltas;
    deltas.reserve(static_cast<std::size_t>(reps));
    for (int rep = 0; rep < reps; ++rep)
      deltas.push_back(
          slots[ni * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)].row.delta);
    double mean = 0;
    for (double d : deltas) mean += d;
    mean /= static_cast<double>(reps);
    double var = 0;
    for (double d : deltas) var += (d - mean) * (d - mean);
    var = (reps > 1) ? var / static_cast<double>(reps - 1) : 0.0;
    std::sort(deltas.begin(), deltas.end());
    SummaryRow s;
    s.n = cfg.n_grid[ni];
    s.mean_delta = mean;
    s.stderr_mean = std::sqrt(var / static_cast<double>(reps));
    s.q50 = nearest_rank_quantile(deltas, 0.5);
    s.q90 = nearest_rank_quantile(deltas, 0.9);
    s.q99 = nearest_rank_quantile(deltas, 0.99);
    res.summary.push_back(s);
  }
  return res;
}

void attach_fit(ScenarioResult& res, const ScenarioConfig& cfg) {
  res.target = scenario_target(cfg);
  std::vector<double> xs, ys, xs_adj;
  for (const SummaryRow& s : res.summary) {
    if (s.mean_delta <= 0) continue;
    const double ln = std::log(static_cast<double>(s.n));
    xs.push_back(ln);
    ys.push_back(std::log(s.mean_delta));
    xs_adj.push_back(res.target.exponent * ln + std::log(ln));
  }
  if (xs.size() >= 2) {
    res.fit = ols_fit(xs, ys);
    if (res.target.log_factor) {
      res.fit.has_log_adjusted = true;
      res.fit.slope_log_adjusted = ols_fit(xs_adj, ys).slope;
    }
    res.has_fit = true;
  }
}

}  // namespace

ScenarioResult run_rate_scenario(const ScenarioConfig& cfg, const RunControls& rc) {
  cfg.validate();
  const ResolvedTrueD td = resolve_true_d(cfg, rc);
  ScenarioResult res = run_replicated(
      cfg, rc, [&](long) { return cfg.mu; }, [&](long) { return td.value; });
  res.true_d_used = td.value;
  res.reference_spread = td.spread;
  attach_fit(res, cfg);
  return res;
}

ScenarioResult run_deviation_scenario(const ScenarioConfig& cfg, const RunControls& rc) {
  cfg.validate();
  const ResolvedTrueD td = resolve_true_d(cfg, rc);
  ScenarioResult res = run_replicated(
      cfg, rc, [&](long) { return cfg.mu; }, [&](long) { return td.value; });
  res.true_d_used = td.value;
  res.reference_spread = td.spread;
  for (const SummaryRow& s : res.summary) {
    const double root = std::sqrt(static_cast<double>(s.n));
    res.spread_q90.push_back(root * (s.q90 - s.q50));
    res.spread_q99.push_back(root * (s.q99 - s.q50));
  }
  return res;
}

ScenarioResult run_lecam_two_point(const ScenarioConfig& cfg, const RunControls& rc) {
  cfg.validate();
  auto eps_for_n = [&](long n) {
    return cfg.lecam_c / std::sqrt(static_cast<double>(n));
  };
  ScenarioResult res = run_replicated(
      cfg, rc,
      [&](long n) {
        SamplerSpec s = cfg.mu;
        s.eps = eps_for_n(n);
        return s;
      },
      [&](long n) {
        const double e = eps_for_n(n);
        return 32.0 * e * (1.0 - e);
      });
  for (const SummaryRow& s : res.summary) {
    const double e = eps_for_n(s.n);
    res.lecam_eps.push_back(e);
    res.lecam_chi2.push_back(
        chi2_divergence(two_point_measure(e), two_point_measure(0.0)));
    res.lecam_risk_sqrt_n.push_back(s.mean_delta * std::sqrt(static_cast<double>(s.n)));
  }
  attach_fit(res, cfg);
  return res;
}

ScenarioResult run_semidiscrete_scenario(const ScenarioConfig& cfg, const RunControls& rc) {
  cfg.validate();
  const ResolvedTrueD td = resolve_true_d(cfg, rc);
  ScenarioResult res = run_replicated(
      cfg, rc, [&](long) { return cfg.mu; }, [&](long) { return td.value; });
  res.true_d_used = td.value;
  res.reference_spread = td.spread;
  attach_fit(res, cfg);
  return res;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunControls& rc) {
  switch (cfg.kind) {
    case ScenarioKind::Rate: return run_rate_scenario(cfg, rc);
    case ScenarioKind::Deviation: return run_deviation_scenario(cfg, rc);
    case ScenarioKind::LeCam: return run_lecam_two_point(cfg, rc);
    case ScenarioKind::Semidiscrete: return run_semidiscrete_scenario(cfg, rc);
  }
  throw DomainError("run_scenario: unknown kind");
}

}  // namespace gwe
