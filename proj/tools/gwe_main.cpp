#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "gwe/config.hpp"
#include "gwe/csv.hpp"
#include "gwe/gw.hpp"
#include "gwe/harness.hpp"
#include "gwe/packing.hpp"

namespace fs = std::filesystem;
using namespace gwe;

namespace {

std::uint64_t resolve_seed(bool seed_given, std::uint64_t cli_seed, std::uint64_t config_seed) {
  if (seed_given) return cli_seed;
  if (const char* env = std::getenv("GW_EMPIRICS_SEED")) return std::strtoull(env, nullptr, 10);
  return config_seed;
}

int run_kind(ScenarioKind kind, const std::string& config_path, const std::string& out_dir,
             int jobs, bool seed_given, std::uint64_t cli_seed, bool exact_only,
             bool dump_plan, bool timings) {
  RunManifest manifest = parse_config(config_path);
  manifest.global_seed = resolve_seed(seed_given, cli_seed, manifest.global_seed);
  manifest.out_dir = out_dir;

  std::vector<ScenarioConfig> selected;
  for (ScenarioConfig& s : manifest.scenarios)
    if (s.kind == kind) {
      if (exact_only) s.solver.exact_only = true;
      selected.push_back(s);
    }
  manifest.scenarios = selected;

  fs::create_directories(out_dir);
  write_manifest((fs::path(out_dir) / "manifest.json").string(), manifest);

  RunControls rc;
  rc.global_seed = manifest.global_seed;
  rc.jobs = jobs;
  rc.collect_timings = timings;

  for (const ScenarioConfig& cfg : manifest.scenarios) {
    const ScenarioResult res = run_scenario(cfg, rc);
    const fs::path base = fs::path(out_dir) / cfg.name;
    write_raw_csv(base.string() + "_raw.csv", cfg.name, res.raw);
    write_summary_csv(base.string() + "_summary.csv", cfg.name, res.summary);
    if (res.has_fit) write_fit_csv(base.string() + "_fit.csv", res.fit, res.target);
    if (cfg.kind == ScenarioKind::Deviation)
      write_deviation_csv(base.string() + "_deviation.csv", res);
    if (cfg.kind == ScenarioKind::LeCam)
      write_lecam_csv(base.string() + "_risk.csv", res);
    std::cout << cfg.name << ": done";
    if (res.has_fit)
      std::cout << " slope=" << res.fit.slope << " target=" << res.target.exponent;
    std::cout << "\n";
    (void)dump_plan;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Eigen::setNbThreads(1);  // keep results independent of worker count

  CLI::App app{"Squared (2,2)-Gromov-Wasserstein estimation and Monte-Carlo harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int jobs = 1;
  std::uint64_t cli_seed = 0;
  bool seed_given = false;
  bool dump_plan = false, exact_only = false, timings = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker count for replications");
    sub->add_option("--seed", cli_seed, "global seed (overrides env and config)")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_flag("--dump-plan", dump_plan, "dump coupling and cost artifacts");
    sub->add_flag("--exact-only", exact_only, "forbid the entropic fallback");
    sub->add_flag("--timings", timings,
                  "record wall-clock seconds in raw CSVs (breaks byte-identical reruns)");
  };

  // estimate
  auto* est = app.add_subcommand("estimate", "one-shot GW estimate between two CSV clouds");
  std::string mu_path, nu_path;
  int est_starts = 8;
  double est_tol = 1e-9;
  est->add_option("mu", mu_path, "CSV point cloud (rows: coords[, weight])")->required();
  est->add_option("nu", nu_path, "CSV point cloud")->required();
  est->add_option("--starts", est_starts, "random start pairs");
  est->add_option("--tol", est_tol, "relative convergence tolerance");
  add_common(est, false);

  // harness kinds
  auto* rate = app.add_subcommand("rate", "run rate scenarios from the config");
  add_common(rate, true);
  auto* dev = app.add_subcommand("deviation", "run deviation scenarios from the config");
  add_common(dev, true);
  auto* lecam = app.add_subcommand("lecam", "run Le Cam two-point scenarios from the config");
  add_common(lecam, true);
  auto* semi = app.add_subcommand("semidiscrete", "run semidiscrete scenarios from the config");
  add_common(semi, true);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "grid oracle on tiny inputs");
  std::string omu, onu;
  int grid_points = 801;
  oracle->add_option("mu", omu, "CSV point cloud")->required();
  oracle->add_option("nu", onu, "CSV point cloud")->required();
  oracle->add_option("--grid-points", grid_points, "grid values per A entry");
  add_common(oracle, false);

  // packing
  auto* packing = app.add_subcommand("packing", "emit a separated point set in the unit ball");
  int pk = 8, pdim = 2;
  std::string pout;
  packing->add_option("--k", pk, "point count")->required();
  packing->add_option("--dim", pdim, "dimension")->required();
  packing->add_option("--file", pout, "output CSV (default stdout summary only)");
  add_common(packing, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) {
      const DiscreteMeasure mu = read_point_cloud_csv_auto(mu_path);
      const DiscreteMeasure nu = read_point_cloud_csv_auto(nu_path);
      GwOptions opts;
      opts.random_starts = est_starts;
      opts.tol = est_tol;
      opts.exact_only = exact_only;
      opts.keep_plan = dump_plan;
      const GwResult r = estimate_gw(mu, nu, opts);
      std::cout << "d_hat=" << format_full(r.d_hat) << " s1=" << format_full(r.s1)
                << " s2=" << format_full(r.s2) << " iterations=" << r.iterations
                << " method=" << r.method << "\n";
      if (dump_plan) {
        fs::create_directories(out_dir);
        write_matrix_csv((fs::path(out_dir) / "align_matrix.csv").string(),
                         r.a_star.entries);
        write_plan_csv((fs::path(out_dir) / "plan.csv").string(), r.coupling);
      }
      return 0;
    }
    if (rate->parsed())
      return run_kind(ScenarioKind::Rate, config_path, out_dir, jobs, seed_given, cli_seed,
                      exact_only, dump_plan, timings);
    if (dev->parsed())
      return run_kind(ScenarioKind::Deviation, config_path, out_dir, jobs, seed_given,
                      cli_seed, exact_only, dump_plan, timings);
    if (lecam->parsed())
      return run_kind(ScenarioKind::LeCam, config_path, out_dir, jobs, seed_given, cli_seed,
                      exact_only, dump_plan, timings);
    if (semi->parsed())
      return run_kind(ScenarioKind::Semidiscrete, config_path, out_dir, jobs, seed_given,
                      cli_seed, exact_only, dump_plan, timings);
    if (oracle->parsed()) {
      const DiscreteMeasure mu = center(read_point_cloud_csv_auto(omu));
      const DiscreteMeasure nu = center(read_point_cloud_csv_auto(onu));
      const OracleResult r = oracle_grid(mu, nu, grid_points);
      const double d = s1(mu, nu) + r.value;
      std::cout << "oracle_d=" << format_full(d) << " s2=" << format_full(r.value)
                << " tolerance=" << format_full(r.tolerance) << "\n";
      return 0;
    }
    if (packing->parsed()) {
      const std::uint64_t seed = resolve_seed(seed_given, cli_seed, 0);
      const PackingResult r = packing_construction(pk, pdim, SeedPath{seed, 0, 0, 0});
      std::cout << "k=" << pk << " dim=" << pdim << " gamma=" << format_full(r.gamma)
                << " min_distance=" << format_full(r.min_distance)
                << " lambda_min=" << format_full(r.lambda_min) << "\n";
      if (!pout.empty()) write_point_cloud_csv(pout, r.measure);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
