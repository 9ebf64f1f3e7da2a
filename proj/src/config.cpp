#include "gwe/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gwe {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& origin, const std::string& text,
                             std::size_t byte, const std::string& what) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                    ": " + what);
}

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

Mat parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array");
  const bool nested = j.front().is_array();
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols =
      nested ? static_cast<Eigen::Index>(j.front().size()) : 1;
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (nested) {
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
        throw ConfigError(where + ": ragged rows");
      for (Eigen::Index k = 0; k < cols; ++k)
        m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    } else {
      m(i, 0) = row.get<double>();
    }
  }
  return m;
}

SamplerSpec parse_sampler(const json& j, const std::string& where) {
  expect_keys(j, {"family", "dim", "params"}, where);
  if (!j.contains("family")) throw ConfigError(where + ": missing 'family'");
  if (!j.contains("dim")) throw ConfigError(where + ": missing 'dim'");
  SamplerSpec s;
  const std::string fam = j.at("family").get<std::string>();
  const auto f = family_from_name(fam);
  if (!f) throw ConfigError(where + ": unknown family '" + fam + "'");
  s.family = *f;
  s.dim = j.at("dim").get<int>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pw = where + ".params";
  switch (s.family) {
    case Family::UniformBall:
      expect_keys(params, {"radius"}, pw);
      if (params.contains("radius")) s.radius = params.at("radius").get<double>();
      break;
    case Family::UniformCube:
      expect_keys(params, {"side"}, pw);
      if (params.contains("side")) s.side = params.at("side").get<double>();
      break;
    case Family::Gaussian:
      expect_keys(params, {"cov"}, pw);
      if (params.contains("cov")) s.cov = parse_matrix(params.at("cov"), pw + ".cov");
      break;
    case Family::TwoPoint:
      expect_keys(params, {"eps"}, pw);
      if (params.contains("eps")) s.eps = params.at("eps").get<double>();
      break;
    case Family::ParetoFourth:
      expect_keys(params, {"alpha"}, pw);
      if (params.contains("alpha")) s.alpha = params.at("alpha").get<double>();
      break;
    case Family::FiniteSupport: {
      expect_keys(params, {"atoms", "weights"}, pw);
      if (!params.contains("atoms") || !params.contains("weights"))
        throw ConfigError(pw + ": finite-support needs 'atoms' and 'weights'");
      s.fs_atoms = parse_matrix(params.at("atoms"), pw + ".atoms");
      const Mat w = parse_matrix(params.at("weights"), pw + ".weights");
      s.fs_weights = w.col(0);
      break;
    }
    case Family::PackingUniform:
      expect_keys(params, {"k"}, pw);
      if (!params.contains("k")) throw ConfigError(pw + ": packing-uniform needs 'k'");
      s.k = params.at("k").get<int>();
      break;
  }
  s.validate();
  return s;
}

json sampler_to_json(const SamplerSpec& s) {
  json j;
  j["family"] = family_name(s.family);
  j["dim"] = s.dim;
  json p = json::object();
  switch (s.family) {
    case Family::UniformBall: p["radius"] = s.radius; break;
    case Family::UniformCube: p["side"] = s.side; break;
    case Family::Gaussian:
      if (s.cov.size() != 0) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < s.cov.rows(); ++i) {
          json row = json::array();
          for (Eigen::Index k = 0; k < s.cov.cols(); ++k) row.push_back(s.cov(i, k));
          rows.push_back(row);
        }
        p["cov"] = rows;
      }
      break;
    case Family::TwoPoint: p["eps"] = s.eps; break;
    case Family::ParetoFourth: p["alpha"] = s.alpha; break;
    case Family::FiniteSupport: {
      json rows = json::array();
      for (Eigen::Index i = 0; i < s.fs_atoms.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < s.fs_atoms.cols(); ++k) row.push_back(s.fs_atoms(i, k));
        rows.push_back(row);
      }
      p["atoms"] = rows;
      json w = json::array();
      for (Eigen::Index i = 0; i < s.fs_weights.size(); ++i) w.push_back(s.fs_weights(i));
      p["weights"] = w;
      break;
    }
    case Family::PackingUniform: p["k"] = s.k; break;
  }
  j["params"] = p;
  return j;
}

ScenarioConfig parse_scenario(const json& j, const std::string& where) {
  expect_keys(j,
              {"name", "kind", "mu", "nu", "n_grid", "m_rule", "replications",
               "true_d", "solver", "seed", "lecam_c"},
              where);
  for (const char* req : {"name", "kind", "mu", "nu", "n_grid"})
    if (!j.contains(req)) throw ConfigError(where + ": missing '" + req + "'");
  ScenarioConfig cfg;
  cfg.name = j.at("name").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  const auto k = kind_from_name(kind);
  if (!k) throw ConfigError(where + ": unknown kind '" + kind + "'");
  cfg.kind = *k;
  cfg.mu = parse_sampler(j.at("mu"), where + ".mu");
  cfg.nu = parse_sampler(j.at("nu"), where + ".nu");
  for (const json& v : j.at("n_grid")) cfg.n_grid.push_back(v.get<long>());
  if (j.contains("m_rule")) {
    const json& m = j.at("m_rule");
    expect_keys(m, {"type", "m", "rho"}, where + ".m_rule");
    const std::string t = m.at("type").get<std::string>();
    if (t == "equal") {
      cfg.m_rule.type = MRule::Type::Equal;
    } else if (t == "fixed") {
      cfg.m_rule.type = MRule::Type::Fixed;
      if (!m.contains("m")) throw ConfigError(where + ".m_rule: fixed needs 'm'");
      cfg.m_rule.fixed_m = m.at("m").get<long>();
    } else if (t == "ratio") {
      cfg.m_rule.type = MRule::Type::Ratio;
      if (!m.contains("rho")) throw ConfigError(where + ".m_rule: ratio needs 'rho'");
      cfg.m_rule.rho = m.at("rho").get<double>();
    } else {
      throw ConfigError(where + ".m_rule: unknown type '" + t + "'");
    }
  }
  if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
  if (j.contains("true_d")) {
    const json& t = j.at("true_d");
    expect_keys(t, {"type", "value", "n_ref"}, where + ".true_d");
    const std::string ty = t.at("type").get<std::string>();
    if (ty == "exact") {
      cfg.true_d.type = TrueD::Type::Exact;
      if (!t.contains("value")) throw ConfigError(where + ".true_d: exact needs 'value'");
      cfg.true_d.value = t.at("value").get<double>();
    } else if (ty == "self-zero") {
      cfg.true_d.type = TrueD::Type::SelfZero;
    } else if (ty == "reference-run") {
      cfg.true_d.type = TrueD::Type::ReferenceRun;
      if (t.contains("n_ref")) cfg.true_d.n_ref = t.at("n_ref").get<long>();
    } else {
      throw ConfigError(where + ".true_d: unknown type '" + ty + "'");
    }
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    expect_keys(s, {"starts", "tol", "max_iters", "exact_only"}, where + ".solver");
    if (s.contains("starts")) cfg.solver.starts = s.at("starts").get<int>();
    if (s.contains("tol")) cfg.solver.tol = s.at("tol").get<double>();
    if (s.contains("max_iters")) cfg.solver.max_iters = s.at("max_iters").get<int>();
    if (s.contains("exact_only")) cfg.solver.exact_only = s.at("exact_only").get<bool>();
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("lecam_c")) cfg.lecam_c = j.at("lecam_c").get<double>();
  cfg.validate();
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["kind"] = kind_name(cfg.kind);
  j["mu"] = sampler_to_json(cfg.mu);
  j["nu"] = sampler_to_json(cfg.nu);
  j["n_grid"] = cfg.n_grid;
  json m;
  switch (cfg.m_rule.type) {
    case MRule::Type::Equal: m["type"] = "equal"; break;
    case MRule::Type::Fixed:
      m["type"] = "fixed";
      m["m"] = cfg.m_rule.fixed_m;
      break;
    case MRule::Type::Ratio:
      m["type"] = "ratio";
      m["rho"] = cfg.m_rule.rho;
      break;
  }
  j["m_rule"] = m;
  j["replications"] = cfg.replications;
  json t;
  switch (cfg.true_d.type) {
    case TrueD::Type::Exact:
      t["type"] = "exact";
      t["value"] = cfg.true_d.value;
      break;
    case TrueD::Type::SelfZero: t["type"] = "self-zero"; break;
    case TrueD::Type::ReferenceRun:
      t["type"] = "reference-run";
      t["n_ref"] = cfg.true_d.n_ref;
      break;
  }
  j["true_d"] = t;
  j["solver"] = {{"starts", cfg.solver.starts},
                 {"tol", cfg.solver.tol},
                 {"max_iters", cfg.solver.max_iters},
                 {"exact_only", cfg.solver.exact_only}};
  j["seed"] = cfg.seed;
  if (cfg.kind == ScenarioKind::LeCam) j["lecam_c"] = cfg.lecam_c;
  return j;
}

}  // namespace

RunManifest parse_config_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(origin, text, e.byte, e.what());
  }
  if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");
  expect_keys(j, {"seed", "scenarios"}, origin);
  RunManifest m;
  m.config_path = origin;
  if (j.contains("seed")) m.global_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("scenarios")) {
    const json& arr = j.at("scenarios");
    if (!arr.is_array()) throw ConfigError(origin + ": 'scenarios' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      m.scenarios.push_back(
          parse_scenario(arr[i], origin + ".scenarios[" + std::to_string(i) + "]"));
  }
  return m;
}

RunManifest parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string serialize_manifest(const RunManifest& manifest) {
  json j;
  j["seed"] = manifest.global_seed;
  json arr = json::array();
  for (const ScenarioConfig& s : manifest.scenarios) arr.push_back(scenario_to_json(s));
  j["scenarios"] = arr;
  return j.dump(2);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open manifest path: " + path);
  json j;
  j["tool_version"] = manifest.tool_version;
  j["config_path"] = manifest.config_path;
  j["out_dir"] = manifest.out_dir;
  j["seed"] = manifest.global_seed;
  json arr = json::array();
  for (const ScenarioConfig& s : manifest.scenarios) arr.push_back(scenario_to_json(s));
  j["scenarios"] = arr;
  out << j.dump(2) << "\n";
}

}  // namespace gwe
