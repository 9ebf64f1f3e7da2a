#pragma once

#include <string>
#include <vector>

#include "gwe/harness.hpp"

namespace gwe {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string config_path;
  std::string out_dir;
  std::string tool_version = kToolVersion;
  std::uint64_t global_seed = 0;
  std::vector<ScenarioConfig> scenarios;
};

// Strict JSON config ingestion: unknown keys are errors, defaults are
// filled (replications 50, tol 1e-9), every scenario is fully validated.
// Parse errors carry line/column, validation errors name the field.
RunManifest parse_config(const std::string& path);
RunManifest parse_config_text(const std::string& text, const std::string& origin);

// Serialization; parse(serialize(parse(x))) is a fixed point.
std::string serialize_manifest(const RunManifest& manifest);

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace gwe
