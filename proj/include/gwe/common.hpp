#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gwe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Bad user-supplied configuration (sampler parameters, config files, CLI).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated operation precondition (shape mismatch, non-centered input, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A constructive procedure (packing, solver) failed to produce its output.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gwe
