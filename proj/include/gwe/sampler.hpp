#pragma once

#include <optional>
#include <string>

#include "gwe/common.hpp"
#include "gwe/measure.hpp"
#include "gwe/rng.hpp"

namespace gwe {

enum class Family {
  UniformBall,     // uniform on B(0, radius)
  UniformCube,     // uniform on [-side/2, side/2]^d
  Gaussian,        // N(0, cov)
  TwoPoint,        // (1/2+eps) delta_{-1} + (1/2-eps) delta_{+1} on R
  ParetoFourth,    // symmetric heavy tail P(|X| >= x) = x^{-4 alpha}, x >= 1
  FiniteSupport,   // explicit atoms/weights
  PackingUniform,  // uniform on a k-point separated set in the unit ball
};

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& s);

struct SamplerSpec {
  Family family = Family::UniformBall;
  int dim = 1;

  // Family parameters; only the relevant ones are read.
  double radius = 1.0;     // uniform-ball
  double side = 1.0;       // uniform-cube
  Mat cov;                 // gaussian; empty means identity
  double eps = 0.0;        // two-point, in [0, 1/2)
  double alpha = 1.5;      // pareto-fourth, in (1,2)
  int k = 0;               // packing-uniform, k >= d+1
  Mat fs_atoms;            // finite-support
  Vec fs_weights;          // finite-support

  // Throws ConfigError naming the offending field if invalid.
  void validate() const;

  // True when the family has a finite population support the harness can
  // consolidate after sampling.
  bool finite_support() const {
    return family == Family::TwoPoint || family == Family::FiniteSupport ||
           family == Family::PackingUniform;
  }
};

// n i.i.d. draws with uniform weights 1/n; pure function of the seed path.
DiscreteMeasure sample(const SamplerSpec& spec, Eigen::Index n, const SeedPath& sp);

// The exact population measure for finite-support families (two-point,
// finite-support, packing-uniform).  Throws DomainError for continuous ones.
DiscreteMeasure population(const SamplerSpec& spec, const SeedPath& sp);

// Exact two-point measure of the minimax construction:
// (1/2+eps) delta_{-1} + (1/2-eps) delta_{+1}.
DiscreteMeasure two_point_measure(double eps);

}  // namespace gwe
