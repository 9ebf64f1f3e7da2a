#pragma once

#include "gwe/common.hpp"
#include "gwe/measure.hpp"
#include "gwe/rng.hpp"

namespace gwe {

struct PackingResult {
  DiscreteMeasure measure;   // k atoms, uniform weights, mean zero
  double gamma = 0;          // separation constant: min distance >= gamma * k^{-1/d}
  double min_distance = 0;   // realized minimum pairwise distance
  double lambda_min = 0;     // smallest covariance eigenvalue
};

// k separated points in the unit ball with uniform weights and zero mean.
// Greedy insertion of uniform proposals in B(0,1/3), accepting points
// farther than gamma * k^{-1/d} from all accepted ones; gamma is found by
// bisection so that exactly k points fit within a budget of 200*k
// proposals, after which the set is recentered.
PackingResult packing_construction(int k, int d, const SeedPath& sp);

}  // namespace gwe
