// Test-only oracles, independent of the solver paths they check.
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "gwe/measure.hpp"
#include "gwe/ot.hpp"

namespace gwe::testing {

// Minimum of a linear transportation objective over all permutation plans
// (valid exact optimum for uniform equal-size marginals, where a vertex of
// the Birkhoff polytope attains the optimum).  O(n!) - keep n <= 6.
inline double brute_force_ot_uniform(const Mat& C) {
  const Eigen::Index n = C.rows();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double v = 0;
    for (Eigen::Index i = 0; i < n; ++i) v += C(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, v);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

// Definitional S1: double integrals, no moment identities.
inline double s1_definitional(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  double xx = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    for (Eigen::Index j = 0; j < mu.size(); ++j)
      xx += mu.weights()(i) * mu.weights()(j) *
            std::pow((mu.atom(i) - mu.atom(j)).squaredNorm(), 2.0);
  double yy = 0;
  for (Eigen::Index i = 0; i < nu.size(); ++i)
    for (Eigen::Index j = 0; j < nu.size(); ++j)
      yy += nu.weights()(i) * nu.weights()(j) *
            std::pow((nu.atom(i) - nu.atom(j)).squaredNorm(), 2.0);
  double cross = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    for (Eigen::Index j = 0; j < nu.size(); ++j)
      cross += mu.weights()(i) * nu.weights()(j) * mu.atom(i).squaredNorm() *
               nu.atom(j).squaredNorm();
  return xx + yy - 4.0 * cross;
}

// The two-point pair: mu = (1/2+eps) delta_{-1} + (1/2-eps) delta_{+1},
// nu symmetric; couplings form the one-parameter family
// pi(-1,-1) = a in [eps, 1/2].
inline Coupling two_point_coupling(double eps, double a) {
  std::vector<PlanEntry> e{{0, 0, a},
                           {0, 1, 0.5 + eps - a},
                           {1, 0, 0.5 - a},
                           {1, 1, a - eps}};
  return Coupling(2, 2, std::move(e));
}

}  // namespace gwe::testing
