#pragma once

#include "gwe/common.hpp"
#include "gwe/transport_simplex.hpp"

namespace gwe {

struct SinkhornResult {
  double value = 0;   // primal value of the rounded plan
  Mat plan;           // dense plan with exact marginals
  Vec f, g;           // final scaled duals w.r.t. the unregularized cost
  double epsilon = 0; // final regularization level
  double gap = 0;     // value - feasible dual bound (>= true suboptimality)
  int iterations = 0;
};

// Log-domain Sinkhorn with epsilon-scaling (halving from max|C| down to
// eps_floor_rel * max|C|), followed by rounding onto the coupling polytope
// (row/column rescaling plus a rank-one residual correction).  All row
// reductions run in fixed index order, so results do not depend on the
// OpenMP thread count.
SinkhornResult sinkhorn_rounded(const RowMat& C, const Vec& a, const Vec& b,
                                double eps_floor_rel, double marginal_tol,
                                int max_iters_per_level);

}  // namespace gwe
