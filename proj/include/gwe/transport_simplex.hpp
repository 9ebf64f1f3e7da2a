#pragma once

#include <vector>

#include "gwe/common.hpp"
#include "gwe/kernels.hpp"

namespace gwe {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Exact solver for the discrete transportation problem
//   min sum_ij C_ij pi_ij  s.t.  pi 1 = a, pi^T 1 = b, pi >= 0
// via the transportation simplex: northwest-corner start, rotating
// row-minimum block pricing, Bland's rule as anti-cycling fallback.
//
// The basis (spanning tree) persists across solve() calls: marginals are
// fixed at construction, so a previous basis stays primal-feasible under a
// new cost matrix and warm restarts skip most of the pivoting.
class TransportSimplex {
 public:
  struct Solution {
    double value = 0;
    std::vector<PlanEntry> plan;  // basic arcs (includes degenerate zeros)
    Vec u;                        // row duals
    Vec v;                        // column duals
    long pivots = 0;
  };

  TransportSimplex(Vec a, Vec b);

  // Cost entries must be finite; tolerance for pricing is
  // rel_tol * max|C| (absolute floor 1e-300 guards an all-zero cost).
  Solution solve(const RowMat& C, double rel_tol = 1e-11);

  void invalidate_basis() { has_basis_ = false; }

 private:
  void northwest_start();
  void build_tree_arrays();
  void compute_duals(const RowMat& C);

  int n_ = 0, m_ = 0, N_ = 0;  // N = n + m nodes; rows first, then columns
  Vec a_, b_;

  // Tree state: parent pointer per node (root = node 0), flow on the arc
  // to the parent, intrusive child lists, depth, and duals.
  std::vector<int> parent_, first_child_, next_sib_, prev_sib_;
  std::vector<double> flow_to_parent_;
  std::vector<int> depth_;
  Vec pot_;  // u for rows, v for columns
  bool has_basis_ = false;
};

}  // namespace gwe
