#pragma once

#include <vector>

#include "gwe/common.hpp"

namespace gwe {

// Sparse plan entry: mass w at atom pair (i, j).
struct PlanEntry {
  int i;
  int j;
  double w;
};

// Data-parallel kernels used by the solvers.  Each has a serial reference
// twin in gwe::serial; the OpenMP versions are organized so results are
// bitwise identical for any thread count (entrywise fills, fixed-order
// per-row partial sums).

// ||x_i - y_j||^p for all pairs; X is n x d, Y is m x d.
Mat pairwise_power_cost(const Mat& X, const Mat& Y, double p);

// c_A(x_i, y_j) = -4 ||x_i||^2 ||y_j||^2 - 32 x_i^T A y_j.
Mat bilinear_cost(const Mat& X, const Mat& Y, const Mat& A);

// Double sum over the plan support:
//   sum_{s,t} w_s w_t | ||x_{i_s}-x_{i_t}||^q - ||y_{j_s}-y_{j_t}||^q |^p.
double gw_pair_sum(const Mat& X, const Mat& Y, const std::vector<PlanEntry>& plan,
                   double p, double q);

namespace serial {
Mat pairwise_power_cost(const Mat& X, const Mat& Y, double p);
Mat bilinear_cost(const Mat& X, const Mat& Y, const Mat& A);
double gw_pair_sum(const Mat& X, const Mat& Y, const std::vector<PlanEntry>& plan,
                   double p, double q);
}  // namespace serial

}  // namespace gwe
