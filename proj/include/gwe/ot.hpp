#pragma once

#include <string>
#include <vector>

#include "gwe/common.hpp"
#include "gwe/kernels.hpp"
#include "gwe/measure.hpp"
#include "gwe/transport_simplex.hpp"

namespace gwe {

enum class CostTag { CA, Wp, Custom };

struct CostMatrix {
  RowMat entries;
  CostTag tag = CostTag::Custom;
  double param = 0;  // p for Wp costs

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

// c_A(x, y) = -4 ||x||^2 ||y||^2 - 32 x^T A y, evaluated entrywise for two
// clouds given as row-stacked matrices.
CostMatrix cost_cA(const Mat& x_cloud, const Mat& y_cloud, const Mat& A);

// ||x - y||^p cost.
CostMatrix cost_wp(const Mat& x_cloud, const Mat& y_cloud, double p);

// Sparse coupling with prescribed marginals.
class Coupling {
 public:
  Coupling(Eigen::Index n, Eigen::Index m, std::vector<PlanEntry> entries);

  Eigen::Index rows() const { return n_; }
  Eigen::Index cols() const { return m_; }
  const std::vector<PlanEntry>& entries() const { return entries_; }

  Vec row_sums() const;
  Vec col_sums() const;
  Mat dense() const;

  // integral of x y^T d pi over the plan support.
  Mat cross_moment(const Mat& X, const Mat& Y) const;

  // Checks marginal feasibility and nonnegativity against the two weight
  // vectors; throws DomainError on violation beyond 1e-9.
  void validate(const Vec& mu_w, const Vec& nu_w) const;

 private:
  Eigen::Index n_, m_;
  std::vector<PlanEntry> entries_;
};

enum class OtMethod { Exact, Entropic };

struct OtSolution {
  double value = 0;
  Coupling coupling{1, 1, {{0, 0, 1.0}}};
  Vec dual_f;
  Vec dual_g;
  OtMethod method = OtMethod::Exact;
  double epsilon = 0;       // final regularization (entropic only)
  double duality_gap = 0;   // value - feasible dual bound
  bool has_plan = true;     // false when the caller asked to skip plan storage
};

struct OtOptions {
  OtMethod method = OtMethod::Exact;
  bool keep_plan = true;
  double entropic_eps_floor_rel = 1e-3;  // epsilon halves from max|C| to this
  double entropic_marginal_tol = 1e-8;
  int entropic_max_iters_per_level = 500;
};

// Exact or entropic discrete OT.  Marginal weights below 1e-15 are
// rejected (numerically degenerate).  Exact solves carry duals with
// f_i + g_j <= C_ij + 1e-7 and a duality gap below 1e-7.
OtSolution solve_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const CostMatrix& C, const OtOptions& opts = {});

// Method selection rule: exact up to n*m <= 4e6, entropic above (unless
// exact_only forbids the fallback).
OtMethod choose_method(Eigen::Index n, Eigen::Index m, bool exact_only);

struct WassersteinCost {
  double p_power = 0;   // W_p^p
  double distance = 0;  // W_p
};

WassersteinCost wasserstein_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 double p, const OtOptions& opts = {});

// Semidual objective of the finite-target form:
//   g^T nu + sum_i mu_i min_j { c_A(x_i, y_j) - g_j },
// ties in the inner minimum broken by lowest index.
double semidual_value(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const Mat& A, const Vec& g);

// Diagnostic bound on semidiscrete potentials normalized to sum g = 0:
//   |g_j| <= (1 - 1/l) (1/min_j nu_j) ((8 + 32 ||A||_op) m2(mu) + 32 ||A||_op)
// for targets supported in the unit ball.
double semidual_potential_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                double a_op_norm);

}  // namespace gwe
