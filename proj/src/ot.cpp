#include "gwe/ot.hpp"

#include <algorithm>
#include <cmath>

#include "gwe/sinkhorn.hpp"

namespace gwe {

CostMatrix cost_cA(const Mat& x_cloud, const Mat& y_cloud, const Mat& A) {
  CostMatrix c;
  c.entries = bilinear_cost(x_cloud, y_cloud, A);
  c.tag = CostTag::CA;
  return c;
}

CostMatrix cost_wp(const Mat& x_cloud, const Mat& y_cloud, double p) {
  if (x_cloud.cols() != y_cloud.cols())
    throw DomainError("cost_wp: clouds have different ambient dimension");
  CostMatrix c;
  c.entries = pairwise_power_cost(x_cloud, y_cloud, p);
  c.tag = CostTag::Wp;
  c.param = p;
  return c;
}

Coupling::Coupling(Eigen::Index n, Eigen::Index m, std::vector<PlanEntry> entries)
    : n_(n), m_(m), entries_(std::move(entries)) {}

Vec Coupling::row_sums() const {
  Vec r = Vec::Zero(n_);
  for (const PlanEntry& e : entries_) r(e.i) += e.w;
  return r;
}

Vec Coupling::col_sums() const {
  Vec c = Vec::Zero(m_);
  for (const PlanEntry& e : entries_) c(e.j) += e.w;
  return c;
}

Mat Coupling::dense() const {
  Mat d = Mat::Zero(n_, m_);
  for (const PlanEntry& e : entries_) d(e.i, e.j) += e.w;
  return d;
}

Mat Coupling::cross_moment(const Mat& X, const Mat& Y) const {
  Mat M = Mat::Zero(X.cols(), Y.cols());
  for (const PlanEntry& e : entries_)
    M.noalias() += e.w * (X.row(e.i).transpose() * Y.row(e.j));
  return M;
}

void Coupling::validate(const Vec& mu_w, const Vec& nu_w) const {
  for (const PlanEntry& e : entries_)
    if (e.w < 0) throw DomainError("Coupling: negative plan entry");
  if ((row_sums() - mu_w).cwiseAbs().maxCoeff() > 1e-9)
    throw DomainError("Coupling: row marginals off by more than 1e-9");
  if ((col_sums() - nu_w).cwiseAbs().maxCoeff() > 1e-9)
    throw DomainError("Coupling: column marginals off by more than 1e-9");
}

OtMethod choose_method(Eigen::Index n, Eigen::Index m, bool exact_only) {
  if (exact_only) return OtMethod::Exact;
  return (static_cast<long long>(n) * m > 4000000LL) ? OtMethod::Entropic : OtMethod::Exact;
}

OtSolution solve_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const CostMatrix& C, const OtOptions& opts) {
  const Eigen::Index n = mu.size(), m = nu.size();
  if (C.rows() != n || C.cols() != m)
    throw DomainError("solve_ot: cost matrix shape does not match the measures");
  if (mu.weights().minCoeff() < 1e-15 || nu.weights().minCoeff() < 1e-15)
    throw DomainError("solve_ot: numerically degenerate weight below 1e-15");

  OtSolution sol;
  if (opts.method == OtMethod::Exact) {
    TransportSimplex simplex(mu.weights(), nu.weights());
    auto res = simplex.solve(C.entries);
    sol.value = res.value;
    sol.dual_f = std::move(res.u);
    sol.dual_g = std::move(res.v);
    sol.method = OtMethod::Exact;
    sol.duality_gap = sol.value - (sol.dual_f.dot(mu.weights()) + sol.dual_g.dot(nu.weights()));
    if (opts.keep_plan) {
      sol.coupling = Coupling(n, m, std::move(res.plan));
      sol.has_plan = true;
    } else {
      sol.coupling = Coupling(n, m, {});
      sol.has_plan = false;
    }
  } else {
    auto res = sinkhorn_rounded(C.entries, mu.weights(), nu.weights(),
                                opts.entropic_eps_floor_rel, opts.entropic_marginal_tol,
                                opts.entropic_max_iters_per_level);
    sol.value = res.value;
    sol.dual_f = std::move(res.f);
    sol.dual_g = std::move(res.g);
    sol.method = OtMethod::Entropic;
    sol.epsilon = res.epsilon;
    sol.duality_gap = res.gap;
    if (opts.keep_plan) {
      std::vector<PlanEntry> entries;
      entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          if (res.plan(i, j) != 0.0)
            entries.push_back({static_cast<int>(i), static_cast<int>(j), res.plan(i, j)});
      sol.coupling = Coupling(n, m, std::move(entries));
      sol.has_plan = true;
    } else {
      sol.coupling = Coupling(n, m, {});
      sol.has_plan = false;
    }
  }
  return sol;
}

WassersteinCost wasserstein_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 double p, const OtOptions& opts) {
  if (mu.dim() != nu.dim())
    throw DomainError("wasserstein_cost: ambient dimensions differ");
  if (p < 1.0) throw DomainError("wasserstein_cost: p must be >= 1");
  const CostMatrix C = cost_wp(mu.atoms(), nu.atoms(), p);
  OtOptions o = opts;
  o.keep_plan = false;
  const OtSolution sol = solve_ot(mu, nu, C, o);
  WassersteinCost w;
  w.p_power = std::max(sol.value, 0.0);  // tiny negative roundoff is clipped
  w.distance = std::pow(w.p_power, 1.0 / p);
  return w;
}

double semidual_potential_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                double a_op_norm) {
  const double min_w = nu.weights().minCoeff();
  if (min_w <= 0) throw DomainError("semidual_potential_bound: target weights must be positive");
  const double m2 = mu.weights().dot(mu.atoms().rowwise().squaredNorm());
  const double K = (8.0 + 32.0 * a_op_norm) * m2 + 32.0 * a_op_norm;
  const double ell = static_cast<double>(nu.size());
  return (1.0 - 1.0 / ell) * K / min_w;
}

double semidual_value(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const Mat& A, const Vec& g) {
  if (g.size() != nu.size())
    throw DomainError("semidual_value: g length must equal the target atom count");
  if (A.rows() != mu.dim() || A.cols() != nu.dim())
    throw DomainError("semidual_value: A shape does not match the clouds");
  const Mat& X = mu.atoms();
  const Mat& Y = nu.atoms();
  const Vec ysq = Y.rowwise().squaredNorm();
  const Mat XA = X * A;
  double acc = g.dot(nu.weights());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double xsq = X.row(i).squaredNorm();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      const double c = -4.0 * xsq * ysq(j) - 32.0 * XA.row(i).dot(Y.row(j));
      const double val = c - g(j);
      if (val < best) best = val;  // strict: lowest index wins ties
    }
    acc += mu.weights()(i) * best;
  }
  return acc;
}

}  // namespace gwe
