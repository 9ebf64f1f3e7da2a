#include "gwe/sinkhorn.hpp"

#include <cmath>
#include <vector>

namespace gwe {

SinkhornResult sinkhorn_rounded(const RowMat& C, const Vec& a, const Vec& b,
                                double eps_floor_rel, double marginal_tol,
                                int max_iters_per_level) {
  const Eigen::Index n = C.rows(), m = C.cols();
  const double max_abs = std::max(C.cwiseAbs().maxCoeff(), 1e-12);
  const double eps_floor = eps_floor_rel * max_abs;

  const Vec log_a = a.array().log().matrix();
  const Vec log_b = b.array().log().matrix();

  Vec f = Vec::Zero(n), g = Vec::Zero(m);
  std::vector<double> buf_n(static_cast<std::size_t>(n));
  std::vector<double> buf_m(static_cast<std::size_t>(m));

  SinkhornResult out;
  out.iterations = 0;

  double eps = max_abs;
  bool last_level = false;
  while (true) {
    if (eps <= eps_floor * (1.0 + 1e-12)) last_level = true;
    const double level_tol = last_level ? marginal_tol : 1e-3;
    for (int it = 0; it < max_iters_per_level; ++it) {
      // g update: column LSE (transposed access; parallel over columns).
#pragma omp parallel for schedule(static)
      for (Eigen::Index j = 0; j < m; ++j) {
        double mx = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i)
          mx = std::max(mx, log_a(i) + (f(i) - C(i, j)) / eps);
        double acc = 0;
        for (Eigen::Index i = 0; i < n; ++i)
          acc += std::exp(log_a(i) + (f(i) - C(i, j)) / eps - mx);
        buf_m[static_cast<std::size_t>(j)] = -eps * (mx + std::log(acc));
      }
      for (Eigen::Index j = 0; j < m; ++j) g(j) = buf_m[static_cast<std::size_t>(j)];

      // f update: row LSE; afterwards row marginals are exact in [exact
      // arithmetic], so the stopping rule checks columns only.
#pragma omp parallel for schedule(static)
      for (Eigen::Index i = 0; i < n; ++i) {
        const double* crow = C.data() + static_cast<std::ptrdiff_t>(i) * m;
        double mx = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < m; ++j)
          mx = std::max(mx, log_b(j) + (g(j) - crow[j]) / eps);
        double acc = 0;
        for (Eigen::Index j = 0; j < m; ++j)
          acc += std::exp(log_b(j) + (g(j) - crow[j]) / eps - mx);
        buf_n[static_cast<std::size_t>(i)] = -eps * (mx + std::log(acc));
      }
      for (Eigen::Index i = 0; i < n; ++i) f(i) = buf_n[static_cast<std::size_t>(i)];
      ++out.iterations;

      if (it % 5 == 4 || it == max_iters_per_level - 1) {
        // Column marginal violation of the implied plan.
        std::vector<double> colsum(static_cast<std::size_t>(m), 0.0);
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < m; ++j) {
          double s = 0;
          for (Eigen::Index i = 0; i < n; ++i)
            s += std::exp(log_a(i) + log_b(j) + (f(i) + g(j) - C(i, j)) / eps);
          colsum[static_cast<std::size_t>(j)] = s;
        }
        double err = 0;
        for (Eigen::Index j = 0; j < m; ++j)
          err += std::abs(colsum[static_cast<std::size_t>(j)] - b(j));
        if (err < level_tol) break;
      }
    }
    if (last_level) break;
    eps = std::max(0.5 * eps, eps_floor);
  }

  // Materialize and round onto the coupling polytope: scale rows down to
  // their targets, then columns, then add the rank-one residual.
  Mat plan(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      plan(i, j) = std::exp(log_a(i) + log_b(j) + (f(i) + g(j) - C(i, j)) / eps);

  Vec rs = plan.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = std::min(1.0, a(i) / rs(i));
    plan.row(i) *= s;
  }
  Vec cs = plan.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double s = std::min(1.0, b(j) / cs(j));
    plan.col(j) *= s;
  }
  // Residuals are nonnegative up to roundoff (scaling only removes mass).
  const Vec ra = (a - plan.rowwise().sum()).cwiseMax(0.0);
  const Vec rb = (b - plan.colwise().sum().transpose()).cwiseMax(0.0);
  const double ra_mass = ra.sum();
  if (ra_mass > 0) plan += (ra * rb.transpose()) / ra_mass;

  double value = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double rowacc = 0;
    for (Eigen::Index j = 0; j < m; ++j) rowacc += plan(i, j) * C(i, j);
    value += rowacc;
  }

  // Feasible dual bound: pair g with its exact c-transform.
  Vec f_feas(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* crow = C.data() + static_cast<std::ptrdiff_t>(i) * m;
    double mn = crow[0] - g(0);
    for (Eigen::Index j = 1; j < m; ++j) mn = std::min(mn, crow[j] - g(j));
    f_feas(i) = mn;
  }
  const double dual = f_feas.dot(a) + g.dot(b);

  out.value = value;
  out.plan = std::move(plan);
  out.f = std::move(f_feas);
  out.g = std::move(g);
  out.epsilon = eps;
  out.gap = value - dual;
  return out;
}

}  // namespace gwe
