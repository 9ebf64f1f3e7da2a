#include "gwe/kernels.hpp"

#include <cmath>

namespace gwe {

namespace {

inline double power_of_sq(double sq, double p) {
  // ||.||^p from the squared norm; exact for the common p = 2.
  if (p == 2.0) return sq;
  if (p == 1.0) return std::sqrt(sq);
  return std::pow(sq, 0.5 * p);
}

inline double abs_power(double a, double p) {
  if (p == 2.0) return a * a;
  if (p == 1.0) return std::abs(a);
  return std::pow(std::abs(a), p);
}

inline double pair_term(const Mat& X, const Mat& Y, const PlanEntry& s,
                        const PlanEntry& t, double p, double q) {
  const double dx = power_of_sq((X.row(s.i) - X.row(t.i)).squaredNorm(), q);
  const double dy = power_of_sq((Y.row(s.j) - Y.row(t.j)).squaredNorm(), q);
  return s.w * t.w * abs_power(dx - dy, p);
}

}  // namespace

Mat pairwise_power_cost(const Mat& X, const Mat& Y, double p) {
  if (X.cols() != Y.cols()) throw DomainError("pairwise_power_cost: dimension mismatch");
  const Eigen::Index n = X.rows(), m = Y.rows();
  Mat C(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      C(i, j) = power_of_sq((X.row(i) - Y.row(j)).squaredNorm(), p);
  return C;
}

Mat bilinear_cost(const Mat& X, const Mat& Y, const Mat& A) {
  if (A.rows() != X.cols() || A.cols() != Y.cols())
    throw DomainError("bilinear_cost: A shape does not match the clouds");
  const Eigen::Index n = X.rows(), m = Y.rows();
  const Vec xsq = X.rowwise().squaredNorm();
  const Vec ysq = Y.rowwise().squaredNorm();
  const Mat XA = X * A;  // n x dy
  Mat C(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      C(i, j) = -4.0 * xsq(i) * ysq(j) - 32.0 * XA.row(i).dot(Y.row(j));
  return C;
}

double gw_pair_sum(const Mat& X, const Mat& Y, const std::vector<PlanEntry>& plan,
                   double p, double q) {
  const Eigen::Index S = static_cast<Eigen::Index>(plan.size());
  std::vector<double> partial(static_cast<std::size_t>(S), 0.0);
#pragma omp parallel for schedule(static)
  for (Eigen::Index s = 0; s < S; ++s) {
    double acc = 0;
    for (Eigen::Index t = 0; t < S; ++t)
      acc += pair_term(X, Y, plan[static_cast<std::size_t>(s)],
                       plan[static_cast<std::size_t>(t)], p, q);
    partial[static_cast<std::size_t>(s)] = acc;
  }
  double total = 0;  // fixed-order reduction
  for (double v : partial) total += v;
  return total;
}

namespace serial {

Mat pairwise_power_cost(const Mat& X, const Mat& Y, double p) {
  if (X.cols() != Y.cols()) throw DomainError("pairwise_power_cost: dimension mismatch");
  Mat C(X.rows(), Y.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < Y.rows(); ++j)
      C(i, j) = power_of_sq((X.row(i) - Y.row(j)).squaredNorm(), p);
  return C;
}

Mat bilinear_cost(const Mat& X, const Mat& Y, const Mat& A) {
  if (A.rows() != X.cols() || A.cols() != Y.cols())
    throw DomainError("bilinear_cost: A shape does not match the clouds");
  Mat C(X.rows(), Y.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < Y.rows(); ++j)
      C(i, j) = -4.0 * X.row(i).squaredNorm() * Y.row(j).squaredNorm() -
                32.0 * X.row(i) * A * Y.row(j).transpose();
  return C;
}

double gw_pair_sum(const Mat& X, const Mat& Y, const std::vector<PlanEntry>& plan,
                   double p, double q) {
  double total = 0;
  for (const PlanEntry& s : plan) {
    double acc = 0;
    for (const PlanEntry& t : plan) acc += pair_term(X, Y, s, t, p, q);
    total += acc;
  }
  return total;
}

}  // namespace serial
}  // namespace gwe
