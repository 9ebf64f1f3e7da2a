#include "gwe/measure.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace gwe {

DiscreteMeasure::DiscreteMeasure(Mat atoms, Vec weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.rows() < 1) throw DomainError("DiscreteMeasure: need at least one atom");
  if (atoms_.cols() < 1) throw DomainError("DiscreteMeasure: dimension must be >= 1");
  if (weights_.size() != atoms_.rows())
    throw DomainError("DiscreteMeasure: weight count does not match atom count");
  if ((weights_.array() < 0).any())
    throw DomainError("DiscreteMeasure: negative weight");
  if (std::abs(weights_.sum() - 1.0) > 1e-12)
    throw DomainError("DiscreteMeasure: weights must sum to 1 within 1e-12");
  if (!atoms_.allFinite() || !weights_.allFinite())
    throw DomainError("DiscreteMeasure: non-finite entry");
}

DiscreteMeasure DiscreteMeasure::uniform(Mat atoms) {
  const Eigen::Index k = atoms.rows();
  return DiscreteMeasure(std::move(atoms), Vec::Constant(k, 1.0 / static_cast<double>(k)));
}

DiscreteMeasure DiscreteMeasure::dirac(const Vec& point) {
  Mat a(1, point.size());
  a.row(0) = point.transpose();
  return DiscreteMeasure(std::move(a), Vec::Ones(1));
}

Vec DiscreteMeasure::mean() const { return atoms_.transpose() * weights_; }

MomentSummary moments(const DiscreteMeasure& m, double q) {
  if (q <= 0) throw DomainError("moments: q must be positive");
  MomentSummary s;
  const Eigen::Index k = m.size(), d = m.dim();
  const Vec sq = m.atoms().rowwise().squaredNorm();
  const Vec& w = m.weights();
  s.m2 = w.dot(sq);
  s.m4 = w.dot(sq.array().square().matrix());
  s.m8 = w.dot(sq.array().pow(4.0).matrix());
  s.m2q = w.dot(sq.array().pow(q).matrix());
  s.mean = m.mean();
  Mat cov = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vec c = m.atom(i) - s.mean;
    cov += w(i) * (c * c.transpose());
  }
  s.covariance = cov;
  Eigen::SelfAdjointEigenSolver<Mat> es(cov);
  s.lambda_min = es.eigenvalues().minCoeff();
  return s;
}

DiscreteMeasure center(const DiscreteMeasure& m) {
  const Vec mu = m.mean();
  const double scale = 1.0 + m.atoms().cwiseAbs().maxCoeff();
  // No-op branch keeps center(center(m)) == center(m) with exact atom
  // equality; the threshold is well below the 1e-12 contract.
  if (mu.cwiseAbs().maxCoeff() <= 1e-13 * scale) return m;
  Mat shifted = m.atoms();
  shifted.rowwise() -= mu.transpose();
  DiscreteMeasure out(std::move(shifted), m.weights());
  // One correction pass tightens the residual mean toward machine epsilon.
  const Vec res = out.mean();
  if (res.cwiseAbs().maxCoeff() > 1e-13 * scale) {
    Mat again = out.atoms();
    again.rowwise() -= res.transpose();
    return DiscreteMeasure(std::move(again), m.weights());
  }
  return out;
}

bool is_centered(const DiscreteMeasure& m, double tol) {
  return m.mean().cwiseAbs().maxCoeff() <= tol;
}

DiscreteMeasure consolidate(const DiscreteMeasure& m) {
  std::map<std::vector<double>, double> acc;
  std::vector<std::vector<double>> order;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    std::vector<double> key(m.dim());
    for (Eigen::Index j = 0; j < m.dim(); ++j) key[j] = m.atoms()(i, j);
    auto [it, inserted] = acc.emplace(key, 0.0);
    if (inserted) order.push_back(key);
    it->second += m.weights()(i);
  }
  Mat atoms(static_cast<Eigen::Index>(order.size()), m.dim());
  Vec w(static_cast<Eigen::Index>(order.size()));
  for (std::size_t r = 0; r < order.size(); ++r) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) atoms(static_cast<Eigen::Index>(r), j) = order[r][j];
    w(static_cast<Eigen::Index>(r)) = acc[order[r]];
  }
  // Renormalize the tiny accumulation error so the invariant holds exactly.
  w /= w.sum();
  return DiscreteMeasure(std::move(atoms), std::move(w));
}

DiscreteMeasure transform(const DiscreteMeasure& m, const Mat& rot, const Vec& shift) {
  if (rot.cols() != m.dim()) throw DomainError("transform: matrix shape mismatch");
  if (shift.size() != rot.rows()) throw DomainError("transform: shift shape mismatch");
  Mat out = m.atoms() * rot.transpose();
  out.rowwise() += shift.transpose();
  return DiscreteMeasure(std::move(out), m.weights());
}

DiscreteMeasure scale(const DiscreteMeasure& m, double r) {
  return DiscreteMeasure(m.atoms() * r, m.weights());
}

}  // namespace gwe
