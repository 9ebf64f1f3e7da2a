#include "gwe/divergence.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace gwe {

namespace {

// Pairs q's weights to p's atoms by exact coordinate equality.
std::pair<Vec, Vec> match_weights(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  if (p.dim() != q.dim()) throw DomainError("divergence: dimension mismatch");
  if (p.size() != q.size()) throw DomainError("divergence: atom sets differ in size");
  std::map<std::vector<double>, Eigen::Index> index;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    std::vector<double> key(q.dim());
    for (Eigen::Index j = 0; j < q.dim(); ++j) key[j] = q.atoms()(i, j);
    if (!index.emplace(key, i).second)
      throw DomainError("divergence: duplicate atom in second measure");
  }
  Vec pw(p.size()), qw(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    std::vector<double> key(p.dim());
    for (Eigen::Index j = 0; j < p.dim(); ++j) key[j] = p.atoms()(i, j);
    auto it = index.find(key);
    if (it == index.end()) throw DomainError("divergence: atom sets do not match");
    pw(i) = p.weights()(i);
    qw(i) = q.weights()(it->second);
  }
  return {pw, qw};
}

}  // namespace

double tv_distance(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  const auto [pw, qw] = match_weights(p, q);
  return 0.5 * (pw - qw).cwiseAbs().sum();
}

double chi2_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  const auto [pw, qw] = match_weights(p, q);
  double acc = 0;
  for (Eigen::Index i = 0; i < pw.size(); ++i) {
    const double diff = pw(i) - qw(i);
    if (qw(i) == 0.0) {
      if (pw(i) > 0.0) return std::numeric_limits<double>::infinity();
      continue;  // 0/0 contributes nothing
    }
    acc += diff * diff / qw(i);
  }
  return acc;
}

}  // namespace gwe
