#pragma once

#include <vector>

#include "gwe/common.hpp"

namespace gwe {

// Finitely supported probability measure on R^d: atoms (rows) plus a
// simplex weight vector.  This is the universal representation of all
// marginals in the project, population and empirical alike.
class DiscreteMeasure {
 public:
  // atoms: k x d matrix (one row per atom); weights: length-k, nonnegative,
  // summing to one within 1e-12.  Throws DomainError otherwise.
  DiscreteMeasure(Mat atoms, Vec weights);

  // Uniform weights 1/k.
  static DiscreteMeasure uniform(Mat atoms);

  // Single atom with weight 1.
  static DiscreteMeasure dirac(const Vec& point);

  Eigen::Index size() const { return atoms_.rows(); }
  Eigen::Index dim() const { return atoms_.cols(); }
  const Mat& atoms() const { return atoms_; }
  const Vec& weights() const { return weights_; }
  Vec atom(Eigen::Index i) const { return atoms_.row(i).transpose(); }

  Vec mean() const;

  bool operator==(const DiscreteMeasure& o) const {
    return atoms_ == o.atoms_ && weights_ == o.weights_;
  }

 private:
  Mat atoms_;
  Vec weights_;
};

struct MomentSummary {
  double m2 = 0;       // ∫||x||^2
  double m4 = 0;       // ∫||x||^4
  double m8 = 0;       // ∫||x||^8
  double m2q = 0;      // ∫||x||^(2q) for the requested q
  Vec mean;
  Mat covariance;      // weighted covariance about the mean
  double lambda_min = 0;
};

MomentSummary moments(const DiscreteMeasure& m, double q);

// Shift atoms so the weighted mean is the zero vector (within 1e-12).
// Idempotent with exact atom equality: an input whose mean is already
// negligible relative to its coordinate scale is returned unchanged.
DiscreteMeasure center(const DiscreteMeasure& m);

bool is_centered(const DiscreteMeasure& m, double tol = 1e-10);

// Merge atoms that are exactly (bitwise) equal, summing their weights.
// Represents the same measure; shrinks supports of finitely supported
// samplers so downstream OT problems stay small.
DiscreteMeasure consolidate(const DiscreteMeasure& m);

// Apply x -> R x + t to every atom (R: d' x d).
DiscreteMeasure transform(const DiscreteMeasure& m, const Mat& rot, const Vec& shift);

// Scale every atom by r.
DiscreteMeasure scale(const DiscreteMeasure& m, double r);

}  // namespace gwe
