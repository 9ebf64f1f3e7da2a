#pragma once

#include "gwe/measure.hpp"

namespace gwe {

// Total variation between measures on a shared finite atom set (atoms are
// matched by exact coordinate equality): half the l1 distance of the
// matched weight vectors.  Throws DomainError if the atom sets differ.
double tv_distance(const DiscreteMeasure& p, const DiscreteMeasure& q);

// chi^2(p, q) = sum_i (p_i - q_i)^2 / q_i on the shared atom set;
// +infinity when some q_i = 0 < p_i.
double chi2_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q);

}  // namespace gwe
