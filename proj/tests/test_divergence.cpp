#include <doctest.h>

#include <cmath>

#include "gwe/divergence.hpp"
#include "gwe/rng.hpp"
#include "gwe/sampler.hpp"

using namespace gwe;

namespace {
DiscreteMeasure on_two_atoms(double w0) {
  Mat atoms(2, 1);
  atoms << 0.0, 1.0;
  Vec w(2);
  w << w0, 1.0 - w0;
  return DiscreteMeasure(atoms, w);
}
}  // namespace

TEST_CASE("chi2 of the epsilon-perturbed two-point pair is 4 eps^2") {
  const double eps = 0.1;
  const double c2 = chi2_divergence(two_point_measure(eps), two_point_measure(0.0));
  CHECK(c2 == doctest::Approx(4 * eps * eps).epsilon(1e-12));
}

TEST_CASE("identical measures have zero divergences") {
  const auto p = on_two_atoms(0.3);
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(chi2_divergence(p, p) == 0.0);
}

TEST_CASE("point mass against the uniform pair") {
  const auto p = on_two_atoms(1.0);
  const auto q = on_two_atoms(0.5);
  CHECK(tv_distance(p, q) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(chi2_divergence(p, q) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chi2 is +infinity when q vanishes where p does not") {
  const auto p = on_two_atoms(0.5);
  const auto q = on_two_atoms(1.0);
  CHECK(std::isinf(chi2_divergence(p, q)));
}

TEST_CASE("mismatched atom sets are a domain error") {
  Mat a1(2, 1), a2(2, 1);
  a1 << 0.0, 1.0;
  a2 << 0.0, 2.0;
  const DiscreteMeasure p = DiscreteMeasure::uniform(a1);
  const DiscreteMeasure q = DiscreteMeasure::uniform(a2);
  CHECK_THROWS_AS(tv_distance(p, q), DomainError);
}

TEST_CASE("tv is a metric on fixed-support measures") {
  Rng rng(SeedPath{31, 0, 0, 0});
  Mat atoms(4, 1);
  atoms << 0.0, 1.0, 2.0, 3.0;
  auto random_w = [&]() {
    Vec w(4);
    for (int i = 0; i < 4; ++i) w(i) = rng.uniform_pos();
    w /= w.sum();
    return DiscreteMeasure(atoms, w);
  };
  for (int t = 0; t < 100; ++t) {
    const auto p = random_w(), q = random_w(), r = random_w();
    CHECK(tv_distance(p, q) == doctest::Approx(tv_distance(q, p)).epsilon(1e-14));
    CHECK(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-14);
    CHECK(tv_distance(p, q) >= 0.0);
  }
}
