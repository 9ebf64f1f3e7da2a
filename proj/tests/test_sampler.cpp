#include <doctest.h>

#include <cmath>

#include "gwe/measure.hpp"
#include "gwe/sampler.hpp"

using namespace gwe;

namespace {
SamplerSpec spec_of(Family f, int dim) {
  SamplerSpec s;
  s.family = f;
  s.dim = dim;
  return s;
}
}  // namespace

TEST_CASE("pareto-fourth empirical fourth moment approaches alpha/(alpha-1)") {
  SamplerSpec s = spec_of(Family::ParetoFourth, 1);
  s.alpha = 1.5;
  const auto m = sample(s, 100000, SeedPath{11, 1, 0, 0});
  const double m4 = moments(m, 2.0).m4;
  CHECK(std::abs(m4 - 3.0) / 3.0 < 0.10);
}

TEST_CASE("two-point population at eps=0 is exactly symmetric") {
  const DiscreteMeasure p = population(spec_of(Family::TwoPoint, 1), SeedPath{});
  REQUIRE(p.size() == 2);
  CHECK(p.atoms()(0, 0) == -1.0);
  CHECK(p.atoms()(1, 0) == 1.0);
  CHECK(p.weights()(0) == 0.5);
  CHECK(p.weights()(1) == 0.5);
}

TEST_CASE("pareto-fourth boundary alpha values are configuration errors") {
  SamplerSpec s = spec_of(Family::ParetoFourth, 1);
  s.alpha = 1.0;
  CHECK_THROWS_AS(sample(s, 4, SeedPath{}), ConfigError);
  s.alpha = 2.5;
  CHECK_THROWS_WITH_AS(sample(s, 4, SeedPath{}),
                       doctest::Contains("alpha must lie in (1,2)"), ConfigError);
}

TEST_CASE("pareto-fourth tail matches x^{-4 alpha} within DKW bands") {
  SamplerSpec s = spec_of(Family::ParetoFourth, 1);
  s.alpha = 1.5;
  const long n = 100000;
  const auto m = sample(s, n, SeedPath{12, 2, 0, 0});
  // DKW at confidence 1 - 1e-6
  const double band = std::sqrt(std::log(2.0 / 1e-6) / (2.0 * n));
  for (double x : {1.5, 2.0, 3.0}) {
    long count = 0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (std::abs(m.atoms()(i, 0)) >= x) ++count;
    const double emp = static_cast<double>(count) / n;
    const double pop = std::pow(x, -4.0 * s.alpha);
    CHECK(std::abs(emp - pop) <= band);
  }
}

TEST_CASE("light-tailed families: empirical m2 and m4 within 10% at n=1e5") {
  struct Case {
    SamplerSpec spec;
    double m2, m4;
  };
  SamplerSpec ball = spec_of(Family::UniformBall, 3);      // m2 = d/(d+2), m4 = d/(d+4)
  SamplerSpec cube = spec_of(Family::UniformCube, 2);      // m2 = d/12 for side 1
  SamplerSpec gauss = spec_of(Family::Gaussian, 2);        // m2 = d, m4 = d(d+2)
  SamplerSpec twop = spec_of(Family::TwoPoint, 1);
  twop.eps = 0.1;
  const std::vector<Case> cases = {
      {ball, 3.0 / 5.0, 3.0 / 7.0},
      {cube, 2.0 / 12.0, 0.0},  // m4 checked only when > 0 below
      {gauss, 2.0, 8.0},
      {twop, 1.0, 1.0},
  };
  int idx = 0;
  for (const Case& c : cases) {
    const auto m = moments(sample(c.spec, 100000, SeedPath{13, static_cast<std::uint64_t>(idx++), 0, 0}), 2.0);
    CHECK(std::abs(m.m2 - c.m2) / c.m2 < 0.10);
    if (c.m4 > 0) CHECK(std::abs(m.m4 - c.m4) / c.m4 < 0.10);
  }
}

TEST_CASE("sampling is a pure function of the seed path") {
  SamplerSpec s = spec_of(Family::Gaussian, 3);
  const auto a = sample(s, 64, SeedPath{5, 6, 7, 0});
  const auto b = sample(s, 64, SeedPath{5, 6, 7, 0});
  const auto c = sample(s, 64, SeedPath{5, 6, 8, 0});
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("population is rejected for continuous families") {
  CHECK_THROWS_AS(population(spec_of(Family::Gaussian, 2), SeedPath{}), DomainError);
}
