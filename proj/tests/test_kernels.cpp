#include <doctest.h>

#include "gwe/kernels.hpp"
#include "gwe/rng.hpp"

using namespace gwe;

namespace {
Mat random_cloud(std::uint64_t seed, Eigen::Index n, int d) {
  Rng rng(SeedPath{seed, 0, 0, 0});
  Mat X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = rng.gaussian();
  return X;
}
}  // namespace

TEST_CASE("parallel kernels agree with the serial references") {
  const Mat X = random_cloud(41, 37, 3);
  const Mat Y = random_cloud(42, 29, 3);
  const Mat A = random_cloud(43, 3, 3);

  for (double p : {1.0, 2.0, 4.0}) {
    const Mat a = pairwise_power_cost(X, Y, p);
    const Mat b = serial::pairwise_power_cost(X, Y, p);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * (1 + b.cwiseAbs().maxCoeff()));
  }
  const Mat ca = bilinear_cost(X, Y, A);
  const Mat cb = serial::bilinear_cost(X, Y, A);
  CHECK((ca - cb).cwiseAbs().maxCoeff() <= 1e-12 * (1 + cb.cwiseAbs().maxCoeff()));

  std::vector<PlanEntry> plan;
  for (int i = 0; i < 29; ++i) plan.push_back({i, i, 1.0 / 29});
  const double ga = gw_pair_sum(X, Y, plan, 2.0, 2.0);
  const double gb = serial::gw_pair_sum(X, Y, plan, 2.0, 2.0);
  CHECK(ga == doctest::Approx(gb).epsilon(1e-12));
}

TEST_CASE("bilinear cost evaluates the closed formula") {
  Mat X(1, 2), Y(1, 2);
  X << 1.0, 2.0;
  Y << 3.0, -1.0;
  const Mat C = bilinear_cost(X, Y, Mat::Identity(2, 2));
  CHECK(C(0, 0) == doctest::Approx(-232.0).epsilon(1e-14));
}

TEST_CASE("zero alignment leaves only the product term") {
  const Mat X = random_cloud(44, 5, 2);
  const Mat Y = random_cloud(45, 6, 2);
  const Mat C = bilinear_cost(X, Y, Mat::Zero(2, 2));
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 6; ++j)
      CHECK(C(i, j) == doctest::Approx(-4.0 * X.row(i).squaredNorm() *
                                       Y.row(j).squaredNorm()).epsilon(1e-13));
}

TEST_CASE("bilinear cost scaling homogeneity of degree four") {
  const Mat X = random_cloud(46, 4, 2);
  const Mat Y = random_cloud(47, 4, 2);
  const Mat A = 0.3 * random_cloud(48, 2, 2);
  const double r = 2.5;
  const Mat lhs = bilinear_cost(X / r, Y / r, A / (r * r));
  const Mat rhs = bilinear_cost(X, Y, A) / std::pow(r, 4.0);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * (1 + rhs.cwiseAbs().maxCoeff()));
}

TEST_CASE("kernel shape mismatches are domain errors") {
  const Mat X = random_cloud(49, 4, 2);
  const Mat Y = random_cloud(50, 4, 3);
  CHECK_THROWS_AS(pairwise_power_cost(X, Y, 2.0), DomainError);
  CHECK_THROWS_AS(bilinear_cost(X, Y, Mat::Identity(3, 3)), DomainError);
}
