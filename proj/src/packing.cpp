#include "gwe/packing.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gwe/measure.hpp"

namespace gwe {

namespace {

Vec ball_proposal(Rng& rng, int d, double radius) {
  Vec g(d);
  double norm = 0;
  do {
    for (int i = 0; i < d; ++i) g(i) = rng.gaussian();
    norm = g.norm();
  } while (norm == 0.0);
  const double r = radius * std::pow(rng.uniform_pos(), 1.0 / static_cast<double>(d));
  return (r / norm) * g;
}

// Greedy insertion with separation threshold; returns accepted points
// (at most k) using at most `budget` proposals from a fresh stream.
std::vector<Vec> greedy_pack(int k, int d, double min_dist, long budget, const SeedPath& sp) {
  Rng rng(sp);
  std::vector<Vec> accepted;
  accepted.reserve(static_cast<std::size_t>(k));
  for (long t = 0; t < budget && static_cast<int>(accepted.size()) < k; ++t) {
    Vec p = ball_proposal(rng, d, 1.0 / 3.0);
    bool ok = true;
    for (const Vec& q : accepted) {
      if ((p - q).norm() <= min_dist) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back(std::move(p));
  }
  return accepted;
}

}  // namespace

PackingResult packing_construction(int k, int d, const SeedPath& sp) {
  if (d < 1) throw DomainError("packing_construction: d must be >= 1");
  if (k < d + 1) throw DomainError("packing_construction: k must be >= d+1");

  const long budget = 200L * k;
  const double kpow = std::pow(static_cast<double>(k), -1.0 / static_cast<double>(d));

  auto fits = [&](double gamma) {
    return static_cast<int>(greedy_pack(k, d, gamma * kpow, budget, sp).size()) == k;
  };

  // Largest separation constant for which exactly k points fit.
  double lo = 0.0, hi = 2.0;
  if (!fits(lo)) {
    const auto got = greedy_pack(k, d, 0.0, budget, sp);
    throw ConstructionError("packing_construction: placed " +
                            std::to_string(got.size()) + " of " + std::to_string(k) +
                            " points within the retry budget");
  }
  if (fits(hi)) {
    lo = hi;
  } else {
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      if (fits(mid)) lo = mid; else hi = mid;
    }
  }
  const double gamma = lo;

  const auto pts = greedy_pack(k, d, gamma * kpow, budget, sp);
  Mat atoms(k, d);
  for (int i = 0; i < k; ++i) atoms.row(i) = pts[static_cast<std::size_t>(i)].transpose();
  DiscreteMeasure m = center(DiscreteMeasure::uniform(std::move(atoms)));

  PackingResult out{m, gamma, 0.0, 0.0};
  double min_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      min_dist = std::min(min_dist, (m.atom(i) - m.atom(j)).norm());
  out.min_distance = min_dist;
  out.lambda_min = moments(m, 2.0).lambda_min;
  return out;
}

}  // namespace gwe
