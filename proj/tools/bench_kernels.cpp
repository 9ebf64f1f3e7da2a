// Benchmark comparing the OpenMP kernels against their serial references.
// Run: ./gwe_bench [n] [m] [d]

#include <chrono>
#include <cstdio>
#include <functional>

#include "gwe/kernels.hpp"
#include "gwe/measure.hpp"
#include "gwe/rng.hpp"
#include "gwe/sampler.hpp"

using namespace gwe;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const long n = argc > 1 ? std::atol(argv[1]) : 1024;
  const long m = argc > 2 ? std::atol(argv[2]) : 1024;
  const int d = argc > 3 ? std::atoi(argv[3]) : 5;

  SamplerSpec spec;
  spec.family = Family::UniformBall;
  spec.dim = d;
  const Mat X = sample(spec, n, SeedPath{1, 0, 0, 0}).atoms();
  const Mat Y = sample(spec, m, SeedPath{1, 0, 0, 1}).atoms();
  const Mat A = Mat::Identity(d, d) * 0.25;

  std::vector<PlanEntry> plan;
  for (long i = 0; i < std::min(n, m); ++i)
    plan.push_back({static_cast<int>(i), static_cast<int>(i), 1.0 / std::min(n, m)});

  std::printf("%-22s %12s %12s %8s\n", "kernel", "serial(ms)", "omp(ms)", "speedup");
  struct Row {
    const char* name;
    std::function<void()> ser, par;
  };
  Row rows[] = {
      {"pairwise_power_cost",
       [&] { serial::pairwise_power_cost(X, Y, 2.0); },
       [&] { pairwise_power_cost(X, Y, 2.0); }},
      {"bilinear_cost",
       [&] { serial::bilinear_cost(X, Y, A); },
       [&] { bilinear_cost(X, Y, A); }},
      {"gw_pair_sum",
       [&] { serial::gw_pair_sum(X, Y, plan, 2.0, 2.0); },
       [&] { gw_pair_sum(X, Y, plan, 2.0, 2.0); }},
  };
  for (const Row& r : rows) {
    const double ts = time_ms(r.ser, 3);
    const double tp = time_ms(r.par, 3);
    std::printf("%-22s %12.3f %12.3f %8.2fx\n", r.name, ts, tp, ts / tp);
  }
  return 0;
}
