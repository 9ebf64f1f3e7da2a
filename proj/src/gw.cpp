#include "gwe/gw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gwe/kernels.hpp"
#include "gwe/rng.hpp"
#include "gwe/sinkhorn.hpp"

namespace gwe {

double AlignMatrix::op_norm() const {
  if (entries.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(entries);
  return svd.singularValues()(0);
}

void AlignMatrix::validate() const {
  if (op_norm() > radius + 1e-9)
    throw DomainError("AlignMatrix: operator norm exceeds the radius budget");
}

namespace {

double second_moment(const DiscreteMeasure& m) {
  return m.weights().dot(m.atoms().rowwise().squaredNorm());
}

Mat second_moment_matrix(const DiscreteMeasure& m) {
  Mat s = Mat::Zero(m.dim(), m.dim());
  for (Eigen::Index i = 0; i < m.size(); ++i)
    s.noalias() += m.weights()(i) * (m.atom(i) * m.atom(i).transpose());
  return s;
}

void require_centered(const DiscreteMeasure& m, const char* who) {
  if (!is_centered(m, 1e-10))
    throw DomainError(std::string(who) + ": input measure is not centered");
}

double radius_budget(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::sqrt((second_moment(mu) + 1.0) * (second_moment(nu) + 1.0)) / 2.0;
}

// Frobenius projection onto the operator-norm ball of radius R
// (singular-value clipping); reports whether the clip engaged.
Mat clip_op_norm(const Mat& A, double R, bool* clipped) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec s = svd.singularValues();
  bool any = false;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > R) {
      s(i) = R;
      any = true;
    }
  if (clipped) *clipped = any;
  if (!any) return A;
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

// Monotone coupling of the lexicographically sorted atoms; the resulting
// cross moment seeds the deterministic start for equal dimensions.
Mat sorted_coupling_cross_moment(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  auto order = [](const DiscreteMeasure& m) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(m.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      for (Eigen::Index k = 0; k < m.dim(); ++k) {
        if (m.atoms()(a, k) < m.atoms()(b, k)) return true;
        if (m.atoms()(a, k) > m.atoms()(b, k)) return false;
      }
      return a < b;
    });
    return idx;
  };
  const auto oi = order(mu), oj = order(nu);
  Mat M = Mat::Zero(mu.dim(), nu.dim());
  std::size_t i = 0, j = 0;
  double ra = mu.weights()(oi[0]), rb = nu.weights()(oj[0]);
  while (true) {
    const double f = std::min(ra, rb);
    M.noalias() += f * (mu.atom(oi[i]) * nu.atom(oj[j]).transpose());
    ra -= f;
    rb -= f;
    if (ra <= 0.0 && i + 1 < oi.size()) {
      ++i;
      ra = mu.weights()(oi[i]);
    } else if (j + 1 < oj.size()) {
      ++j;
      rb = nu.weights()(oj[j]);
    } else if (i + 1 < oi.size()) {
      ++i;
      ra = mu.weights()(oi[i]);
    } else {
      break;
    }
  }
  return M;
}

struct AlternatingRun {
  double value = 0;
  Mat a;
  std::vector<PlanEntry> plan;
  std::vector<double> trace;
  int iterations = 0;
  double fixed_point_gap = 0;
  bool clip_active = false;
  bool entropic = false;
  double epsilon = 0;
};

// One block-coordinate descent run from a fixed initial A.  The simplex
// instance persists across iterations (and across starts): marginals never
// change, so the previous basis warm-starts every solve.
AlternatingRun alternate_from(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              Mat A, double R, bool entropic, const GwOptions& opts,
                              TransportSimplex* simplex) {
  AlternatingRun run;
  run.entropic = entropic;
  const Mat& X = mu.atoms();
  const Mat& Y = nu.atoms();

  double prev = std::numeric_limits<double>::infinity();
  Mat cross = Mat::Zero(X.cols(), Y.cols());
  for (int it = 0; it < opts.max_iters; ++it) {
    const RowMat C = bilinear_cost(X, Y, A);
    double t_value = 0;
    if (!entropic) {
      auto sol = simplex->solve(C);
      t_value = sol.value;
      cross.setZero();
      for (const PlanEntry& e : sol.plan)
        cross.noalias() += e.w * (X.row(e.i).transpose() * Y.row(e.j));
      run.plan = std::move(sol.plan);
    } else {
      auto sol = sinkhorn_rounded(C, mu.weights(), nu.weights(),
                                  opts.entropic_eps_floor_rel, opts.entropic_marginal_tol,
                                  opts.entropic_max_iters_per_level);
      t_value = sol.value;
      run.epsilon = sol.epsilon;
      cross = X.transpose() * sol.plan * Y;
      if (opts.keep_plan) {
        run.plan.clear();
        for (Eigen::Index i = 0; i < sol.plan.rows(); ++i)
          for (Eigen::Index j = 0; j < sol.plan.cols(); ++j)
            if (sol.plan(i, j) != 0.0)
              run.plan.push_back({static_cast<int>(i), static_cast<int>(j), sol.plan(i, j)});
      }
    }
    const double J = 32.0 * A.squaredNorm() + t_value;
    run.trace.push_back(J);
    run.iterations = it + 1;
    run.value = J;
    run.a = A;
    if (std::abs(prev - J) < opts.tol * (1.0 + std::abs(J))) {
      run.fixed_point_gap = (A - 0.5 * cross).norm();
      break;
    }
    prev = J;
    A = clip_op_norm(0.5 * cross, R, &run.clip_active);
    run.fixed_point_gap = (A - 0.5 * cross).norm();
  }
  return run;
}

}  // namespace

double gw_objective(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const Coupling& pi, double p, double q) {
  if (p < 1.0 || q < 1.0) throw DomainError("gw_objective: p and q must be >= 1");
  if (pi.rows() != mu.size() || pi.cols() != nu.size())
    throw DomainError("gw_objective: coupling shape does not match the measures");
  pi.validate(mu.weights(), nu.weights());
  return gw_pair_sum(mu.atoms(), nu.atoms(), pi.entries(), p, q);
}

double s1(const DiscreteMeasure& mu_c, const DiscreteMeasure& nu_c) {
  require_centered(mu_c, "s1");
  require_centered(nu_c, "s1");
  const double m2x = second_moment(mu_c);
  const double m2y = second_moment(nu_c);
  const double m4x = mu_c.weights().dot(
      mu_c.atoms().rowwise().squaredNorm().array().square().matrix());
  const double m4y = nu_c.weights().dot(
      nu_c.atoms().rowwise().squaredNorm().array().square().matrix());
  const double sx = second_moment_matrix(mu_c).squaredNorm();
  const double sy = second_moment_matrix(nu_c).squaredNorm();
  return 2.0 * (m4x + m4y) + 2.0 * (m2x * m2x + m2y * m2y) + 4.0 * (sx + sy) -
         4.0 * m2x * m2y;
}

S2Result s2_alternating(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        const GwOptions& opts) {
  require_centered(mu, "s2_alternating");
  require_centered(nu, "s2_alternating");
  if (opts.random_starts < 0) throw DomainError("s2_alternating: negative start count");

  const double R = radius_budget(mu, nu);
  const Eigen::Index dx = mu.dim(), dy = nu.dim();
  const bool entropic =
      choose_method(mu.size(), nu.size(), opts.exact_only) == OtMethod::Entropic;

  std::vector<Mat> starts;
  starts.push_back(Mat::Zero(dx, dy));
  if (dx == dy)
    starts.push_back(0.5 * sorted_coupling_cross_moment(mu, nu));
  {
    Rng rng(SeedPath{opts.start_seed, static_cast<std::uint64_t>(mu.size()),
                     static_cast<std::uint64_t>(nu.size()),
                     static_cast<std::uint64_t>(dx * 131 + dy)});
    for (int s = 0; s < opts.random_starts; ++s) {
      Mat G(dx, dy);
      for (Eigen::Index i = 0; i < dx; ++i)
        for (Eigen::Index j = 0; j < dy; ++j) G(i, j) = rng.gaussian();
      Eigen::JacobiSVD<Mat> svd(G);
      const double op = svd.singularValues()(0);
      if (op > 0) G *= (R / 2.0) / op;
      starts.push_back(G);
      starts.push_back(-G);
    }
  }

  TransportSimplex simplex(mu.weights(), nu.weights());
  S2Result best;
  bool have = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    AlternatingRun run =
        alternate_from(mu, nu, starts[s], R, entropic, opts, &simplex);
    if (!have || run.value < best.value) {
      have = true;
      best.value = run.value;
      best.a = AlignMatrix{run.a, R};
      best.coupling = Coupling(mu.size(), nu.size(),
                               opts.keep_plan ? std::move(run.plan)
                                              : std::vector<PlanEntry>{});
      best.trace = std::move(run.trace);
      best.iterations = run.iterations;
      best.fixed_point_gap = run.fixed_point_gap;
      best.clip_active = run.clip_active;
      if (run.entropic) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "entropic(%.3g)", run.epsilon);
        best.method = buf;
      } else {
        best.method = "exact";
      }
    }
  }
  best.starts_used = static_cast<int>(starts.size());
  return best;
}

namespace {

// Deterministic ordering making estimate_gw(mu, nu) and estimate_gw(nu, mu)
// run the identical computation.
bool measure_precedes(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < a.dim(); ++j) {
      if (a.atoms()(i, j) < b.atoms()(i, j)) return true;
      if (a.atoms()(i, j) > b.atoms()(i, j)) return false;
    }
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.weights()(i) < b.weights()(i)) return true;
    if (a.weights()(i) > b.weights()(i)) return false;
  }
  return false;
}

}  // namespace

GwResult estimate_gw(const DiscreteMeasure& mu_raw, const DiscreteMeasure& nu_raw,
                     const GwOptions& opts) {
  DiscreteMeasure mu = center(mu_raw);
  DiscreteMeasure nu = center(nu_raw);
  const bool swapped = measure_precedes(nu, mu);
  if (swapped) std::swap(mu, nu);

  const double s1_val = s1(mu, nu);
  S2Result s2 = s2_alternating(mu, nu, opts);

  GwResult out;
  out.s1 = s1_val;
  out.s2 = s2.value;
  out.d_hat = s1_val + s2.value;
  out.trace = std::move(s2.trace);
  out.starts_used = s2.starts_used;
  out.iterations = s2.iterations;
  out.method = std::move(s2.method);
  if (swapped) {
    out.a_star = AlignMatrix{s2.a.entries.transpose(), s2.a.radius};
    std::vector<PlanEntry> t;
    t.reserve(s2.coupling.entries().size());
    for (const PlanEntry& e : s2.coupling.entries()) t.push_back({e.j, e.i, e.w});
    out.coupling = Coupling(s2.coupling.cols(), s2.coupling.rows(), std::move(t));
  } else {
    out.a_star = std::move(s2.a);
    out.coupling = std::move(s2.coupling);
  }
  return out;
}

OracleResult oracle_grid(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         int grid_points) {
  require_centered(mu, "oracle_grid");
  require_centered(nu, "oracle_grid");
  const Eigen::Index dx = mu.dim(), dy = nu.dim();
  const Eigen::Index dof = dx * dy;
  if (dof > 4) throw DomainError("oracle_grid: dx*dy must be <= 4");
  if (mu.size() > 32 || nu.size() > 32)
    throw DomainError("oracle_grid: atom counts must be <= 32");
  if (grid_points < 2) throw DomainError("oracle_grid: need at least 2 grid points");

  const double R = radius_budget(mu, nu);
  const double h = 2.0 * R / (grid_points - 1);
  const double lip = 64.0 * R * std::sqrt(static_cast<double>(dof)) +
                     16.0 * (second_moment(mu) + second_moment(nu)) *
                         std::sqrt(static_cast<double>(dof));

  TransportSimplex simplex(mu.weights(), nu.weights());
  const Mat& X = mu.atoms();
  const Mat& Y = nu.atoms();

  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.tolerance = lip * h;

  std::vector<int> idx(static_cast<std::size_t>(dof), 0);
  Mat A(dx, dy);
  while (true) {
    for (Eigen::Index k = 0; k < dof; ++k)
      A(k / dy, k % dy) = -R + h * idx[static_cast<std::size_t>(k)];
    const RowMat C = bilinear_cost(X, Y, A);
    const double J = 32.0 * A.squaredNorm() + simplex.solve(C).value;
    if (J < best.value) {
      best.value = J;
      best.a_best = A;
    }
    // odometer over the grid
    Eigen::Index k = 0;
    while (k < dof) {
      if (++idx[static_cast<std::size_t>(k)] < grid_points) break;
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == dof) break;
  }
  return best;
}

OrthogonalAlign procrustes_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const ProcrustesOptions& opts) {
  if (mu.dim() != nu.dim())
    throw DomainError("procrustes_w2: ambient dimensions must match");
  const Eigen::Index d = mu.dim();
  const Mat& X = mu.atoms();
  const Mat& Y = nu.atoms();

  std::vector<Mat> starts;
  starts.push_back(Mat::Identity(d, d));
  {
    // Principal-axis alignments over sign combinations (capped at 2^5).
    Eigen::SelfAdjointEigenSolver<Mat> ex(second_moment_matrix(center(mu)));
    Eigen::SelfAdjointEigenSolver<Mat> ey(second_moment_matrix(center(nu)));
    const Mat Ex = ex.eigenvectors(), Ey = ey.eigenvectors();
    const int combos = 1 << std::min<Eigen::Index>(d, 5);
    for (int mask = 0; mask < combos; ++mask) {
      Vec signs = Vec::Ones(d);
      for (Eigen::Index k = 0; k < std::min<Eigen::Index>(d, 5); ++k)
        if (mask & (1 << k)) signs(k) = -1.0;
      starts.push_back(Ey * signs.asDiagonal() * Ex.transpose());
    }
  }
  {
    Rng rng(SeedPath{opts.start_seed, static_cast<std::uint64_t>(mu.size()),
                     static_cast<std::uint64_t>(nu.size()), static_cast<std::uint64_t>(d)});
    for (int s = 0; s < opts.random_starts; ++s) {
      Mat G(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) G(i, j) = rng.gaussian();
      Eigen::HouseholderQR<Mat> qr(G);
      Mat Q = qr.householderQ();
      starts.push_back(Q);
    }
  }

  TransportSimplex simplex(mu.weights(), nu.weights());
  OrthogonalAlign best;
  best.value = std::numeric_limits<double>::infinity();
  for (const Mat& O0 : starts) {
    Mat O = O0;
    double prev = std::numeric_limits<double>::infinity();
    double value = prev;
    for (int it = 0; it < opts.max_iters; ++it) {
      const RowMat C = pairwise_power_cost(X * O.transpose(), Y, 2.0);
      auto sol = simplex.solve(C);
      value = sol.value;
      if (std::abs(prev - value) < opts.tol * (1.0 + std::abs(value))) break;
      prev = value;
      Mat M = Mat::Zero(d, d);  // integral of y x^T d pi
      for (const PlanEntry& e : sol.plan)
        M.noalias() += e.w * (Y.row(e.j).transpose() * X.row(e.i));
      Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
      O = svd.matrixU() * svd.matrixV().transpose();
    }
    if (value < best.value) {
      best.value = value;
      best.rotation = O;
    }
  }
  return best;
}

ComparisonReport comparison_bounds(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                   int grid_points) {
  if (mu.dim() != nu.dim())
    throw DomainError("comparison_bounds: equal ambient dimension required");
  const DiscreteMeasure muc = center(mu), nuc = center(nu);
  const OracleResult oracle = oracle_grid(muc, nuc, grid_points);
  const double d_certified = s1(muc, nuc) + oracle.value;

  ComparisonReport rep;
  rep.oracle_tolerance = oracle.tolerance;
  rep.gw22 = std::sqrt(std::max(0.0, d_certified));
  rep.w4 = wasserstein_cost(mu, nu, 4.0).distance;
  const double m4x =
      mu.weights().dot(mu.atoms().rowwise().squaredNorm().array().square().matrix());
  const double m4y =
      nu.weights().dot(nu.atoms().rowwise().squaredNorm().array().square().matrix());
  // q 2^{q+1-1/p+1/(pq)} (m_pq(mu)+m_pq(nu))^{(q-1)/(pq)} W_pq at p = q = 2.
  rep.upper_bound = 2.0 * std::pow(2.0, 2.75) * std::pow(m4x + m4y, 0.25) * rep.w4;
  rep.upper_holds = rep.gw22 <= rep.upper_bound + std::sqrt(oracle.tolerance) + 1e-9;

  const double lx = moments(mu, 2.0).lambda_min;
  const double ly = moments(nu, 2.0).lambda_min;
  const OrthogonalAlign oa = procrustes_w2(muc, nuc);
  rep.lower_proxy = std::pow(32.0 * (lx * lx + ly * ly), 0.25) *
                    std::sqrt(std::max(0.0, oa.value));
  return rep;
}

}  // namespace gwe
