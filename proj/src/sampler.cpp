#include "gwe/sampler.hpp"

#include <cmath>

#include "gwe/packing.hpp"

namespace gwe {

std::string family_name(Family f) {
  switch (f) {
    case Family::UniformBall: return "uniform-ball";
    case Family::UniformCube: return "uniform-cube";
    case Family::Gaussian: return "gaussian";
    case Family::TwoPoint: return "two-point";
    case Family::ParetoFourth: return "pareto-fourth";
    case Family::FiniteSupport: return "finite-support";
    case Family::PackingUniform: return "packing-uniform";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& s) {
  if (s == "uniform-ball") return Family::UniformBall;
  if (s == "uniform-cube") return Family::UniformCube;
  if (s == "gaussian") return Family::Gaussian;
  if (s == "two-point") return Family::TwoPoint;
  if (s == "pareto-fourth") return Family::ParetoFourth;
  if (s == "finite-support") return Family::FiniteSupport;
  if (s == "packing-uniform") return Family::PackingUniform;
  return std::nullopt;
}

void SamplerSpec::validate() const {
  if (dim < 1) throw ConfigError("sampler: dim must be >= 1");
  switch (family) {
    case Family::UniformBall:
      if (!(radius > 0)) throw ConfigError("sampler uniform-ball: radius must be > 0");
      break;
    case Family::UniformCube:
      if (!(side > 0)) throw ConfigError("sampler uniform-cube: side must be > 0");
      break;
    case Family::Gaussian:
      if (cov.size() != 0) {
        if (cov.rows() != dim || cov.cols() != dim)
          throw ConfigError("sampler gaussian: cov must be dim x dim");
        if (!cov.isApprox(cov.transpose(), 1e-12))
          throw ConfigError("sampler gaussian: cov must be symmetric");
        Eigen::LLT<Mat> llt(cov);
        if (llt.info() != Eigen::Success)
          throw ConfigError("sampler gaussian: cov must be positive definite");
      }
      break;
    case Family::TwoPoint:
      if (!(eps >= 0.0 && eps < 0.5))
        throw ConfigError("sampler two-point: eps must lie in [0, 1/2)");
      if (dim != 1) throw ConfigError("sampler two-point: dim must be 1");
      break;
    case Family::ParetoFourth:
      if (!(alpha > 1.0 && alpha < 2.0))
        throw ConfigError("sampler pareto-fourth: alpha must lie in (1,2)");
      if (dim != 1) throw ConfigError("sampler pareto-fourth: dim must be 1");
      break;
    case Family::FiniteSupport:
      if (fs_atoms.rows() < 1) throw ConfigError("sampler finite-support: atoms required");
      if (fs_atoms.cols() != dim)
        throw ConfigError("sampler finite-support: atoms dimension must equal dim");
      if (fs_weights.size() != fs_atoms.rows())
        throw ConfigError("sampler finite-support: weights must match atoms");
      if ((fs_weights.array() < 0).any() || std::abs(fs_weights.sum() - 1.0) > 1e-12)
        throw ConfigError("sampler finite-support: weights must be a simplex vector");
      break;
    case Family::PackingUniform:
      if (k < dim + 1) throw ConfigError("sampler packing-uniform: k must be >= dim+1");
      break;
  }
}

DiscreteMeasure two_point_measure(double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) throw ConfigError("two-point: eps must lie in [0, 1/2)");
  Mat atoms(2, 1);
  atoms << -1.0, 1.0;
  Vec w(2);
  w << 0.5 + eps, 0.5 - eps;
  return DiscreteMeasure(std::move(atoms), std::move(w));
}

namespace {

Vec gaussian_vec(Rng& rng, int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.gaussian();
  return v;
}

Vec uniform_ball_point(Rng& rng, int d, double radius) {
  // Direction from a normalized gaussian, radius via u^{1/d}.
  Vec g = gaussian_vec(rng, d);
  double norm = g.norm();
  while (norm == 0.0) {  // vanishing probability; redraw for safety
    g = gaussian_vec(rng, d);
    norm = g.norm();
  }
  const double r = radius * std::pow(rng.uniform_pos(), 1.0 / static_cast<double>(d));
  return (r / norm) * g;
}

// Draw an index from a cumulative weight table by inverse CDF.
Eigen::Index draw_index(Rng& rng, const Vec& cumw) {
  const double u = rng.uniform();
  Eigen::Index lo = 0, hi = cumw.size() - 1;
  while (lo < hi) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (u < cumw(mid)) hi = mid; else lo = mid + 1;
  }
  return lo;
}

}  // namespace

DiscreteMeasure sample(const SamplerSpec& spec, Eigen::Index n, const SeedPath& sp) {
  spec.validate();
  if (n < 1) throw DomainError("sample: n must be >= 1");
  Rng rng(sp);
  Mat atoms(n, spec.dim);

  switch (spec.family) {
    case Family::UniformBall:
      for (Eigen::Index i = 0; i < n; ++i)
        atoms.row(i) = uniform_ball_point(rng, spec.dim, spec.radius).transpose();
      break;
    case Family::UniformCube:
      for (Eigen::Index i = 0; i < n; ++i)
        for (int j = 0; j < spec.dim; ++j)
          atoms(i, j) = rng.uniform(-spec.side / 2.0, spec.side / 2.0);
      break;
    case Family::Gaussian: {
      Mat chol;
      if (spec.cov.size() != 0) chol = Eigen::LLT<Mat>(spec.cov).matrixL();
      for (Eigen::Index i = 0; i < n; ++i) {
        Vec g = gaussian_vec(rng, spec.dim);
        atoms.row(i) = (spec.cov.size() != 0 ? Vec(chol * g) : g).transpose();
      }
      break;
    }
    case Family::TwoPoint:
      for (Eigen::Index i = 0; i < n; ++i)
        atoms(i, 0) = (rng.uniform() < 0.5 + spec.eps) ? -1.0 : 1.0;
      break;
    case Family::ParetoFourth:
      // |X| = U^{-1/(4 alpha)} with an independent equiprobable sign; this
      // inverts the tail P(|X| >= x) = x^{-4 alpha}, x >= 1.
      for (Eigen::Index i = 0; i < n; ++i) {
        const double mag = std::pow(rng.uniform_pos(), -1.0 / (4.0 * spec.alpha));
        const bool neg = (rng.next_u64() & 1ULL) != 0;
        atoms(i, 0) = neg ? -mag : mag;
      }
      break;
    case Family::FiniteSupport: {
      Vec cumw(spec.fs_weights.size());
      double acc = 0;
      for (Eigen::Index j = 0; j < spec.fs_weights.size(); ++j) {
        acc += spec.fs_weights(j);
        cumw(j) = acc;
      }
      cumw(cumw.size() - 1) = 1.0;
      for (Eigen::Index i = 0; i < n; ++i)
        atoms.row(i) = spec.fs_atoms.row(draw_index(rng, cumw));
      break;
    }
    case Family::PackingUniform: {
      SeedPath psp = sp;
      psp.stream ^= 0x7061636bULL;  // decouple the construction stream
      const PackingResult pack = packing_construction(spec.k, spec.dim, psp);
      for (Eigen::Index i = 0; i < n; ++i)
        atoms.row(i) = pack.measure.atoms().row(
            static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(spec.k))));
      break;
    }
  }
  return DiscreteMeasure::uniform(std::move(atoms));
}

DiscreteMeasure population(const SamplerSpec& spec, const SeedPath& sp) {
  spec.validate();
  switch (spec.family) {
    case Family::TwoPoint:
      return two_point_measure(spec.eps);
    case Family::FiniteSupport:
      return DiscreteMeasure(spec.fs_atoms, spec.fs_weights);
    case Family::PackingUniform: {
      SeedPath psp = sp;
      psp.stream ^= 0x7061636bULL;
      return packing_construction(spec.k, spec.dim, psp).measure;
    }
    default:
      throw DomainError("population: " + family_name(spec.family) +
                        " has no finite population support");
  }
}

}  // namespace gwe
