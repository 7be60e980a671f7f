#include "randwidth/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace randwidth {

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double draw_coordinate(IsotropicFamily family, Rng& rng) {
  switch (family) {
    case IsotropicFamily::gaussian:
      return rng.gaussian();
    case IsotropicFamily::cube:
      return kSqrt3 * rng.uniform_sym();
    case IsotropicFamily::laplace: {
      const double e = rng.exponential();
      return (rng.uniform() < 0.5 ? -e : e) * kInvSqrt2;
    }
  }
  throw std::invalid_argument("sample_isotropic: unknown family");
}

}  // namespace

PerturbationLaw PerturbationLaw::make_gaussian() { return {LawKind::gaussian, 2.0, {}}; }
PerturbationLaw PerturbationLaw::make_sphere() { return {LawKind::sphere, 2.0, {}}; }
PerturbationLaw PerturbationLaw::bp(double p) { return {LawKind::bp_ball, p, {}}; }
PerturbationLaw PerturbationLaw::stable(double p) { return {LawKind::p_stable, p, {}}; }
PerturbationLaw PerturbationLaw::fixed(std::vector<double> values) {
  return {LawKind::fixed, 2.0, std::move(values)};
}

void PerturbationLaw::validate() const {
  switch (kind) {
    case LawKind::bp_ball:
      if (!(p >= 1.0)) throw std::invalid_argument("bp_ball law: p must be in [1, inf]");
      return;
    case LawKind::p_stable:
      if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("p_stable law: p must be in (1, 2)");
      return;
    default:
      return;
  }
}

PointCloud sample_isotropic(const IsotropicModel& model, int count, const RngState& rng) {
  if (model.n < 1) throw std::invalid_argument("sample_isotropic: n must be >= 1");
  if (count < 1) throw std::invalid_argument("sample_isotropic: count must be >= 1");
  PointCloud cloud;
  cloud.n = model.n;
  cloud.N = count;
  cloud.model = model;
  cloud.seed = rng;
  cloud.points.resize(static_cast<std::size_t>(count) * model.n);
  Rng gen(rng);
  for (auto& x : cloud.points) x = draw_coordinate(model.family, gen);
  return cloud;
}

Perturbation sample_perturbation(const PerturbationLaw& law, int N, const RngState& rng) {
  if (N < 1) throw std::invalid_argument("sample_perturbation: N must be >= 1");
  law.validate();
  Perturbation y;
  y.law = law;
  y.values.resize(N);
  Rng gen(rng);
  switch (law.kind) {
    case LawKind::gaussian:
      for (auto& v : y.values) v = gen.gaussian();
      break;
    case LawKind::sphere: {
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (auto& v : y.values) {
          v = gen.gaussian();
          norm2 += v * v;
        }
      } while (norm2 == 0.0);
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& v : y.values) v *= inv;
      break;
    }
    case LawKind::bp_ball: {
      if (std::isinf(law.p)) {
        for (auto& v : y.values) v = gen.uniform_sym();
        break;
      }
      // |g| = Gamma(1/p, 1)^(1/p) gives the density exp(-|t|^p) / (2 Gamma(1+1/p))
      double sum_p = 0.0;
      for (auto& v : y.values) {
        const double g = gen.gamma(1.0 / law.p);
        const double mag = std::pow(g, 1.0 / law.p);
        v = gen.uniform() < 0.5 ? -mag : mag;
        sum_p += g;  // g == mag^p exactly
      }
      const double w = gen.exponential();
      const double scale = 1.0 / std::pow(sum_p + w, 1.0 / law.p);
      for (auto& v : y.values) v *= scale;
      break;
    }
    case LawKind::p_stable:
      for (auto& v : y.values) v = gen.stable_symmetric(law.p);
      break;
    case LawKind::fixed:
      if (law.fixed_vector.empty()) {
        for (auto& v : y.values) v = 1.0;
      } else if (static_cast<int>(law.fixed_vector.size()) == N) {
        y.values = law.fixed_vector;
      } else {
        throw std::invalid_argument("sample_perturbation: fixed_vector length != N");
      }
      break;
  }
  return y;
}

std::string to_string(IsotropicFamily f) {
  switch (f) {
    case IsotropicFamily::gaussian: return "gaussian";
    case IsotropicFamily::cube: return "cube";
    case IsotropicFamily::laplace: return "laplace";
  }
  return "?";
}

std::string to_string(LawKind k) {
  switch (k) {
    case LawKind::gaussian: return "gaussian";
    case LawKind::sphere: return "sphere";
    case LawKind::bp_ball: return "bp_ball";
    case LawKind::p_stable: return "p_stable";
    case LawKind::fixed: return "fixed";
  }
  return "?";
}

IsotropicFamily isotropic_family_from_string(const std::string& s) {
  if (s == "gaussian") return IsotropicFamily::gaussian;
  if (s == "cube") return IsotropicFamily::cube;
  if (s == "laplace") return IsotropicFamily::laplace;
  throw std::invalid_argument("unknown isotropic family: " + s);
}

LawKind law_kind_from_string(const std::string& s) {
  if (s == "gaussian") return LawKind::gaussian;
  if (s == "sphere") return LawKind::sphere;
  if (s == "bp_ball") return LawKind::bp_ball;
  if (s == "p_stable") return LawKind::p_stable;
  if (s == "fixed") return LawKind::fixed;
  throw std::invalid_argument("unknown perturbation law: " + s);
}

}  // namespace randwidth
