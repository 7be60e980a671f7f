#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "randwidth/rng.hpp"

namespace randwidth {

enum class IsotropicFamily { gaussian, cube, laplace };

/// Product-form isotropic log-concave model: centered, identity covariance.
/// gaussian = standard normal per coordinate, cube = uniform on
/// [-sqrt(3), sqrt(3)], laplace = density (1/sqrt(2)) exp(-sqrt(2)|t|).
struct IsotropicModel {
  IsotropicFamily family = IsotropicFamily::gaussian;
  int n = 1;

  bool operator==(const IsotropicModel&) const = default;
};

enum class LawKind { gaussian, sphere, bp_ball, p_stable, fixed };

/// Distribution of the perturbation vector y in R^N.
struct PerturbationLaw {
  LawKind kind = LawKind::gaussian;
  double p = 2.0;                    // bp_ball: [1, inf]; p_stable: (1, 2)
  std::vector<double> fixed_vector;  // kind == fixed; empty means all-ones

  static PerturbationLaw make_gaussian();
  static PerturbationLaw make_sphere();
  static PerturbationLaw bp(double p);
  static PerturbationLaw stable(double p);
  static PerturbationLaw fixed(std::vector<double> values);

  /// Throws std::invalid_argument when the (kind, p) combination is illegal.
  void validate() const;

  bool operator==(const PerturbationLaw&) const = default;
};

/// N sample vectors in R^n, row-major, defining one polytope instance.
struct PointCloud {
  int n = 0;
  int N = 0;
  std::vector<double> points;  // N x n
  IsotropicModel model;
  RngState seed;

  const double* row(int i) const { return points.data() + static_cast<std::size_t>(i) * n; }
};

struct Perturbation {
  std::vector<double> values;
  PerturbationLaw law;
};

/// `count` i.i.d. rows from the model. Rows are drawn sequentially, so a
/// longer cloud from the same state extends a shorter one point for point.
PointCloud sample_isotropic(const IsotropicModel& model, int count, const RngState& rng);

/// One draw of y in R^N from the law. sphere draws are normalized to unit
/// Euclidean norm; bp_ball uses the g/(sum |g_i|^p + W)^(1/p) construction
/// with g_i of density exp(-|t|^p)/(2 Gamma(1+1/p)) and W exponential
/// (p = inf: i.i.d. uniform on [-1, 1]); p_stable uses the
/// angle/exponential transform matching the characteristic function
/// exp(-|x|^p).
Perturbation sample_perturbation(const PerturbationLaw& law, int N, const RngState& rng);

std::string to_string(IsotropicFamily f);
std::string to_string(LawKind k);
IsotropicFamily isotropic_family_from_string(const std::string& s);
LawKind law_kind_from_string(const std::string& s);

}  // namespace randwidth
