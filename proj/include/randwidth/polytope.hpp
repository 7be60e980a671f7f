#pragma once

#include <span>
#include <vector>

#include "randwidth/rng.hpp"
#include "randwidth/samplers.hpp"

namespace randwidth {

/// M unit vectors in R^n, row-major. Rows are normalized Gaussian draws.
struct DirectionSet {
  int n = 0;
  int M = 0;
  std::vector<double> directions;  // M x n
  RngState seed;

  const double* row(int j) const { return directions.data() + static_cast<std::size_t>(j) * n; }
};

/// Monte Carlo estimate of a mean width (or of f(y) = E_X w(K_{N,y})).
struct WidthEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int M = 0;  // directions per replicate
  int R = 1;  // cloud replicates
  RngState seed;
};

DirectionSet sample_directions(int n, int M, const RngState& rng);

/// Support function of K_{N,y} = conv{+-y_i X_i}:
/// h(theta) = max_i |y_i <X_i, theta>|.
double support(const PointCloud& cloud, const Perturbation& y, std::span<const double> theta);

/// Average of the support function over M i.i.d. uniform directions;
/// std_error = sample std / sqrt(M).
WidthEstimate mean_width_mc(const PointCloud& cloud, const Perturbation& y, int M,
                            const RngState& rng);

/// f(y) = E_X w(K_{N,y}) estimated over R independent clouds, each with its
/// own fresh direction set; std_error comes from the R replicate means only.
/// Replicate r consumes substreams rng/(1,r) for the cloud and rng/(2,r) for
/// directions, so clouds extend point-for-point when N grows under a shared
/// state.
WidthEstimate f_estimate(const IsotropicModel& model, int N, const Perturbation& y, int R,
                         int M, const RngState& rng);

/// Plug-in estimate of h_{Z_p(X)}(theta) = (E |<X, theta>|^p)^(1/p).
double centroid_support(const IsotropicModel& model, double p, std::span<const double> theta,
                        int samples, const RngState& rng);

/// Sphere average of centroid_support over M directions.
WidthEstimate centroid_mean_width(const IsotropicModel& model, double p, int n, int M,
                                  int samples, const RngState& rng);

}  // namespace randwidth
