#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "randwidth/polytope.hpp"
#include "randwidth/rng.hpp"
#include "randwidth/samplers.hpp"

namespace randwidth {

/// Theoretical rate the estimate is normalized by:
/// gaussian log N, sphere log N / sqrt(N), bp_ball
/// (log N)^(1/p + 1/2) / N^(1/p), p_stable N^(1/p), fixed 1.
/// Natural logarithms throughout.
double rate_of(const PerturbationLaw& law, int N);

/// Normalized estimates of E_y f(y) across an N grid plus the fitted
/// log-log exponent. `raw` is the plain mean over y draws, `mom` the
/// 8-block median of means; `estimate` (feeding normalized/fit) is mom for
/// the heavy-tailed p_stable law and raw otherwise. mom_flag marks N cells
/// where the two disagree by more than 20%.
struct ScalingReport {
  PerturbationLaw law;
  IsotropicModel model;
  int n = 0;
  std::vector<int> N_grid;
  std::vector<double> raw;
  std::vector<double> mom;
  std::vector<bool> mom_flag;
  std::vector<double> estimate;
  std::vector<double> std_error;  // between-draw standard error of raw
  std::vector<double> rate;
  std::vector<double> normalized;
  double fitted_exponent = 0.0;
  double fitted_intercept = 0.0;
  double dispersion = 0.0;  // max/min of normalized
};

/// Empirical deviation tail of f(y) about the median of the draws, with a
/// least-squares fit of the law's bound shape: exp(-c t^2 log N) for
/// gaussian/sphere/bp_ball, C t^-p for p_stable (only t at or above the
/// stable threshold enter that fit).
struct TailCurve {
  std::vector<double> t_grid;
  std::vector<double> empirical_tail;
  double center = 0.0;
  double fitted_c = 0.0;
  double stable_threshold = 0.0;  // 0 for non-stable laws
};

/// Decreasing-rearrangement lower bound report for arbitrary y.
struct LowerBoundReport {
  std::vector<double> y_sorted;        // |y| in decreasing order
  std::vector<int> I_y;                // admissible k in {1..n}
  int k_star = 0;                      // 0 when I_y is empty
  double bound_value = 0.0;            // c2 * sup_k sqrt(log(k+1)) / harmonic_term(k)
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<double> harmonic_term;   // per k = 1..n; inf when a zero enters the sum
};

/// Mean of f_estimate over y_draws fresh perturbations per N. Substreams
/// are keyed by draw and replicate, never by N, so a sweep at fixed seed
/// extends the same clouds as N grows (exact hull monotonicity for fixed
/// perturbations).
ScalingReport sweep_rate(const PerturbationLaw& law, const IsotropicModel& model, int n,
                         const std::vector<int>& N_grid, int R, int M, int y_draws,
                         const RngState& rng, unsigned workers = 1);

/// Tail curve of f(y) over `draws` independent perturbations.
TailCurve concentration_probe(const PerturbationLaw& law, const IsotropicModel& model, int n,
                              int N, int draws, const std::vector<double>& t_grid, int R, int M,
                              const RngState& rng, unsigned workers = 1);

/// Normalized Lipschitz constant: max over random pairs (y1, y2) of
/// |f(y1) - f(y2)| / (|y1 - y2| sqrt(log N)), with cloud seeds shared
/// across each pair. Pairs alternate between diffuse gaussian vectors and
/// single-coordinate spikes (0, s e_i); the spikes probe the steepest
/// direction of the max functional.
double lipschitz_probe(const IsotropicModel& model, int n, int N, int pairs, int R, int M,
                       const RngState& rng, unsigned workers = 1);

/// Marginal tail P(|<X, theta>| >= alpha sqrt(log N)) at a random uniform
/// direction, paired with the reference shape 1 / (N^(alpha^2/2) sqrt(log N)).
std::pair<double, double> tail_probe(const IsotropicModel& model, int n, int N, double alpha,
                                     int samples, const RngState& rng);

/// Per-trial min over directions of h_{K_{N,G}}(theta) /
/// (sqrt(log N) * h_hat_{Z_log N(X)}(theta)); requires N > n^2.
std::vector<double> inclusion_probe_trials(const IsotropicModel& model, int n, int N, int trials,
                                           int M, int samples, const RngState& rng,
                                           unsigned workers = 1);

/// Minimum of inclusion_probe_trials over all trials (the fitted c).
double inclusion_probe(const IsotropicModel& model, int n, int N, int trials, int M, int samples,
                       const RngState& rng, unsigned workers = 1);

/// Deterministic evaluation of the rearrangement lower bound. k in {1..n}
/// is admissible when y_k* != 0 and 1/(|y_k*| harmonic_term(k)) <= n^c1;
/// strict mode additionally requires |y_1*|/|y_k*| <= n^c1.
LowerBoundReport arbitrary_lower_bound(std::span<const double> y, int n, double c1, double c2,
                                       bool strict = false);

/// f_hat(y) together with fitted c2 = f_hat / sup-term (sup-term computed
/// at c2 = 1).
std::pair<double, double> bound_vs_estimate(const IsotropicModel& model,
                                            std::span<const double> y, int n, int N, double c1,
                                            int R, int M, const RngState& rng);

/// OLS of ln y on ln x; returns (slope, intercept).
std::pair<double, double> fit_rate(std::span<const double> xs, std::span<const double> ys);

}  // namespace randwidth
