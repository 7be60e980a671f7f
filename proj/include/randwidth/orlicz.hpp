#pragma once

#include <optional>
#include <span>
#include <vector>

#include "randwidth/rng.hpp"
#include "randwidth/samplers.hpp"

namespace randwidth {

/// Convex nondecreasing M with M(0) = 0, in one of three forms:
///
///   power(p)          M(t) = t^p, p >= 1
///   gaussian_marginal M(s) = sqrt(2/pi) * integral_0^s exp(-1/(2 t^2)) dt,
///                     the E-max generating function of a standard normal
///                     marginal, evaluated by adaptive Simpson quadrature
///   empirical(a_1..a_m)
///                     M(s) = (1/m) sum_j |a_j| * max(0, s - 1/|a_j|),
///                     the plug-in of the double-integral definition for the
///                     empirical measure of the samples
///
/// Construction verifies shape on a 64-point grid (nonnegative first and
/// second differences) and rejects violations.
class OrliczFn {
 public:
  enum class Form { power, gaussian_marginal, empirical };

  static OrliczFn power(double p);
  static OrliczFn gaussian_marginal(double tolerance = 1e-9);
  static OrliczFn empirical(std::vector<double> samples);

  /// M(s); s < 0 is rejected.
  double operator()(double s) const;

  Form form() const { return form_; }
  double power_exponent() const { return p_; }
  double tolerance() const { return tol_; }
  int sample_count() const { return m_; }
  /// Largest |a_j| (empirical form), 0 when all samples are zero.
  double max_abs_sample() const;

 private:
  OrliczFn() = default;
  void check_shape() const;

  Form form_ = Form::power;
  double p_ = 1.0;
  double tol_ = 1e-9;
  int m_ = 0;                       // empirical: total sample count incl. zeros
  std::vector<double> abs_desc_;    // empirical: nonzero |a_j|, descending
  std::vector<double> prefix_sum_;  // prefix sums of abs_desc_
};

double orlicz_eval(const OrliczFn& M, double s);

/// Luxemburg norm ||x||_M = inf{rho > 0 : sum_i M(|x_i|/rho) <= 1},
/// solved by bracketing + bisection to relative tolerance 1e-10. The
/// returned rho is on the feasible side (sum <= 1). Throws on all-zero x
/// and when no bracket exists after 200 doublings/halvings (malformed M).
double luxemburg_norm(const OrliczFn& M, std::span<const double> x);

/// Empirical Orlicz function of the marginal <X, theta>: draws a_j =
/// <X_j, theta> (times an independent factor_law draw when given, yielding
/// the composite function used for perturbed maxima) and returns
/// OrliczFn::empirical(a).
OrliczFn empirical_orlicz(const IsotropicModel& model, std::span<const double> theta,
                          const std::optional<PerturbationLaw>& factor_law, int samples,
                          const RngState& rng);

/// One empirical test of E h_{K_{N,y}}(theta) ~ ||y||_{M_theta}.
struct EquivalenceRecord {
  std::vector<double> theta;
  Perturbation y;
  double lhs = 0.0;    // MC estimate of E_X max_i |y_i <X_i, theta>|
  double rhs = 0.0;    // ||y||_{M_hat_theta}
  double ratio = 0.0;  // lhs / rhs
};

/// lhs from R independent clouds, rhs from an m-sample empirical Orlicz
/// function; M is accepted for harness-uniform call shape but the fixed
/// direction needs no direction budget.
EquivalenceRecord equivalence_check(const IsotropicModel& model, int n, int N,
                                    const Perturbation& y, std::span<const double> theta, int R,
                                    int M, int samples, const RngState& rng);

}  // namespace randwidth
