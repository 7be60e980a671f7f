#include "randwidth/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randwidth/polytope.hpp"

namespace randwidth {

namespace {

double gm_integrand(double t) { return t > 0.0 ? std::exp(-1.0 / (2.0 * t * t)) : 0.0; }

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = gm_integrand(lm);
  const double frm = gm_integrand(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double gaussian_marginal_integral(double s, double tol) {
  if (s <= 0.0) return 0.0;
  const double fa = gm_integrand(0.0);
  const double fm = gm_integrand(0.5 * s);
  const double fb = gm_integrand(s);
  const double whole = simpson(0.0, s, fa, fm, fb);
  return adaptive_simpson(0.0, s, fa, fm, fb, whole, tol, 48);
}

const double kSqrt2OverPi = std::sqrt(2.0 / M_PI);

}  // namespace

OrliczFn OrliczFn::power(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("OrliczFn::power: p must be >= 1");
  OrliczFn f;
  f.form_ = Form::power;
  f.p_ = p;
  f.check_shape();
  return f;
}

OrliczFn OrliczFn::gaussian_marginal(double tolerance) {
  if (!(tolerance > 0.0))
    throw std::invalid_argument("OrliczFn::gaussian_marginal: tolerance must be positive");
  OrliczFn f;
  f.form_ = Form::gaussian_marginal;
  f.tol_ = tolerance;
  f.check_shape();
  return f;
}

OrliczFn OrliczFn::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("OrliczFn::empirical: no samples");
  OrliczFn f;
  f.form_ = Form::empirical;
  f.m_ = static_cast<int>(samples.size());
  f.abs_desc_.reserve(samples.size());
  for (double a : samples) {
    const double v = std::fabs(a);
    if (v > 0.0 && std::isfinite(v)) f.abs_desc_.push_back(v);
    if (!std::isfinite(v)) throw std::invalid_argument("OrliczFn::empirical: non-finite sample");
  }
  std::sort(f.abs_desc_.begin(), f.abs_desc_.end(), std::greater<>());
  f.prefix_sum_.resize(f.abs_desc_.size());
  double run = 0.0;
  for (std::size_t j = 0; j < f.abs_desc_.size(); ++j) {
    run += f.abs_desc_[j];
    f.prefix_sum_[j] = run;
  }
  f.check_shape();
  return f;
}

double OrliczFn::max_abs_sample() const { return abs_desc_.empty() ? 0.0 : abs_desc_.front(); }

double OrliczFn::operator()(double s) const {
  if (s < 0.0) throw std::invalid_argument("orlicz_eval: s must be >= 0");
  switch (form_) {
    case Form::power:
      return std::pow(s, p_);
    case Form::gaussian_marginal:
      return kSqrt2OverPi * gaussian_marginal_integral(s, tol_);
    case Form::empirical: {
      if (abs_desc_.empty() || s == 0.0) return 0.0;
      // terms with |a_j| * s > 1 are exactly the positive ones
      std::size_t lo = 0, hi = abs_desc_.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (abs_desc_[mid] * s > 1.0)
          lo = mid + 1;
        else
          hi = mid;
      }
      if (lo == 0) return 0.0;
      const double value = (s * prefix_sum_[lo - 1] - static_cast<double>(lo)) / m_;
      return value > 0.0 ? value : 0.0;
    }
  }
  return 0.0;
}

void OrliczFn::check_shape() const {
  // 64-point grid on [0, 4 * scale]: nonnegative first and second differences
  const double scale =
      form_ == Form::empirical && max_abs_sample() > 0.0 ? 1.0 / max_abs_sample() : 1.0;
  constexpr int kGrid = 64;
  std::vector<double> vals(kGrid);
  for (int i = 0; i < kGrid; ++i)
    vals[i] = (*this)(4.0 * scale * static_cast<double>(i) / (kGrid - 1));
  if (vals[0] != 0.0) throw std::invalid_argument("OrliczFn: M(0) != 0");
  const double slack = 1e-12;
  for (int i = 0; i + 1 < kGrid; ++i)
    if (vals[i + 1] - vals[i] < -slack)
      throw std::invalid_argument("OrliczFn: not nondecreasing on the check grid");
  for (int i = 0; i + 2 < kGrid; ++i)
    if ((vals[i + 2] - vals[i + 1]) - (vals[i + 1] - vals[i]) < -slack)
      throw std::invalid_argument("OrliczFn: not convex on the check grid");
}

double orlicz_eval(const OrliczFn& M, double s) { return M(s); }

double luxemburg_norm(const OrliczFn& M, std::span<const double> x) {
  double max_abs = 0.0;
  for (double v : x) max_abs = std::max(max_abs, std::fabs(v));
  if (!(max_abs > 0.0)) throw std::invalid_argument("luxemburg_norm: x must have a nonzero entry");

  const auto sum_at = [&](double rho) {
    double s = 0.0;
    for (double v : x) s += M(std::fabs(v) / rho);
    return s;
  };

  const double sample_scale = M.form() == OrliczFn::Form::empirical ? M.max_abs_sample() : 1.0;
  double hi = max_abs * (sample_scale > 0.0 ? sample_scale : 1.0);
  int steps = 0;
  while (sum_at(hi) > 1.0) {
    hi *= 2.0;
    if (++steps > 200) throw std::runtime_error("luxemburg_norm: no upper bracket (malformed M)");
  }
  double lo = 0.5 * hi;
  steps = 0;
  while (sum_at(lo) <= 1.0) {
    lo *= 0.5;
    if (++steps > 200) throw std::runtime_error("luxemburg_norm: no lower bracket (malformed M)");
  }

  for (int it = 0; it < 400 && (hi - lo) > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sum_at(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

OrliczFn empirical_orlicz(const IsotropicModel& model, std::span<const double> theta,
                          const std::optional<PerturbationLaw>& factor_law, int samples,
                          const RngState& rng) {
  if (samples < 1000) throw std::invalid_argument("empirical_orlicz: samples must be >= 1000");
  if (static_cast<int>(theta.size()) != model.n)
    throw std::invalid_argument("empirical_orlicz: theta dimension != n");
  const PointCloud batch = sample_isotropic(model, samples, rng.substream(0));
  std::vector<double> a(samples);
  for (int j = 0; j < samples; ++j) {
    double s = 0.0;
    const double* row = batch.row(j);
    for (int k = 0; k < model.n; ++k) s += row[k] * theta[k];
    a[j] = s;
  }
  if (factor_law) {
    const Perturbation xi = sample_perturbation(*factor_law, samples, rng.substream(1));
    for (int j = 0; j < samples; ++j) a[j] *= xi.values[j];
  }
  return OrliczFn::empirical(std::move(a));
}

EquivalenceRecord equivalence_check(const IsotropicModel& model, int n, int N,
                                    const Perturbation& y, std::span<const double> theta, int R,
                                    int M, int samples, const RngState& rng) {
  (void)M;
  if (model.n != n) throw std::invalid_argument("equivalence_check: model dimension != n");
  if (static_cast<int>(y.values.size()) != N)
    throw std::invalid_argument("equivalence_check: perturbation length != N");
  if (R < 2) throw std::invalid_argument("equivalence_check: R must be >= 2");
  bool nonzero = false;
  for (double v : y.values) nonzero = nonzero || v != 0.0;
  if (!nonzero) throw std::invalid_argument("equivalence_check: y must be nonzero");

  const RngState cloud_root = rng.substream(0);
  double lhs = 0.0;
  for (int r = 0; r < R; ++r) {
    const PointCloud cloud = sample_isotropic(model, N, cloud_root.substream(r));
    lhs += support(cloud, y, theta);
  }
  lhs /= R;

  const OrliczFn m_theta = empirical_orlicz(model, theta, std::nullopt, samples, rng.substream(1));
  const double rhs = luxemburg_norm(m_theta, y.values);

  EquivalenceRecord rec;
  rec.theta.assign(theta.begin(), theta.end());
  rec.y = y;
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.ratio = lhs / rhs;
  return rec;
}

}  // namespace randwidth
