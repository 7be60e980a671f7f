#include "randwidth/lawcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "randwidth/parallel.hpp"

namespace randwidth {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// 8-block median of means, blocks by index order
double median_of_means(const std::vector<double>& v) {
  constexpr std::size_t kBlocks = 8;
  const std::size_t m = v.size();
  if (m < kBlocks) return median_of(v);
  std::vector<double> block_means(kBlocks, 0.0);
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const std::size_t lo = b * m / kBlocks;
    const std::size_t hi = (b + 1) * m / kBlocks;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    block_means[b] = s / static_cast<double>(hi - lo);
  }
  return median_of(std::move(block_means));
}

void require_grid(const std::vector<int>& N_grid, int n) {
  if (N_grid.empty()) throw std::invalid_argument("N_grid must be nonempty");
  if (N_grid.front() < n) throw std::invalid_argument("N_grid: min(N) must be >= n");
  for (std::size_t i = 1; i < N_grid.size(); ++i)
    if (N_grid[i] <= N_grid[i - 1])
      throw std::invalid_argument("N_grid must be strictly increasing");
}

}  // namespace

double rate_of(const PerturbationLaw& law, int N) {
  const double logN = std::log(static_cast<double>(N));
  switch (law.kind) {
    case LawKind::gaussian:
      return logN;
    case LawKind::sphere:
      return logN / std::sqrt(static_cast<double>(N));
    case LawKind::bp_ball: {
      const double inv_p = std::isinf(law.p) ? 0.0 : 1.0 / law.p;
      return std::pow(logN, inv_p + 0.5) / std::pow(static_cast<double>(N), inv_p);
    }
    case LawKind::p_stable:
      return std::pow(static_cast<double>(N), 1.0 / law.p);
    case LawKind::fixed:
      return 1.0;
  }
  return 1.0;
}

ScalingReport sweep_rate(const PerturbationLaw& law, const IsotropicModel& model, int n,
                         const std::vector<int>& N_grid, int R, int M, int y_draws,
                         const RngState& rng, unsigned workers) {
  law.validate();
  if (model.n != n) throw std::invalid_argument("sweep_rate: model dimension != n");
  require_grid(N_grid, n);
  if (y_draws < 1) throw std::invalid_argument("sweep_rate: y_draws must be >= 1");

  const std::size_t cells = N_grid.size() * static_cast<std::size_t>(y_draws);
  std::vector<double> f_hat(cells);
  parallel_for(cells, workers, [&](std::size_t c) {
    const std::size_t iN = c / y_draws;
    const std::size_t d = c % y_draws;
    const int N = N_grid[iN];
    const RngState draw_state = rng.substream(d);
    const Perturbation y = sample_perturbation(law, N, draw_state.substream(0));
    f_hat[c] = f_estimate(model, N, y, R, M, draw_state).value;
  });

  ScalingReport rep;
  rep.law = law;
  rep.model = model;
  rep.n = n;
  rep.N_grid = N_grid;
  const std::size_t g = N_grid.size();
  rep.raw.resize(g);
  rep.mom.resize(g);
  rep.mom_flag.resize(g);
  rep.estimate.resize(g);
  rep.std_error.resize(g);
  rep.rate.resize(g);
  rep.normalized.resize(g);
  for (std::size_t iN = 0; iN < g; ++iN) {
    std::vector<double> draws(f_hat.begin() + iN * y_draws, f_hat.begin() + (iN + 1) * y_draws);
    double mean = 0.0;
    for (double v : draws) mean += v;
    mean /= static_cast<double>(y_draws);
    double ss = 0.0;
    for (double v : draws) ss += (v - mean) * (v - mean);
    rep.raw[iN] = mean;
    rep.std_error[iN] =
        y_draws > 1 ? std::sqrt(ss / (y_draws - 1.0)) / std::sqrt(static_cast<double>(y_draws))
                    : 0.0;
    rep.mom[iN] = median_of_means(draws);
    rep.mom_flag[iN] = rep.mom[iN] != 0.0 &&
                       std::fabs(rep.raw[iN] - rep.mom[iN]) > 0.2 * std::fabs(rep.mom[iN]);
    rep.estimate[iN] = law.kind == LawKind::p_stable ? rep.mom[iN] : rep.raw[iN];
    rep.rate[iN] = rate_of(law, N_grid[iN]);
    rep.normalized[iN] = rep.estimate[iN] / rep.rate[iN];
  }
  std::vector<double> xs(g), ys(g);
  for (std::size_t i = 0; i < g; ++i) {
    xs[i] = static_cast<double>(N_grid[i]);
    ys[i] = rep.estimate[i];
  }
  if (g >= 3) {
    const auto [slope, intercept] = fit_rate(xs, ys);
    rep.fitted_exponent = slope;
    rep.fitted_intercept = intercept;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : rep.normalized) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.dispersion = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

TailCurve concentration_probe(const PerturbationLaw& law, const IsotropicModel& model, int n,
                              int N, int draws, const std::vector<double>& t_grid, int R, int M,
                              const RngState& rng, unsigned workers) {
  law.validate();
  if (model.n != n) throw std::invalid_argument("concentration_probe: model dimension != n");
  if (draws < 100) throw std::invalid_argument("concentration_probe: draws must be >= 100");
  if (t_grid.empty()) throw std::invalid_argument("concentration_probe: empty t_grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw std::invalid_argument("concentration_probe: t values must be > 0");
    if (i > 0 && t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("concentration_probe: t_grid must be strictly increasing");
  }
  if (law.kind == LawKind::p_stable && !(law.p > 1.6 && law.p < 1.9))
    throw std::invalid_argument(
        "concentration_probe: p_stable probes are restricted to p in (1.6, 1.9)");
  if (law.kind == LawKind::fixed)
    throw std::invalid_argument("concentration_probe: law must be random");

  std::vector<double> f_hat(draws);
  parallel_for(draws, workers, [&](std::size_t d) {
    const RngState draw_state = rng.substream(d);
    const Perturbation y = sample_perturbation(law, N, draw_state.substream(0));
    f_hat[d] = f_estimate(model, N, y, R, M, draw_state).value;
  });

  TailCurve curve;
  curve.t_grid = t_grid;
  curve.center = median_of(f_hat);
  curve.empirical_tail.resize(t_grid.size());
  std::vector<double> dev(draws);
  for (int d = 0; d < draws; ++d) dev[d] = std::fabs(f_hat[d] / curve.center - 1.0);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    int count = 0;
    for (double v : dev) count += v > t_grid[i] ? 1 : 0;
    curve.empirical_tail[i] = static_cast<double>(count) / draws;
  }

  const double logN = std::log(static_cast<double>(N));
  if (law.kind == LawKind::p_stable) {
    const double m = 1.0 / (2.0 - law.p);
    curve.stable_threshold =
        std::pow(4.0 * m * std::log(m) * std::log(1.0 + 2.0 * m * std::log(m)), 1.0 / law.p);
    // tail ~ C / t^p on admissible t
    double acc = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      if (t_grid[i] < curve.stable_threshold) continue;
      if (!(curve.empirical_tail[i] > 0.0)) continue;
      acc += std::log(curve.empirical_tail[i]) + law.p * std::log(t_grid[i]);
      ++used;
    }
    curve.fitted_c = used > 0 ? std::exp(acc / used) : 0.0;
  } else {
    // tail ~ exp(-c t^2 log N)
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double tail = curve.empirical_tail[i];
      if (!(tail > 0.0) || !(tail < 1.0)) continue;
      const double x = t_grid[i] * t_grid[i] * logN;
      num += -std::log(tail) * x;
      den += x * x;
    }
    curve.fitted_c = den > 0.0 ? num / den : 0.0;
  }
  return curve;
}

double lipschitz_probe(const IsotropicModel& model, int n, int N, int pairs, int R, int M,
                       const RngState& rng, unsigned workers) {
  if (model.n != n) throw std::invalid_argument("lipschitz_probe: model dimension != n");
  if (pairs < 10) throw std::invalid_argument("lipschitz_probe: pairs must be >= 10");
  const double sqrt_logN = std::sqrt(std::log(static_cast<double>(N)));
  std::vector<double> ratio(pairs, 0.0);
  parallel_for(pairs, workers, [&](std::size_t k) {
    const RngState pair_state = rng.substream(k);
    const auto law = PerturbationLaw::make_gaussian();
    Perturbation y1 = sample_perturbation(law, N, pair_state.substream(10));
    Perturbation y2 = sample_perturbation(law, N, pair_state.substream(11));
    if (k % 2 == 1) {
      // spike pairs probe the steepest direction of the max functional;
      // diffuse gaussian pairs alone dilute the quotient by ~1/sqrt(N)
      Rng gen(pair_state.substream(12));
      const int i = static_cast<int>(gen.next_u64() % static_cast<std::uint64_t>(N));
      const double s = gen.gaussian();
      y1.values.assign(N, 0.0);
      y2.values.assign(N, 0.0);
      y2.values[i] = s;
    }
    double dist2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d = y1.values[i] - y2.values[i];
      dist2 += d * d;
    }
    if (dist2 == 0.0) return;  // ratio slot stays 0
    // shared state isolates the y difference from MC noise
    const double f1 = f_estimate(model, N, y1, R, M, pair_state).value;
    const double f2 = f_estimate(model, N, y2, R, M, pair_state).value;
    ratio[k] = std::fabs(f1 - f2) / (std::sqrt(dist2) * sqrt_logN);
  });
  return *std::max_element(ratio.begin(), ratio.end());
}

std::pair<double, double> tail_probe(const IsotropicModel& model, int n, int N, double alpha,
                                     int samples, const RngState& rng) {
  if (model.n != n) throw std::invalid_argument("tail_probe: model dimension != n");
  if (!(alpha > 0.0)) throw std::invalid_argument("tail_probe: alpha must be > 0");
  if (samples < 100) throw std::invalid_argument("tail_probe: samples must be >= 100");
  const double logN = std::log(static_cast<double>(N));
  const double threshold = alpha * std::sqrt(logN);
  const DirectionSet dir = sample_directions(n, 1, rng.substream(0));
  const PointCloud batch = sample_isotropic(model, samples, rng.substream(1));
  int count = 0;
  for (int j = 0; j < samples; ++j) {
    double s = 0.0;
    const double* row = batch.row(j);
    for (int k = 0; k < n; ++k) s += row[k] * dir.directions[k];
    if (std::fabs(s) >= threshold) ++count;
  }
  const double empirical = static_cast<double>(count) / samples;
  if (empirical < 10.0 / samples)
    throw std::invalid_argument(
        "tail_probe: alpha^2 log N beyond the sample-resolvable range (tail < 10/samples)");
  const double reference = 1.0 / (std::pow(static_cast<double>(N), alpha * alpha / 2.0) *
                                  std::sqrt(logN));
  return {empirical, reference};
}

std::vector<double> inclusion_probe_trials(const IsotropicModel& model, int n, int N, int trials,
                                           int M, int samples, const RngState& rng,
                                           unsigned workers) {
  if (model.n != n) throw std::invalid_argument("inclusion_probe: model dimension != n");
  if (!(static_cast<long long>(N) > static_cast<long long>(n) * n))
    throw std::invalid_argument("inclusion_probe: regime requires N > n^2");
  if (trials < 1) throw std::invalid_argument("inclusion_probe: trials must be >= 1");
  const double logN = std::log(static_cast<double>(N));
  const double sqrt_logN = std::sqrt(logN);
  std::vector<double> trial_min(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const RngState ts = rng.substream(t);
    const PointCloud cloud = sample_isotropic(model, N, ts.substream(0));
    const Perturbation g = sample_perturbation(PerturbationLaw::make_gaussian(), N, ts.substream(1));
    const DirectionSet dirs = sample_directions(n, M, ts.substream(2));
    const RngState z_state = ts.substream(3);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < M; ++j) {
      const std::span<const double> theta(dirs.row(j), static_cast<std::size_t>(n));
      const double h_poly = support(cloud, g, theta);
      const double h_z = centroid_support(model, logN, theta, samples, z_state);
      best = std::min(best, h_poly / (sqrt_logN * h_z));
    }
    trial_min[t] = best;
  });
  return trial_min;
}

double inclusion_probe(const IsotropicModel& model, int n, int N, int trials, int M, int samples,
                       const RngState& rng, unsigned workers) {
  const auto mins = inclusion_probe_trials(model, n, N, trials, M, samples, rng, workers);
  return *std::min_element(mins.begin(), mins.end());
}

LowerBoundReport arbitrary_lower_bound(std::span<const double> y, int n, double c1, double c2,
                                       bool strict) {
  if (n < 1) throw std::invalid_argument("arbitrary_lower_bound: n must be >= 1");
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw std::invalid_argument("arbitrary_lower_bound: c1 and c2 must be > 0");
  if (y.empty()) throw std::invalid_argument("arbitrary_lower_bound: empty y");

  LowerBoundReport rep;
  rep.c1 = c1;
  rep.c2 = c2;
  rep.y_sorted.assign(y.begin(), y.end());
  for (auto& v : rep.y_sorted) v = std::fabs(v);
  std::sort(rep.y_sorted.begin(), rep.y_sorted.end(), std::greater<>());
  if (!(rep.y_sorted.front() > 0.0))
    throw std::invalid_argument("arbitrary_lower_bound: y has no nonzero entry");

  const int k_max = std::min<int>(n, static_cast<int>(rep.y_sorted.size()));
  const double n_pow = std::pow(static_cast<double>(n), c1);
  rep.harmonic_term.assign(n, std::numeric_limits<double>::infinity());
  double inv_sq_sum = 0.0;
  double best = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double yk = rep.y_sorted[k - 1];
    inv_sq_sum += yk > 0.0 ? 1.0 / (yk * yk) : std::numeric_limits<double>::infinity();
    const double harmonic = std::sqrt(inv_sq_sum / k);
    rep.harmonic_term[k - 1] = harmonic;
    if (!(yk > 0.0)) continue;
    const double admissibility = 1.0 / (yk * harmonic);
    if (admissibility > n_pow) continue;
    if (strict && rep.y_sorted.front() / yk > n_pow) continue;
    rep.I_y.push_back(k);
    const double term = std::sqrt(std::log(static_cast<double>(k) + 1.0)) / harmonic;
    if (term > best) {
      best = term;
      rep.k_star = k;
    }
  }
  rep.bound_value = rep.I_y.empty() ? 0.0 : c2 * best;
  return rep;
}

std::pair<double, double> bound_vs_estimate(const IsotropicModel& model,
                                            std::span<const double> y, int n, int N, double c1,
                                            int R, int M, const RngState& rng) {
  if (static_cast<int>(y.size()) != N)
    throw std::invalid_argument("bound_vs_estimate: y length != N");
  const LowerBoundReport lb = arbitrary_lower_bound(y, n, c1, 1.0);
  if (!(lb.bound_value > 0.0))
    throw std::invalid_argument("bound_vs_estimate: sup-term is zero (empty I(y))");
  Perturbation pert;
  pert.values.assign(y.begin(), y.end());
  pert.law = PerturbationLaw::fixed(pert.values);
  const double f_hat = f_estimate(model, N, pert, R, M, rng).value;
  return {f_hat, f_hat / lb.bound_value};
}

std::pair<double, double> fit_rate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_rate: length mismatch");
  if (xs.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  const std::size_t m = xs.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("fit_rate: inputs must be positive");
    sx += std::log(xs[i]);
    sy += std::log(ys[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: xs are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace randwidth
