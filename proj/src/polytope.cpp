#include "randwidth/polytope.hpp"

#include <cmath>
#include <stdexcept>

namespace randwidth {

namespace {

void fill_unit_gaussian(std::span<double> v, Rng& gen) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& x : v) {
      x = gen.gaussian();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= inv;
}

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  const auto m = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= m;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, v.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0};
}

}  // namespace

DirectionSet sample_directions(int n, int M, const RngState& rng) {
  if (n < 1 || M < 1) throw std::invalid_argument("sample_directions: n and M must be >= 1");
  DirectionSet d;
  d.n = n;
  d.M = M;
  d.seed = rng;
  d.directions.resize(static_cast<std::size_t>(M) * n);
  Rng gen(rng);
  for (int j = 0; j < M; ++j)
    fill_unit_gaussian(std::span<double>(d.directions.data() + static_cast<std::size_t>(j) * n,
                                         static_cast<std::size_t>(n)),
                       gen);
  return d;
}

double support(const PointCloud& cloud, const Perturbation& y, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != cloud.n)
    throw std::invalid_argument("support: theta dimension != cloud dimension");
  if (static_cast<int>(y.values.size()) != cloud.N)
    throw std::invalid_argument("support: perturbation length != cloud size");
  const int n = cloud.n;
  const double* pts = cloud.points.data();
  const double* w = y.values.data();
  double best = 0.0;
  for (int i = 0; i < cloud.N; ++i) {
    const double v = std::fabs(w[i] * dot(pts + static_cast<std::size_t>(i) * n, theta.data(), n));
    if (v > best) best = v;
  }
  return best;
}

WidthEstimate mean_width_mc(const PointCloud& cloud, const Perturbation& y, int M,
                            const RngState& rng) {
  if (M < 2) throw std::invalid_argument("mean_width_mc: M must be >= 2");
  const DirectionSet dirs = sample_directions(cloud.n, M, rng);
  std::vector<double> h(M);
  for (int j = 0; j < M; ++j)
    h[j] = support(cloud, y, std::span<const double>(dirs.row(j), static_cast<std::size_t>(cloud.n)));
  const auto [mean, sd] = mean_sd(h);
  WidthEstimate est;
  est.value = mean;
  est.std_error = sd / std::sqrt(static_cast<double>(M));
  est.M = M;
  est.R = 1;
  est.seed = rng;
  return est;
}

WidthEstimate f_estimate(const IsotropicModel& model, int N, const Perturbation& y, int R,
                         int M, const RngState& rng) {
  if (R < 2) throw std::invalid_argument("f_estimate: R must be >= 2");
  if (M < 2) throw std::invalid_argument("f_estimate: M must be >= 2");
  if (static_cast<int>(y.values.size()) != N)
    throw std::invalid_argument("f_estimate: perturbation length != N");
  const RngState cloud_root = rng.substream(1);
  const RngState dir_root = rng.substream(2);
  std::vector<double> w(R);
  for (int r = 0; r < R; ++r) {
    const PointCloud cloud = sample_isotropic(model, N, cloud_root.substream(r));
    w[r] = mean_width_mc(cloud, y, M, dir_root.substream(r)).value;
  }
  const auto [mean, sd] = mean_sd(w);
  WidthEstimate est;
  est.value = mean;
  est.std_error = sd / std::sqrt(static_cast<double>(R));
  est.M = M;
  est.R = R;
  est.seed = rng;
  return est;
}

double centroid_support(const IsotropicModel& model, double p, std::span<const double> theta,
                        int samples, const RngState& rng) {
  if (!(p >= 1.0)) throw std::invalid_argument("centroid_support: p must be >= 1");
  if (samples < 100) throw std::invalid_argument("centroid_support: samples must be >= 100");
  if (static_cast<int>(theta.size()) != model.n)
    throw std::invalid_argument("centroid_support: theta dimension != n");
  const PointCloud batch = sample_isotropic(model, samples, rng);
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double a = std::fabs(dot(batch.row(i), theta.data(), model.n));
    acc += std::pow(a, p);
  }
  return std::pow(acc / samples, 1.0 / p);
}

WidthEstimate centroid_mean_width(const IsotropicModel& model, double p, int n, int M,
                                  int samples, const RngState& rng) {
  if (model.n != n) throw std::invalid_argument("centroid_mean_width: model dimension != n");
  if (M < 2) throw std::invalid_argument("centroid_mean_width: M must be >= 2");
  const DirectionSet dirs = sample_directions(n, M, rng.substream(0));
  const RngState sample_root = rng.substream(1);
  std::vector<double> h(M);
  for (int j = 0; j < M; ++j)
    h[j] = centroid_support(model, p,
                            std::span<const double>(dirs.row(j), static_cast<std::size_t>(n)),
                            samples, sample_root.substream(j));
  const auto [mean, sd] = mean_sd(h);
  WidthEstimate est;
  est.value = mean;
  est.std_error = sd / std::sqrt(static_cast<double>(M));
  est.M = M;
  est.R = 1;
  est.seed = rng;
  return est;
}

}  // namespace randwidth
