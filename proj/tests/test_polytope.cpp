#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "randwidth/polytope.hpp"

using namespace randwidth;

namespace {

PointCloud fixed_cloud(int n, std::vector<double> rows) {
  PointCloud c;
  c.n = n;
  c.N = static_cast<int>(rows.size()) / n;
  c.points = std::move(rows);
  c.model = {IsotropicFamily::gaussian, n};
  return c;
}

Perturbation fixed_y(std::vector<double> v) {
  Perturbation y;
  y.values = std::move(v);
  y.law = PerturbationLaw::fixed(y.values);
  return y;
}

// 512-node trapezoid average over the circle, independent of the MC path
double circle_mean_width(const PointCloud& cloud, const Perturbation& y) {
  const int nodes = 512;
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double phi = 2.0 * M_PI * k / nodes;
    const double theta[2] = {std::cos(phi), std::sin(phi)};
    double best = 0.0;
    for (int i = 0; i < cloud.N; ++i) {
      const double d = cloud.row(i)[0] * theta[0] + cloud.row(i)[1] * theta[1];
      best = std::max(best, std::fabs(y.values[i] * d));
    }
    acc += best;
  }
  return acc / nodes;
}

}  // namespace

TEST_CASE("sampled directions are unit rows") {
  const DirectionSet d = sample_directions(7, 500, make_rng(99));
  for (int j = 0; j < d.M; ++j) {
    double norm2 = 0.0;
    for (int k = 0; k < d.n; ++k) norm2 += d.row(j)[k] * d.row(j)[k];
    CHECK(std::fabs(std::sqrt(norm2) - 1.0) <= 1e-12);
  }
  // determinism across materializations
  const DirectionSet e = sample_directions(7, 500, make_rng(99));
  CHECK(d.directions == e.directions);
}

TEST_CASE("support function on axis clouds") {
  const PointCloud c = fixed_cloud(2, {1.0, 0.0, 0.0, 1.0});  // e1, e2
  const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
  CHECK(support(c, fixed_y({1.0, 1.0}), e1) == 1.0);
  CHECK(support(c, fixed_y({2.0, 1.0}), e2) == 1.0);
  CHECK(support(c, fixed_y({2.0, 1.0}), e1) == 2.0);
  CHECK(support(c, fixed_y({0.0, 0.0}), e1) == 0.0);
  CHECK_THROWS_AS(support(c, fixed_y({1.0}), e1), std::invalid_argument);
  CHECK_THROWS_AS(support(c, fixed_y({1.0, 1.0}), std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("support homogeneity, symmetry, monotonicity") {
  std::mt19937 gen(42);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 4;
    const int N = 1 + rep % 7;
    std::vector<double> pts(static_cast<std::size_t>(N) * n), yv(N), theta(n);
    for (auto& v : pts) v = nd(gen);
    for (auto& v : yv) v = nd(gen);
    double norm = 0.0;
    for (auto& v : theta) {
      v = nd(gen);
      norm += v * v;
    }
    for (auto& v : theta) v /= std::sqrt(norm);
    const PointCloud c = fixed_cloud(n, pts);
    const double h = support(c, fixed_y(yv), theta);

    // power-of-two scalings are exact in floating point
    for (const double lam : {2.0, 0.5, -4.0}) {
      std::vector<double> scaled = yv;
      for (auto& v : scaled) v *= lam;
      CHECK(support(c, fixed_y(scaled), theta) == std::fabs(lam) * h);
    }
    std::uniform_real_distribution<double> ud(0.1, 3.0);
    const double lam = ud(gen);
    std::vector<double> scaled = yv;
    for (auto& v : scaled) v *= lam;
    CHECK(support(c, fixed_y(scaled), theta) == doctest::Approx(lam * h).epsilon(1e-13));

    std::vector<double> neg = theta;
    for (auto& v : neg) v = -v;
    CHECK(support(c, fixed_y(yv), neg) == h);

    std::vector<double> larger = yv;
    for (auto& v : larger) v += (v >= 0.0 ? 0.3 : -0.3);
    CHECK(support(c, fixed_y(larger), theta) >= h);
  }
}

TEST_CASE("joint permutation of y and cloud rows leaves estimates unchanged") {
  std::mt19937 gen(7);
  std::normal_distribution<double> nd;
  const int n = 3, N = 9;
  std::vector<double> pts(N * n), yv(N);
  for (auto& v : pts) v = nd(gen);
  for (auto& v : yv) v = nd(gen);
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<double> pts_p(N * n), yv_p(N);
  for (int i = 0; i < N; ++i) {
    yv_p[i] = yv[perm[i]];
    for (int j = 0; j < n; ++j) pts_p[i * n + j] = pts[perm[i] * n + j];
  }
  const auto state = make_rng(77);
  const WidthEstimate a = mean_width_mc(fixed_cloud(n, pts), fixed_y(yv), 64, state);
  const WidthEstimate b = mean_width_mc(fixed_cloud(n, pts_p), fixed_y(yv_p), 64, state);
  CHECK(a.value == b.value);
}

TEST_CASE("mean width of a single axis point: 2/pi in the plane, 1/2 in space") {
  // n = 2: circle average of |cos phi|; trapezoid oracle agrees with 2/pi
  const PointCloud c2 = fixed_cloud(2, {1.0, 0.0});
  const Perturbation one = fixed_y({1.0});
  const double oracle2 = circle_mean_width(c2, one);
  CHECK(oracle2 == doctest::Approx(2.0 / M_PI).epsilon(1e-4));
  const WidthEstimate w2 = mean_width_mc(c2, one, 100000, make_rng(21));
  CHECK(std::fabs(w2.value - 2.0 / M_PI) < 3.5 * w2.std_error);

  // n = 3: the first coordinate of a uniform direction is uniform on [-1, 1]
  const PointCloud c3 = fixed_cloud(3, {1.0, 0.0, 0.0});
  const WidthEstimate w3 = mean_width_mc(c3, one, 100000, make_rng(22));
  CHECK(std::fabs(w3.value - 0.5) < 3.5 * w3.std_error);

  // independent brute-force MC oracle via the standard library generator
  std::mt19937_64 gen(1234);
  std::normal_distribution<double> nd;
  double acc = 0.0;
  const int m = 200000;
  for (int k = 0; k < m; ++k) {
    double v[3] = {nd(gen), nd(gen), nd(gen)};
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    acc += std::fabs(v[0]) / norm;
  }
  CHECK(std::fabs(acc / m - w3.value) < 0.01);
}

TEST_CASE("oracle equivalence: MC vs circle quadrature for a 3-point planar cloud") {
  const PointCloud c = fixed_cloud(2, {0.9, -0.3, -0.2, 1.4, 0.5, 0.8});
  const Perturbation y = fixed_y({1.0, 0.7, -1.2});
  const double oracle = circle_mean_width(c, y);
  const WidthEstimate est = mean_width_mc(c, y, 65536, make_rng(23));
  CHECK(std::fabs(est.value - oracle) < 3.0 * est.std_error);
}

TEST_CASE("mean_width_mc consistency between M and 4M directions") {
  const PointCloud c = fixed_cloud(3, {0.9, -0.3, 0.1, -0.2, 1.4, 0.4, 0.5, 0.8, -1.1});
  const Perturbation y = fixed_y({1.0, 0.7, -1.2});
  const WidthEstimate a = mean_width_mc(c, y, 4096, make_rng(24).substream(0));
  const WidthEstimate b = mean_width_mc(c, y, 16384, make_rng(24).substream(1));
  const double tol = 3.0 * std::hypot(a.std_error, b.std_error);
  CHECK(std::fabs(a.value - b.value) < tol);
}

TEST_CASE("degenerate y = 0 gives exact zero with zero error") {
  const PointCloud c = fixed_cloud(2, {1.0, 0.0, 0.0, 1.0});
  const WidthEstimate w = mean_width_mc(c, fixed_y({0.0, 0.0}), 16, make_rng(1));
  CHECK(w.value == 0.0);
  CHECK(w.std_error == 0.0);
}

TEST_CASE("f_estimate: rate band, exact doubling under shared seeds") {
  const IsotropicModel model{IsotropicFamily::gaussian, 8};
  const int N = 64;
  const Perturbation ones = fixed_y(std::vector<double>(N, 1.0));
  const auto state = make_rng(31);
  const WidthEstimate f = f_estimate(model, N, ones, 32, 512, state);
  const double normalized = f.value / std::sqrt(std::log(static_cast<double>(N)));
  CHECK(normalized > 0.8);
  CHECK(normalized < 3.0);
  CHECK(f.std_error / f.value < 0.05);

  Perturbation twice = ones;
  for (auto& v : twice.values) v *= 2.0;
  const WidthEstimate f2 = f_estimate(model, N, twice, 32, 512, state);
  CHECK(f2.value == 2.0 * f.value);
  CHECK(std::fabs(f2.value - f.value) == f.value);
}

TEST_CASE("centroid body support for the gaussian model") {
  const IsotropicModel model{IsotropicFamily::gaussian, 5};
  std::vector<double> theta(5, 0.0);
  theta[2] = 1.0;
  const int m = 200000;
  CHECK(centroid_support(model, 2.0, theta, m, make_rng(41)) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(centroid_support(model, 1.0, theta, m, make_rng(42)) ==
        doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.01));
  CHECK(centroid_support(model, 4.0, theta, m, make_rng(43)) ==
        doctest::Approx(std::pow(3.0, 0.25)).epsilon(0.02));
  CHECK_THROWS_AS(centroid_support(model, 0.5, theta, m, make_rng(44)), std::invalid_argument);
  CHECK_THROWS_AS(centroid_support(model, 2.0, theta, 10, make_rng(44)), std::invalid_argument);
}

TEST_CASE("centroid mean width: isotropy at p=2, monotone in p, sqrt(log N) rate") {
  const IsotropicModel model{IsotropicFamily::cube, 6};
  const auto state = make_rng(51);
  const WidthEstimate w2 = centroid_mean_width(model, 2.0, 6, 32, 20000, state);
  CHECK(w2.value == doctest::Approx(1.0).epsilon(0.02));

  const WidthEstimate w1 = centroid_mean_width(model, 1.0, 6, 32, 20000, state);
  const WidthEstimate w4 = centroid_mean_width(model, 4.0, 6, 32, 20000, state);
  CHECK(w4.value >= w1.value);

  // p = log N across the grid: value / sqrt(log N) stays within +-20%
  const IsotropicModel big{IsotropicFamily::gaussian, 16};
  std::vector<double> normalized;
  for (int e = 6; e <= 12; ++e) {
    const int N = 1 << e;
    const double p = std::log(static_cast<double>(N));
    const WidthEstimate w = centroid_mean_width(big, p, 16, 32, 50000, make_rng(52));
    normalized.push_back(w.value / std::sqrt(p));
  }
  const double mean =
      std::accumulate(normalized.begin(), normalized.end(), 0.0) / normalized.size();
  for (double v : normalized) {
    CHECK(v > 0.8 * mean);
    CHECK(v < 1.2 * mean);
  }
}
