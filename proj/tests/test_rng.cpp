#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "randwidth/rng.hpp"

using namespace randwidth;

TEST_CASE("equal seed and path reproduce the sequence bitwise") {
  Rng a(make_rng(0));
  Rng b(make_rng(0));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(make_rng(0xDEADBEEF).substream(4).substream(2));
  Rng d(make_rng(0xDEADBEEF).substream(4).substream(2));
  for (int i = 0; i < 100; ++i) CHECK(c.uniform() == d.uniform());
}

TEST_CASE("neighboring seeds differ in the first draw") {
  int differing = 0;
  for (std::uint64_t s = 0; s < 64; ++s) {
    Rng a(make_rng(s));
    Rng b(make_rng(s + 1));
    if (a.next_u64() != b.next_u64()) ++differing;
  }
  CHECK(differing == 64);
}

TEST_CASE("distinct substream paths give distinct sequences") {
  Rng a(make_rng(7).substream(3));
  Rng b(make_rng(7).substream(4));
  bool any_diff = false;
  for (int i = 0; i < 16; ++i) any_diff = any_diff || a.next_u64() != b.next_u64();
  CHECK(any_diff);

  // nested paths differ from flat ones
  Rng c(make_rng(7).substream(3).substream(0));
  Rng d(make_rng(7).substream(3));
  bool nested_diff = false;
  for (int i = 0; i < 16; ++i) nested_diff = nested_diff || c.next_u64() != d.next_u64();
  CHECK(nested_diff);
}

TEST_CASE("uniform and exponential moments") {
  Rng g(make_rng(11));
  const int m = 200000;
  double su = 0.0, se = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = g.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    se += g.exponential();
  }
  CHECK(std::fabs(su / m - 0.5) < 0.005);
  CHECK(std::fabs(se / m - 1.0) < 0.02);
}

TEST_CASE("gamma mean and variance match the shape") {
  for (const double shape : {0.4, 1.0, 2.7}) {
    Rng g(make_rng(23).substream(static_cast<std::uint64_t>(shape * 10)));
    const int m = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = g.gamma(shape);
      s1 += x;
      s2 += x * x;
    }
    const double mean = s1 / m;
    const double var = s2 / m - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.03));
    CHECK(var == doctest::Approx(shape).epsilon(0.06));
  }
}

TEST_CASE("stable p=2 limit has variance 2") {
  // exp(-t^2) is the characteristic function of a centered normal, variance 2
  Rng g(make_rng(5));
  const int m = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = g.stable_symmetric(2.0);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / m;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(s2 / m - mean * mean == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("stable p=1 is standard Cauchy: median |xi| near 1") {
  Rng g(make_rng(6));
  const int m = 100000;
  std::vector<double> a(m);
  for (auto& v : a) v = std::fabs(g.stable_symmetric(1.0));
  std::nth_element(a.begin(), a.begin() + m / 2, a.end());
  CHECK(a[m / 2] == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("rejected parameters") {
  Rng g(make_rng(1));
  CHECK_THROWS_AS(g.gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(g.stable_symmetric(0.0), std::invalid_argument);
  CHECK_THROWS_AS(g.stable_symmetric(2.5), std::invalid_argument);
}
