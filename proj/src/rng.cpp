#include "randwidth/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace randwidth {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngState make_rng(std::uint64_t seed) { return RngState{seed, {}}; }

RngState RngState::substream(std::uint64_t k) const {
  RngState child = *this;
  child.stream_path.push_back(k);
  return child;
}

Rng::Rng(const RngState& state) {
  // fold the lineage into a single word, then expand to the engine state
  std::uint64_t h = splitmix64(state.seed);
  for (std::uint64_t e : state.stream_path) {
    h = splitmix64(h ^ (kGolden + e * 0xD1B54A32D192ED03ull));
  }
  std::uint64_t x = h;
  for (auto& w : s_) {
    x = splitmix64(x);
    w = x;
  }
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform_sym() { return 2.0 * uniform() - 1.0; }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform_sym();
    v = uniform_sym();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::exponential() { return -std::log1p(-uniform()); }

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    const double u = 1.0 - uniform();  // (0, 1]
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::stable_symmetric(double p) {
  if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("stable_symmetric: p must be in (0, 2]");
  const double u = M_PI * (uniform() - 0.5);  // (-pi/2, pi/2)
  double w;
  do {
    w = exponential();
  } while (w <= 0.0);
  const double a = std::sin(p * u) / std::pow(std::cos(u), 1.0 / p);
  const double b = std::pow(std::cos((1.0 - p) * u) / w, (1.0 - p) / p);
  return a * b;
}

}  // namespace randwidth
