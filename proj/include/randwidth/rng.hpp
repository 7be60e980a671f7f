#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace randwidth {

/// Identifier of a random stream: a root seed plus a substream lineage.
/// Equal (seed, stream_path) pairs always reproduce the same sequence;
/// distinct paths give statistically independent streams. The state is a
/// cheap value type; the generator itself is materialized by Rng.
struct RngState {
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> stream_path;

  /// Child state with `k` appended to the lineage.
  [[nodiscard]] RngState substream(std::uint64_t k) const;

  bool operator==(const RngState&) const = default;
};

RngState make_rng(std::uint64_t seed);

/// xoshiro256++ generator seeded from an RngState lineage via a splitmix64
/// hash chain. Never share one Rng between concurrent consumers; derive a
/// substream per task instead.
class Rng {
 public:
  explicit Rng(const RngState& state);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53 random bits.
  double uniform();

  /// Uniform on [-1, 1).
  double uniform_sym();

  /// Standard normal (Marsaglia polar, one value cached).
  double gaussian();

  /// Standard exponential, rate 1.
  double exponential();

  /// Gamma(shape, 1), shape > 0. Marsaglia-Tsang squeeze with the
  /// shape-boost step for shape < 1.
  double gamma(double shape);

  /// Symmetric stable variate with characteristic function exp(-|x|^p),
  /// p in (0, 2]. Chambers-Mallows-Stuck transform; p = 2 reduces to a
  /// centered normal with variance 2, p = 1 to standard Cauchy.
  double stable_symmetric(double p);

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace randwidth
