#pragma once

#include <array>
#include <cstdint>

namespace qfbsde {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). The
/// output is a pure function of (counter, key), so any path of any chunk can
/// be regenerated independently of how the work was split.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// Standard normal quantile (inverse CDF). `u` must lie in (0, 1).
double normal_quantile(double u);

/// Uniform in the open interval (0, 1) built from 52 bits of two 32-bit words.
/// (With 53 bits the top cell midpoint would round up to 1.)
inline double open_uniform(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Deterministic stream of standard normals for one simulated path (or one
/// antithetic pair). Draw j is fixed by (seed, path, stream, j).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_(path),
        stream_(stream) {}

  /// The j-th normal of this stream.
  double at(std::uint32_t j) const;

  /// Next normal, sequentially (two draws per Philox block).
  double next();

 private:
  void refill(std::uint32_t block_index);

  Philox4x32::Key key_;
  std::uint64_t path_;
  std::uint32_t stream_;
  std::uint32_t position_ = 0;
  std::uint32_t cached_block_ = 0xffffffffu;
  std::array<double, 2> cache_{};
};

}  // namespace qfbsde
