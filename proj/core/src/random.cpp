#include "qfbsde/random.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <stdexcept>

namespace qfbsde {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

Philox4x32::Counter block_for(const Philox4x32::Key& key, std::uint64_t path,
                              std::uint32_t stream, std::uint32_t index) {
  return Philox4x32::block(
      {static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32), index, stream},
      key);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal_quantile requires 0 < u < 1");
  // Phi^{-1}(u) = -sqrt(2) erfc^{-1}(2u); erfc_inv keeps full relative
  // accuracy in both tails.
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

double NormalStream::at(std::uint32_t j) const {
  const auto out = block_for(key_, path_, stream_, j / 2);
  return (j % 2 == 0) ? normal_quantile(open_uniform(out[0], out[1]))
                      : normal_quantile(open_uniform(out[2], out[3]));
}

double NormalStream::next() {
  const std::uint32_t j = position_++;
  if (j / 2 != cached_block_) refill(j / 2);
  return cache_[j % 2];
}

void NormalStream::refill(std::uint32_t block_index) {
  const auto out = block_for(key_, path_, stream_, block_index);
  cache_[0] = normal_quantile(open_uniform(out[0], out[1]));
  cache_[1] = normal_quantile(open_uniform(out[2], out[3]));
  cached_block_ = block_index;
}

}  // namespace qfbsde
