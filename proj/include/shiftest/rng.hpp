#pragma once

#include <cmath>
#include <cstdint>

namespace shiftest {

// Counter-based random numbers (Philox 4x32-10, Salmon et al. 2011).
// Every 128-bit block is a pure function of (key, counter), so a stream
// keyed by (seed, rep_id) produces the same draws no matter which thread
// runs it or in which order replications are scheduled.

namespace detail {

inline constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

struct PhiloxBlock {
  std::uint32_t v[4];
};

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
  const std::uint64_t p0 = std::uint64_t(kPhiloxM4x32A) * ctr[0];
  const std::uint64_t p1 = std::uint64_t(kPhiloxM4x32B) * ctr[2];
  const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
  const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
  ctr[0] = hi1 ^ ctr[1] ^ key[0];
  ctr[1] = lo1;
  ctr[2] = hi0 ^ ctr[3] ^ key[1];
  ctr[3] = lo0;
}

inline PhiloxBlock philox4x32_10(std::uint64_t key64, std::uint64_t ctr_lo,
                                 std::uint64_t ctr_hi) {
  std::uint32_t ctr[4] = {std::uint32_t(ctr_lo), std::uint32_t(ctr_lo >> 32),
                          std::uint32_t(ctr_hi), std::uint32_t(ctr_hi >> 32)};
  std::uint32_t key[2] = {std::uint32_t(key64), std::uint32_t(key64 >> 32)};
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, key);
    key[0] += kPhiloxW32A;
    key[1] += kPhiloxW32B;
  }
  return PhiloxBlock{{ctr[0], ctr[1], ctr[2], ctr[3]}};
}

}  // namespace detail

// One replication's uniform stream. Draw i of stream (seed, rep_id) is
// fixed forever; streams for different rep_ids never collide because the
// rep_id occupies the high counter word.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double next_uniform() {
    if (cache_fill_ == 0) {
      const auto blk = detail::philox4x32_10(seed_, block_index_++, stream_);
      cache_[0] = (std::uint64_t(blk.v[1]) << 32) | blk.v[0];
      cache_[1] = (std::uint64_t(blk.v[3]) << 32) | blk.v[2];
      cache_fill_ = 2;
    }
    const std::uint64_t bits = cache_[2 - cache_fill_];
    --cache_fill_;
    return double(bits >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::uint64_t cache_[2] = {0, 0};
  int cache_fill_ = 0;
};

}  // namespace shiftest
