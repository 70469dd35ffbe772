#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace sdsbm {

// Philox4x32-10 counter-based generator. Chosen over std engines because
// streams are addressed by (seed, stream, counter): replicates and
// per-purpose substreams are independent without shared state, and the
// output is identical across platforms.
namespace philox {

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 2> key,
                                          std::array<std::uint32_t, 4> ctr) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
    std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
    ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
           std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

}  // namespace philox

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Order-sensitive mix of several 64-bit fields into one seed.
inline std::uint64_t seed_mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8C2F9D4A61C3E7B5ull;
  for (std::uint64_t p : parts) {
    h = splitmix64(h ^ p);
  }
  return h;
}

/// FNV-1a over bytes; stable way to fold names into seeds.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// One independent random stream: (seed, stream) picks the sequence,
// an internal 64-bit counter walks along it. Copyable and cheap.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) {
      refill();
    }
    return buf_[buf_pos_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; second value cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Unbiased integer in [0, bound); bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound) {
    std::uint64_t x, r;
    do {
      x = next_u64();
      r = x % bound;
    } while (x - r > std::uint64_t(0) - bound);
    return r;
  }

  /// Derives an independent stream; same (stream, tag) always yields the
  /// same child, so forked work stays reproducible under parallelism.
  RandomStream fork(std::uint64_t tag) const {
    return RandomStream(seed_mix({seed_, stream_, tag}), stream_ ^ 0x517CC1B727220A95ull);
  }

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() { return next_u64(); }

 private:
  void refill() {
    std::array<std::uint32_t, 2> key{std::uint32_t(seed_), std::uint32_t(seed_ >> 32)};
    std::array<std::uint32_t, 4> ctr{std::uint32_t(counter_), std::uint32_t(counter_ >> 32),
                                     std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
    buf_ = philox::block(key, ctr);
    ++counter_;
    buf_pos_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sdsbm
