#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rowsample {

// Counter-based splittable generator (splitmix64 core).  A stream is fully
// identified by (seed, stream_id); draws from distinct streams are
// independent for practical purposes and a stream can be replayed exactly.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    counter_ = mix64(seed ^ mix64(stream_id + kGamma));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    counter_ += kGamma;
    return mix64(counter_);
  }

  // uniform in [0, 1) with 53 random bits
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, bound), unbiased (multiply-shift with rejection)
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    unsigned __int128 prod =
        static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  bool next_sign() { return (next_u64() >> 63) != 0; }

  // standard normal via Box-Muller; two uniforms per draw, no caching, so a
  // stream's output depends only on the number of preceding draws
  double next_gaussian();  // defined at the bottom of this header

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

inline double RngStream::next_gaussian() {
  const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// deterministic stream id from a small tuple (used to give every trial of a
// sweep its own stream)
inline std::uint64_t derive_stream_id(std::uint64_t a, std::uint64_t b,
                                      std::uint64_t c = 0) {
  std::uint64_t h = RngStream::mix64(a + 0x9E3779B97F4A7C15ull);
  h = RngStream::mix64(h ^ (b + 0xBF58476D1CE4E5B9ull));
  h = RngStream::mix64(h ^ (c + 0x94D049BB133111EBull));
  return h;
}

}  // namespace rowsample
