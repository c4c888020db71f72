#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace tdwave {

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t x, std::uint64_t h) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

// Counter-free splittable generator. Streams are derived from (seed, tag,
// index) so every trajectory / sample draws from its own substream and the
// results do not depend on thread scheduling.
struct SplitMix64 {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline SplitMix64 make_stream(std::uint64_t seed, std::string_view tag,
                              std::uint64_t index = 0) {
  std::uint64_t h = fnv1a64(tag);
  h = fnv1a64_u64(seed, h);
  h = fnv1a64_u64(index, h);
  return SplitMix64(h);
}

// Stream keyed additionally by a real number (e.g. a launch time), hashed
// through its bit pattern so equal doubles give equal streams.
inline SplitMix64 make_stream_t(std::uint64_t seed, std::string_view tag,
                                double t, std::uint64_t index = 0) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(t));
  __builtin_memcpy(&bits, &t, sizeof(bits));
  std::uint64_t h = fnv1a64(tag);
  h = fnv1a64_u64(seed, h);
  h = fnv1a64_u64(bits, h);
  h = fnv1a64_u64(index, h);
  return SplitMix64(h);
}

}  // namespace tdwave
