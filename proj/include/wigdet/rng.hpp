#pragma once

#include <cmath>
#include <cstdint>

namespace wigdet {

// Counter-based stream RNG: every (master_seed, stream) pair yields an
// independent, reproducible sequence, so trials can run in any order on any
// number of threads without changing results. State is xoshiro256++ seeded
// through SplitMix64; the samplers below avoid std::*_distribution on purpose
// (their output is implementation-defined, which would break byte-level
// reproducibility of the emitted CSVs).
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t x = master_seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& si : s_) si = splitmix64(x);
    // avoid the all-zero state, however unlikely
    s_[0] |= 1;
  }

  std::uint64_t next_u64() {
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

  // uniform on [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on the open interval (0, 1); safe as inverse-CDF input
  double next_open_unit() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // standard normal via Marsaglia polar; second value cached
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, r2;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double m = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

  // hyperbolic secant law g(x) = 1/(2 cosh(pi x / 2)); unit variance.
  // Inverse CDF: x = (2/pi) log(tan(pi u / 2)).
  double next_sech() {
    const double u = next_open_unit();
    return (2.0 / kPi) * std::log(std::tan(kPi * u / 2.0));
  }

  std::uint64_t next_below(std::uint64_t bound) {
    // multiply-shift; bias is negligible for the small bounds used here
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wigdet
