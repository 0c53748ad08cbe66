#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ovd {

// SplitMix64 mixer, used to derive independent stream seeds from one root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. Bit-to-double conversions are done by hand so
// sequences do not depend on the standard library's distribution
// implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream roles. A run's root seed is split once per role so that, e.g., extra
// draws on the policy side never shift the environment noise sequence.
enum class StreamId : std::uint64_t {
  kNetworkInit = 1,
  kActionSampling = 2,
  kEnvNoise = 3,
  kEvalEnvNoise = 4,
  kReplaySampling = 5,
  kUpdateSampling = 6,
};

inline RngStream make_stream(std::uint64_t root_seed, StreamId id) {
  return RngStream(splitmix64(splitmix64(root_seed) + static_cast<std::uint64_t>(id)));
}

}  // namespace ovd
