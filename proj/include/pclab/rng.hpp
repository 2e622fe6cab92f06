#pragma once

#include <cstdint>
#include <string_view>

namespace pclab {

/// splitmix64: tiny, bit-portable PRNG. Standard-library distributions are not
/// reproducible across implementations, so every random choice in the tool goes
/// through this generator with explicit modulo reduction.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound). bound must be positive. Modulo reduction:
    /// the bias is irrelevant at the scales used here and the result is
    /// identical on every platform.
    uint64_t below(uint64_t bound) { return next() % bound; }

    bool coin() { return (next() & 1) != 0; }

  private:
    uint64_t state_;
};

/// Stage sub-seeds are derived from the experiment seed by FNV-1a hashing of a
/// stage label, then mixed once through splitmix64.
inline uint64_t sub_seed(uint64_t seed, std::string_view label) {
    uint64_t h = 1469598103934665603ULL;
    for (char c : label) {
        h ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    SplitMix64 g(seed ^ h);
    return g.next();
}

} // namespace pclab
