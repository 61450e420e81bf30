#pragma once

#include <cstdint>
#include <initializer_list>

namespace kpkvb {

// Platform-independent 64-bit generator: xoshiro256** seeded through the
// splitmix64 expander. Substreams are derived by folding a key sequence into
// the master seed with the splitmix64 finalizer, so trial t of a sweep owns an
// independent, reproducible stream. Never change the generator family
// silently; regression tests pin its output.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    // Stream keyed by (master, k1, k2, ...). Order-sensitive.
    static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53 random bits.
    double next_double();

    double uniform(double lo, double hi);

    // Po(mean). Inversion below mean 30, Hormann's PTRS transformed rejection
    // above.
    long long poisson(double mean);

    static std::uint64_t mix64(std::uint64_t x);  // splitmix64 finalizer

  private:
    std::uint64_t s_[4];
};

}  // namespace kpkvb
