#pragma once

#include <cstdint>
#include <random>

namespace fockmaj {

// splitmix64 finalizer; used to spread user seeds into independent streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for (stream, index) derived from a base seed. Every sample of every
// scan gets its own generator, so results are independent of thread count
// and iteration order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ splitmix64(stream));
    h = splitmix64(h ^ splitmix64(index));
    return h;
}

// mt19937_64 wrapper with explicit, platform-independent conversions to
// doubles (std::uniform_real_distribution is not pinned by the standard).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Exp(1) via inversion; log1p keeps small values accurate and the
    // result finite for every uniform() output.
    double exponential();

    // Uniform integer in [0, n), n >= 1. Rejection-free modulo is fine
    // here: n is tiny compared to 2^64, the bias is ~n/2^64.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

} // namespace fockmaj
