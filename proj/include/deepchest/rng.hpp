#ifndef DEEPCHEST_RNG_HPP
#define DEEPCHEST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace deepchest {

/// splitmix64 finalizer; decorrelates nearby seed values before they reach
/// the engine.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a stream id
/// (task index, epoch, subsystem tag). derive_seed(s, 0) == mix is its own
/// function of s only, so stream 0 of a base seed is stable.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix64(base + 0x632BE59BD9B4E019ull * stream);
}

/// Deterministic random stream. mt19937_64 is bit-exact per the standard;
/// the uniform/normal transforms are spelled out here because the library
/// distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; consumes exactly two draws per call.
    double normal() {
        const double u1 = uniform(); // 1-u1 in (0,1], so the log is finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Unbiased integer in [0, n); rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % n;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace deepchest

#endif
