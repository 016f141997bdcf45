#ifndef EWENSPOLY_RNG_HPP
#define EWENSPOLY_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ewenspoly {

// Finalizer of the splitmix64 generator. Bijective on 64-bit words with
// full avalanche, used both as the state mixer and to derive replica seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for replica i of an experiment run with base seed s. Replicas are
// independent of worker count; results depend only on (s, i).
inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t i) {
    return mix64(seed ^ (0x5851f42d4c957f2dULL * (i + 1)));
}

/// Small deterministic PRNG (splitmix64). Not cryptographic.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Poisson draw by inversion of the CDF. Ties at the CDF jumps resolve
    // toward the smaller value. Large parameters are split into chunks so
    // the inversion loop stays short and well conditioned.
    std::int64_t next_poisson(double lambda) {
        if (!(lambda >= 0.0)) throw std::invalid_argument("poisson: lambda must be >= 0");
        if (lambda == 0.0) return 0;
        if (lambda > 30.0) {
            auto chunks = static_cast<std::int64_t>(std::ceil(lambda / 20.0));
            double part = lambda / static_cast<double>(chunks);
            std::int64_t total = 0;
            for (std::int64_t c = 0; c < chunks; ++c) total += next_poisson(part);
            return total;
        }
        double u = next_unit();
        double p = std::exp(-lambda);
        double cum = p;
        std::int64_t k = 0;
        // cum reaches 1 - 1e-16 well before the cap; the cap only guards
        // against the tail of floating point residue.
        const std::int64_t cap = static_cast<std::int64_t>(lambda + 40.0 * std::sqrt(lambda + 1.0) + 60.0);
        while (u > cum && k < cap) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cum += p;
        }
        return k;
    }

private:
    std::uint64_t state_;
};

}  // namespace ewenspoly

#endif
