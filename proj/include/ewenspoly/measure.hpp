#ifndef EWENSPOLY_MEASURE_HPP
#define EWENSPOLY_MEASURE_HPP

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ewenspoly/rng.hpp"
#include "ewenspoly/series.hpp"
#include "ewenspoly/weights.hpp"

namespace ewenspoly {

/// Cycle type of a permutation of {1..n}: counts[k-1] holds the number of
/// k-cycles, so sum_k k * counts[k-1] == n.
struct CycleType {
    std::int64_t n = 0;
    std::vector<std::int64_t> counts;

    std::int64_t count(std::int64_t k) const {
        if (k < 1 || k > n) return 0;
        return counts[static_cast<std::size_t>(k) - 1];
    }

    std::int64_t num_cycles() const {
        std::int64_t c = 0;
        for (std::int64_t v : counts) c += v;
        return c;
    }

    bool is_valid() const {
        if (n < 1 || counts.size() != static_cast<std::size_t>(n)) return false;
        std::int64_t total = 0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (counts[k] < 0) return false;
            total += static_cast<std::int64_t>(k + 1) * counts[k];
        }
        return total == n;
    }
};

struct PermutationSample {
    CycleType type;
    std::uint64_t seed = 0;
};

// Unnormalized sampling weight prod_k theta_k^{C_k}.
inline double weight(const ThetaSequence& seq, const CycleType& ct) {
    double log_w = 0.0;
    for (std::int64_t k = 1; k <= ct.n; ++k) {
        std::int64_t c = ct.counts[static_cast<std::size_t>(k) - 1];
        if (c > 0) log_w += static_cast<double>(c) * std::log(seq.theta(k));
    }
    return std::exp(log_w);
}

// Exact probability of a cycle type,
//   P[type] = (1 / h_n) prod_k (theta_k / k)^{C_k} / C_k!,
// evaluated in log space against precomputed generating coefficients.
inline double cycle_type_prob(const ThetaSequence& seq, const CycleType& ct, const HCoeffs& hs) {
    if (!ct.is_valid()) throw std::invalid_argument("cycle_type_prob: invalid cycle type");
    if (hs.max_order() < static_cast<std::size_t>(ct.n)) {
        throw std::invalid_argument("cycle_type_prob: coefficients truncated below n");
    }
    double log_p = -hs.log_h(static_cast<std::size_t>(ct.n));
    for (std::int64_t k = 1; k <= ct.n; ++k) {
        std::int64_t c = ct.counts[static_cast<std::size_t>(k) - 1];
        if (c == 0) continue;
        double dk = static_cast<double>(k);
        log_p += static_cast<double>(c) * (std::log(seq.theta(k)) - std::log(dk));
        log_p -= std::lgamma(static_cast<double>(c) + 1.0);
    }
    return std::exp(log_p);
}

inline double cycle_type_prob(const ThetaSequence& seq, const CycleType& ct) {
    return cycle_type_prob(seq, ct, h_coeffs(seq, static_cast<std::size_t>(ct.n)));
}

// All cycle types of size n in a fixed deterministic order (partitions with
// parts generated largest first). Guarded because the count grows fast.
inline std::vector<CycleType> enumerate_types(std::int64_t n) {
    if (n < 1 || n > 40) throw std::length_error("enumerate_types: need 1 <= n <= 40");
    std::vector<CycleType> out;
    CycleType cur;
    cur.n = n;
    cur.counts.assign(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, std::int64_t remaining, std::int64_t max_part) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (std::int64_t k = std::min(remaining, max_part); k >= 1; --k) {
            ++cur.counts[static_cast<std::size_t>(k) - 1];
            self(self, remaining - k, k);
            --cur.counts[static_cast<std::size_t>(k) - 1];
        }
    };
    rec(rec, n, n);
    return out;
}

// Length of the cycle containing the smallest remaining element when m
// elements are left: P[length = k] = theta_k r^k hs_{m-k} / (m hs_m).
// Inversion walks k upward, ties resolve toward smaller k.
inline std::int64_t draw_cycle_length(const HCoeffs& hs, std::int64_t m, SplitMix64& rng) {
    double inv = 1.0 / (static_cast<double>(m) * hs.scaled[static_cast<std::size_t>(m)]);
    double u = rng.next_unit();
    double cum = 0.0;
    for (std::int64_t k = 1; k < m; ++k) {
        cum += hs.scaled_theta[static_cast<std::size_t>(k)] * hs.scaled[static_cast<std::size_t>(m - k)] * inv;
        if (u <= cum) return k;
    }
    return m;
}

// Runs the sequential cycle construction and reports each cycle length in
// draw order. This is the single sampling code path; callers that only need
// a few statistics can avoid materializing the dense count vector.
template <class OnCycle>
inline void sample_cycles(const HCoeffs& hs, std::int64_t n, SplitMix64& rng, OnCycle&& on_cycle) {
    if (n < 1) throw std::invalid_argument("sample_cycles: need n >= 1");
    if (hs.max_order() < static_cast<std::size_t>(n)) {
        throw std::invalid_argument("sample_cycles: coefficients truncated below n");
    }
#ifndef NDEBUG
    {
        // The step masses must sum to 1; this is the h recursion itself.
        double inv = 1.0 / (static_cast<double>(n) * hs.scaled[static_cast<std::size_t>(n)]);
        double total = 0.0;
        for (std::int64_t k = 1; k <= n; ++k) {
            total += hs.scaled_theta[static_cast<std::size_t>(k)] * hs.scaled[static_cast<std::size_t>(n - k)] * inv;
        }
        assert(std::abs(total - 1.0) < 1e-9);
    }
#endif
    std::int64_t m = n;
    while (m > 0) {
        std::int64_t k = draw_cycle_length(hs, m, rng);
        on_cycle(k);
        m -= k;
    }
}

inline PermutationSample sample_cycle_type(const ThetaSequence& seq, std::int64_t n, std::uint64_t seed,
                                           const HCoeffs& hs) {
    (void)seq;
    PermutationSample out;
    out.seed = seed;
    out.type.n = n;
    out.type.counts.assign(static_cast<std::size_t>(n), 0);
    SplitMix64 rng(seed);
    sample_cycles(hs, n, rng, [&](std::int64_t k) { ++out.type.counts[static_cast<std::size_t>(k) - 1]; });
    return out;
}

inline PermutationSample sample_cycle_type(const ThetaSequence& seq, std::int64_t n, std::uint64_t seed) {
    return sample_cycle_type(seq, n, seed, h_coeffs(seq, static_cast<std::size_t>(n)));
}

// A concrete permutation with the given cycle type, in one-line form
// (image of i at index i). Cycles are laid out over consecutive blocks.
inline std::vector<std::int64_t> to_permutation(const CycleType& ct) {
    if (!ct.is_valid()) throw std::invalid_argument("to_permutation: invalid cycle type");
    std::vector<std::int64_t> perm(static_cast<std::size_t>(ct.n));
    std::int64_t base = 0;
    for (std::int64_t k = 1; k <= ct.n; ++k) {
        for (std::int64_t c = 0; c < ct.counts[static_cast<std::size_t>(k) - 1]; ++c) {
            for (std::int64_t i = 0; i < k; ++i) {
                perm[static_cast<std::size_t>(base + i)] = base + (i + 1) % k;
            }
            base += k;
        }
    }
    return perm;
}

}  // namespace ewenspoly

#endif
