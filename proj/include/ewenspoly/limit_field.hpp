#ifndef EWENSPOLY_LIMIT_FIELD_HPP
#define EWENSPOLY_LIMIT_FIELD_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ewenspoly/numeric.hpp"
#include "ewenspoly/rng.hpp"
#include "ewenspoly/weights.hpp"

namespace ewenspoly {

/// Truncated draw of the limit field
///   F(z) = prod_k (1 - z^k)^{Y_k},  Y_k independent Poisson(theta_k r^k / k),
/// valid on |z| <= delta. Factors beyond the stored depth are dropped; the
/// depth is chosen so their expected log contribution is below eps / 10.
struct LimitFieldSample {
    std::vector<std::int64_t> y;  // y[l-1] = Y_l
    std::int64_t depth = 0;       // number of retained factors
    double delta = 0.0;
    double eps = 0.0;
    std::uint64_t seed = 0;
};

// Smallest K whose dropped-tail bound
//   sum_{k>K} (theta_k r^k / k) delta^k / (1 - delta)
// is at most eps / 10. The sum is evaluated through g(r delta).
inline std::int64_t limit_truncation_depth(const ThetaSequence& seq, double delta, double eps) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("limit depth: need 0 < delta < 1");
    if (!(eps > 0.0)) throw std::domain_error("limit depth: need eps > 0");
    const double budget = eps / 10.0;
    const double total = seq.g(cdouble(seq.r() * delta, 0.0)).real();
    const double scale = 1.0 / (1.0 - delta);
    if (total * scale <= budget) return 0;
    double partial = 0.0;
    double dk = 1.0;
    const std::int64_t cap = 1000000;
    for (std::int64_t k = 1; k <= cap; ++k) {
        dk *= delta;
        partial += seq.scaled_theta(k) / static_cast<double>(k) * dk;
        double tail = (total - partial) * scale;
        if (tail <= budget) return k;
    }
    throw std::runtime_error("limit depth: truncation beyond 1e6 factors, relax delta or eps");
}

inline LimitFieldSample sample_limit_with_depth(const ThetaSequence& seq, std::int64_t depth, double delta,
                                                double eps, std::uint64_t seed) {
    LimitFieldSample out;
    out.depth = depth;
    out.delta = delta;
    out.eps = eps;
    out.seed = seed;
    out.y.assign(static_cast<std::size_t>(depth), 0);
    SplitMix64 rng(seed);
    for (std::int64_t l = 1; l <= depth; ++l) {
        double lambda = seq.scaled_theta(l) / static_cast<double>(l);
        out.y[static_cast<std::size_t>(l) - 1] = rng.next_poisson(lambda);
    }
    return out;
}

inline LimitFieldSample sample_limit(const ThetaSequence& seq, double delta, double eps, std::uint64_t seed) {
    return sample_limit_with_depth(seq, limit_truncation_depth(seq, delta, eps), delta, eps, seed);
}

// F(z) over the retained factors. Every factor has Re(1 - z^k) > 0, so the
// principal logs accumulate without branch trouble, as in eval_charpoly.
inline cdouble eval_F(const LimitFieldSample& s, cdouble z) {
    if (std::abs(z) > s.delta) throw std::domain_error("eval_F: |z| must be <= delta");
    cdouble acc(0.0, 0.0);
    cdouble zk(1.0, 0.0);
    for (std::int64_t k = 1; k <= s.depth; ++k) {
        zk *= z;
        std::int64_t c = s.y[static_cast<std::size_t>(k) - 1];
        if (c == 0) continue;
        acc += static_cast<double>(c) * std::log(cdouble(1.0, 0.0) - zk);
    }
    return std::exp(acc);
}

// The log field f(z) = sum_k (X_k / k) z^k truncated at m_max, where
// X_k = sum_{l | k} l Y_l collects the retained Poisson counts. With
// m_max large enough, exp(-f(z)) reproduces eval_F(z).
inline cdouble eval_f(const LimitFieldSample& s, cdouble z, std::int64_t m_max) {
    if (m_max < 0) throw std::invalid_argument("eval_f: need m_max >= 0");
    if (std::abs(z) > s.delta) throw std::domain_error("eval_f: |z| must be <= delta");
    std::vector<double> x(static_cast<std::size_t>(m_max) + 1, 0.0);
    for (std::int64_t l = 1; l <= std::min(s.depth, m_max); ++l) {
        std::int64_t c = s.y[static_cast<std::size_t>(l) - 1];
        if (c == 0) continue;
        double add = static_cast<double>(l * c);
        for (std::int64_t j = l; j <= m_max; j += l) x[static_cast<std::size_t>(j)] += add;
    }
    cdouble acc(0.0, 0.0);
    cdouble zk(1.0, 0.0);
    for (std::int64_t k = 1; k <= m_max; ++k) {
        zk *= z;
        if (x[static_cast<std::size_t>(k)] != 0.0) acc += x[static_cast<std::size_t>(k)] / static_cast<double>(k) * zk;
    }
    return acc;
}

// E F(z) = 1 / G(r z) for |z| < 1.
inline cdouble mean_F(const ThetaSequence& seq, cdouble z) {
    if (std::abs(z) >= 1.0) throw std::domain_error("mean_F: |z| must be < 1");
    return 1.0 / seq.exp_g(seq.r() * z);
}

// Covariance of the centered log field,
//   Cov(f(z), f(w)) = sum_{a,b >= 1} g(r z^a conj(w)^b) / (a b),
// summed until the geometric tail bound drops below tol.
inline cdouble cov_f(const ThetaSequence& seq, cdouble z, cdouble w, double tol = 1e-12) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0) throw std::domain_error("cov_f: need |z| < 1 and |w| < 1");
    if (!(tol > 0.0)) throw std::invalid_argument("cov_f: need tol > 0");
    if (z == cdouble(0.0, 0.0) || w == cdouble(0.0, 0.0)) return cdouble(0.0, 0.0);
    const double az = std::abs(z);
    const double aw = std::abs(w);
    const double s0 = std::max(az, aw);
    // |g(r u)| <= C |u| on |u| <= s0, with C from the positive-coefficient
    // bound g(r s0) / s0.
    const double c_lin = seq.g(cdouble(seq.r() * s0, 0.0)).real() / s0;
    auto tail_rows = [&](double x, std::int64_t a_last) {
        return std::pow(x, static_cast<double>(a_last) + 1.0) /
               ((static_cast<double>(a_last) + 1.0) * (1.0 - x));
    };
    auto full_log = [](double x) { return -std::log1p(-x); };
    const std::int64_t cap = 10000000;
    std::int64_t a_max = 1;
    while (a_max < cap && c_lin * tail_rows(az, a_max) * full_log(aw) > tol / 2.0) ++a_max;
    std::int64_t b_max = 1;
    while (b_max < cap && c_lin * full_log(az) * tail_rows(aw, b_max) > tol / 2.0) ++b_max;
    cdouble acc(0.0, 0.0);
    cdouble za(1.0, 0.0);
    const cdouble wc = std::conj(w);
    for (std::int64_t a = 1; a <= a_max; ++a) {
        za *= z;
        cdouble wb(1.0, 0.0);
        for (std::int64_t b = 1; b <= b_max; ++b) {
            wb *= wc;
            acc += seq.g(seq.r() * za * wb) / static_cast<double>(a * b);
        }
    }
    return acc;
}

}  // namespace ewenspoly

#endif
