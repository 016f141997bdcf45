#ifndef EWENSPOLY_TEST_UTIL_HPP
#define EWENSPOLY_TEST_UTIL_HPP

// Oracles for the unit tests. Everything here recomputes expected values by
// routes independent of the library implementations under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "ewenspoly/numeric.hpp"

namespace test_util {

using ewenspoly::cdouble;

// Partition count by the classic restricted recursion.
inline long long count_partitions_restricted(int n, int max_part, std::map<std::pair<int, int>, long long>& memo) {
    if (n == 0) return 1;
    if (n < 0 || max_part == 0) return 0;
    auto key = std::make_pair(n, max_part);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long r = count_partitions_restricted(n - max_part, max_part, memo) +
                  count_partitions_restricted(n, max_part - 1, memo);
    memo[key] = r;
    return r;
}

inline long long count_partitions(int n) {
    std::map<std::pair<int, int>, long long> memo;
    return count_partitions_restricted(n, n, memo);
}

// binom(theta + n - 1, n) by the product recurrence.
inline double ewens_h_binomial(double theta, int n) {
    double v = 1.0;
    for (int j = 1; j <= n; ++j) v *= (theta + static_cast<double>(j) - 1.0) / static_cast<double>(j);
    return v;
}

// Direct truncated sum of g(z) = sum_k (theta_k/k) z^k written through the
// rescaled weights, so it works for every family.
template <class Seq>
inline cdouble brute_g(const Seq& seq, cdouble z, int depth) {
    cdouble acc(0.0, 0.0);
    cdouble ratio = z / seq.r();
    cdouble p(1.0, 0.0);
    for (int k = 1; k <= depth; ++k) {
        p *= ratio;
        acc += seq.scaled_theta(k) / static_cast<double>(k) * p;
    }
    return acc;
}

// Number of fixed points of sigma^k for a permutation in one-line form.
inline std::int64_t fixed_points_of_power(const std::vector<std::int64_t>& perm, std::int64_t k) {
    std::int64_t count = 0;
    for (std::size_t start = 0; start < perm.size(); ++start) {
        std::size_t cur = start;
        for (std::int64_t step = 0; step < k; ++step) cur = static_cast<std::size_t>(perm[cur]);
        if (cur == start) ++count;
    }
    return count;
}

// Dense integer coefficients of prod_k (1 - z^k)^{C_k} up to degree n.
inline std::vector<long long> poly_expand(const std::vector<std::int64_t>& counts, std::int64_t n) {
    std::vector<long long> poly(static_cast<std::size_t>(n) + 1, 0);
    poly[0] = 1;
    for (std::size_t kk = 0; kk < counts.size(); ++kk) {
        auto k = static_cast<std::int64_t>(kk + 1);
        for (std::int64_t c = 0; c < counts[kk]; ++c) {
            // multiply by (1 - z^k) in place
            for (std::int64_t d = n; d >= k; --d) {
                poly[static_cast<std::size_t>(d)] -= poly[static_cast<std::size_t>(d - k)];
            }
        }
    }
    return poly;
}

// det(I - z P) for a permutation matrix P given in one-line form, by
// Gaussian elimination with partial pivoting.
inline cdouble det_i_minus_z_perm(const std::vector<std::int64_t>& perm, cdouble z) {
    std::size_t n = perm.size();
    std::vector<std::vector<cdouble>> m(n, std::vector<cdouble>(n, cdouble(0.0, 0.0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = cdouble(1.0, 0.0);
    // P_{ij} = 1 when perm[j] == i, so (I - zP)_{ij} = delta_ij - z [perm[j] == i]
    for (std::size_t j = 0; j < n; ++j) m[static_cast<std::size_t>(perm[j])][j] -= z;
    cdouble det(1.0, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) == 0.0) return cdouble(0.0, 0.0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            cdouble f = m[r][col] / m[col][col];
            for (std::size_t cc = col; cc < n; ++cc) m[r][cc] -= f * m[col][cc];
        }
    }
    return det;
}

}  // namespace test_util

#endif
