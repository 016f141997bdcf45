#ifndef EWENSPOLY_CHARPOLY_HPP
#define EWENSPOLY_CHARPOLY_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ewenspoly/measure.hpp"
#include "ewenspoly/numeric.hpp"

namespace ewenspoly {

/// Value of the reversed characteristic polynomial
///   p_n(z) = det(I - z A_sigma) = prod_k (1 - z^k)^{C_k}
/// at a point of the open unit disk, together with the accumulated log.
struct CharPolyEval {
    cdouble z;
    cdouble value;
    cdouble log_value;  // sum_k C_k Log(1 - z^k), principal branch per factor
};

// For |z| < 1 every factor satisfies Re(1 - z^k) > 0, so the principal log
// is smooth and the product never vanishes.
inline CharPolyEval eval_charpoly(const CycleType& ct, cdouble z) {
    if (std::abs(z) >= 1.0) throw std::domain_error("eval_charpoly: |z| must be < 1");
    CharPolyEval out;
    out.z = z;
    cdouble acc(0.0, 0.0);
    cdouble zk(1.0, 0.0);
    for (std::int64_t k = 1; k <= ct.n; ++k) {
        zk *= z;
        std::int64_t c = ct.counts[static_cast<std::size_t>(k) - 1];
        if (c == 0) continue;
        acc += static_cast<double>(c) * std::log(cdouble(1.0, 0.0) - zk);
    }
    out.log_value = acc;
    out.value = std::exp(acc);
    return out;
}

// Same evaluation driven by the cycle lengths alone, for sampling loops that
// never build a dense count vector. lengths need not be sorted.
inline cdouble log_charpoly_from_cycles(const std::vector<std::int64_t>& lengths, cdouble z) {
    if (std::abs(z) >= 1.0) throw std::domain_error("log_charpoly_from_cycles: |z| must be < 1");
    cdouble acc(0.0, 0.0);
    for (std::int64_t k : lengths) acc += std::log(cdouble(1.0, 0.0) - cpow_int(z, k));
    return acc;
}

// Power sums Tr[A_sigma^k] = sum_{l | k, l <= n} l C_l for k = 1..k_max.
inline std::vector<std::int64_t> traces(const CycleType& ct, std::int64_t k_max) {
    if (k_max < 0) throw std::invalid_argument("traces: need k_max >= 0");
    std::vector<std::int64_t> t(static_cast<std::size_t>(k_max) + 1, 0);
    for (std::int64_t l = 1; l <= std::min(ct.n, k_max); ++l) {
        std::int64_t c = ct.counts[static_cast<std::size_t>(l) - 1];
        if (c == 0) continue;
        for (std::int64_t j = l; j <= k_max; j += l) t[static_cast<std::size_t>(j)] += l * c;
    }
    t.erase(t.begin());
    return t;
}

// First m+1 coefficients of p_n via Newton's identities on the power sums:
//   xi_0 = 1,  xi_k = -(1/k) sum_{j=1..k} Tr[A^j] xi_{k-j}.
inline std::vector<cdouble> secular_coeffs(const CycleType& ct, std::int64_t m) {
    if (m < 0 || m > ct.n) throw std::out_of_range("secular_coeffs: need 0 <= m <= n");
    std::vector<std::int64_t> pw = traces(ct, m);
    std::vector<cdouble> xi(static_cast<std::size_t>(m) + 1);
    xi[0] = cdouble(1.0, 0.0);
    for (std::int64_t k = 1; k <= m; ++k) {
        cdouble acc(0.0, 0.0);
        for (std::int64_t j = 1; j <= k; ++j) {
            acc += static_cast<double>(pw[static_cast<std::size_t>(j) - 1]) * xi[static_cast<std::size_t>(k - j)];
        }
        xi[static_cast<std::size_t>(k)] = -acc / static_cast<double>(k);
    }
    return xi;
}

}  // namespace ewenspoly

#endif
