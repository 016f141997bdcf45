#ifndef EWENSPOLY_SERIES_HPP
#define EWENSPOLY_SERIES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ewenspoly/numeric.hpp"
#include "ewenspoly/weights.hpp"

namespace ewenspoly {

/// Truncated complex power series sum_{k<=N} a_k z^k stored densely.
class PowerSeries {
public:
    explicit PowerSeries(std::size_t order) : coeffs_(order + 1) {}

    explicit PowerSeries(std::vector<cdouble> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("PowerSeries: need at least the constant term");
    }

    static PowerSeries one(std::size_t order) {
        PowerSeries p(order);
        p.coeffs_[0] = cdouble(1.0, 0.0);
        return p;
    }

    std::size_t order() const { return coeffs_.size() - 1; }
    cdouble operator[](std::size_t k) const { return coeffs_.at(k); }
    cdouble& operator[](std::size_t k) { return coeffs_.at(k); }
    const std::vector<cdouble>& coeffs() const { return coeffs_; }

private:
    std::vector<cdouble> coeffs_;
};

// Product truncated to the smaller order.
inline PowerSeries mul(const PowerSeries& a, const PowerSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    PowerSeries out(n);
    for (std::size_t i = 0; i <= n; ++i) {
        cdouble acc(0.0, 0.0);
        for (std::size_t j = 0; j <= i; ++j) acc += a[j] * b[i - j];
        out[i] = acc;
    }
    return out;
}

// exp of a series with zero constant term, by the derivative recursion
//   n E_n = sum_{k=1..n} k a_k E_{n-k}.
inline PowerSeries exp_series(const PowerSeries& a) {
    if (a[0] != cdouble(0.0, 0.0)) throw std::invalid_argument("exp_series: constant term must be 0");
    std::size_t n = a.order();
    PowerSeries e(n);
    e[0] = cdouble(1.0, 0.0);
    for (std::size_t m = 1; m <= n; ++m) {
        cdouble acc(0.0, 0.0);
        for (std::size_t k = 1; k <= m; ++k) acc += static_cast<double>(k) * a[k] * e[m - k];
        e[m] = acc / static_cast<double>(m);
    }
    return e;
}

// log of a series with constant term 1, inverse of the exp recursion:
//   n a_n = n L_n ... solved as n L_n = n a_n - sum_{k=1..n-1} k L_k a_{n-k}.
inline PowerSeries log_series(const PowerSeries& a) {
    if (a[0] != cdouble(1.0, 0.0)) throw std::invalid_argument("log_series: constant term must be 1");
    std::size_t n = a.order();
    PowerSeries l(n);
    for (std::size_t m = 1; m <= n; ++m) {
        cdouble acc = static_cast<double>(m) * a[m];
        for (std::size_t k = 1; k < m; ++k) acc -= static_cast<double>(k) * l[k] * a[m - k];
        l[m] = acc / static_cast<double>(m);
    }
    return l;
}

// Quotient a / b, requires b[0] != 0. Truncated to the smaller order.
inline PowerSeries div(const PowerSeries& a, const PowerSeries& b) {
    if (b[0] == cdouble(0.0, 0.0)) throw std::invalid_argument("div: divisor constant term must be nonzero");
    std::size_t n = std::min(a.order(), b.order());
    PowerSeries q(n);
    for (std::size_t m = 0; m <= n; ++m) {
        cdouble acc = a[m];
        for (std::size_t k = 1; k <= m; ++k) acc -= b[k] * q[m - k];
        q[m] = acc / b[0];
    }
    return q;
}

/// Coefficients of G(z) = sum h_n z^n, stored rescaled as h_n * r^n. The
/// rescaled values grow polynomially for the supported families, so they
/// stay in double range long after raw h_n would overflow (ScaledEwens with
/// rho < 1) or underflow (rho > 1).
struct HCoeffs {
    std::vector<double> scaled;        // scaled[m] = h_m * r^m
    std::vector<double> scaled_theta;  // scaled_theta[k] = theta_k * r^k, [0] unused
    double r = 1.0;
    double log_r = 0.0;

    std::size_t max_order() const { return scaled.size() - 1; }

    double h(std::size_t m) const { return scaled[m] * std::exp(-static_cast<double>(m) * log_r); }

    double log_h(std::size_t m) const {
        return std::log(scaled[m]) - static_cast<double>(m) * log_r;
    }
};

// h_n via the weighted convolution recursion n h_n = sum_k theta_k h_{n-k},
// run in the rescaled variable: n hs_n = sum_k (theta_k r^k) hs_{n-k}.
inline HCoeffs h_coeffs(const ThetaSequence& seq, std::size_t n_max) {
    HCoeffs out;
    out.r = seq.r();
    out.log_r = std::log(seq.r());
    out.scaled.assign(n_max + 1, 0.0);
    out.scaled_theta.assign(n_max + 1, 0.0);
    out.scaled[0] = 1.0;
    for (std::size_t k = 1; k <= n_max; ++k) out.scaled_theta[k] = seq.scaled_theta(static_cast<std::int64_t>(k));
    for (std::size_t n = 1; n <= n_max; ++n) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= n; ++k) acc += out.scaled_theta[k] * out.scaled[n - k];
        double v = acc / static_cast<double>(n);
        if (!std::isfinite(v)) throw std::overflow_error("h_coeffs: coefficient overflow at n=" + std::to_string(n));
        out.scaled[n] = v;
    }
    return out;
}

// E |p_n(z)|^2 under the measure defined by seq, extracted from
//   sum_n h_n E|p_n(z)|^2 t^n = G(t) G(t |z|^2) / (G(t z) G(t conj(z))).
// Everything is carried in the rescaled variable u = t / r, whose series
// have coefficients h_m r^m zeta^m, so only |z| < 1 matters for stability.
inline double second_moment_exact(const ThetaSequence& seq, cdouble z, std::size_t n) {
    if (std::abs(z) >= 1.0) throw std::domain_error("second_moment_exact: |z| must be < 1");
    HCoeffs hs = h_coeffs(seq, n);
    auto geom = [&](cdouble zeta) {
        PowerSeries p(n);
        cdouble pw(1.0, 0.0);
        for (std::size_t m = 0; m <= n; ++m) {
            p[m] = hs.scaled[m] * pw;
            pw *= zeta;
        }
        return p;
    };
    double q = std::norm(z);
    PowerSeries num = mul(geom(cdouble(1.0, 0.0)), geom(cdouble(q, 0.0)));
    PowerSeries den = mul(geom(z), geom(std::conj(z)));
    PowerSeries ratio = div(num, den);
    return (ratio[n] / hs.scaled[n]).real();
}

// Joint characteristic function E exp(i sum_{m<=b} s_m C_m) for the cycle
// counts of a size-n sample, extracted from
//   sum_n h_n E[...] t^n = exp(sum_{m<=b} (theta_m/m)(e^{i s_m}-1) t^m) G(t).
inline cdouble joint_cycle_cf_exact(const ThetaSequence& seq, const std::vector<double>& s, std::size_t n) {
    std::size_t b = s.size();
    if (b > n) throw std::invalid_argument("joint_cycle_cf_exact: need len(s) <= n");
    HCoeffs hs = h_coeffs(seq, n);
    PowerSeries arg(n);
    for (std::size_t m = 1; m <= b; ++m) {
        cdouble phase = std::exp(cdouble(0.0, s[m - 1])) - 1.0;
        arg[m] = (hs.scaled_theta[m] / static_cast<double>(m)) * phase;
    }
    PowerSeries gen(n);
    for (std::size_t m = 0; m <= n; ++m) gen[m] = hs.scaled[m];
    PowerSeries prod = mul(exp_series(arg), gen);
    return prod[n] / hs.scaled[n];
}

}  // namespace ewenspoly

#endif
