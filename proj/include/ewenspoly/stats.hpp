#ifndef EWENSPOLY_STATS_HPP
#define EWENSPOLY_STATS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ewenspoly/charpoly.hpp"
#include "ewenspoly/limit_field.hpp"
#include "ewenspoly/measure.hpp"
#include "ewenspoly/numeric.hpp"
#include "ewenspoly/rng.hpp"
#include "ewenspoly/series.hpp"
#include "ewenspoly/weights.hpp"

namespace ewenspoly {

// Runs fn(i) for i in [0, count). Replicas are scheduled in blocks over a
// shared counter; fn must derive all randomness from i so the outcome is
// identical for every worker count.
template <class Fn>
inline void for_each_replica(std::int64_t count, unsigned threads, Fn&& fn) {
    if (count <= 0) return;
    if (threads <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    const std::int64_t block = 1024;
    auto worker = [&]() {
        for (;;) {
            std::int64_t begin = next.fetch_add(block);
            if (begin >= count) return;
            std::int64_t end = std::min(begin + block, count);
            for (std::int64_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: need nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            double x = a[i];
            while (i < a.size() && a[i] == x) ++i;
            while (j < b.size() && b[j] == x) ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    // Once one sample is exhausted its CDF sits at 1 and the gap only
    // shrinks as the other catches up, so the loop has already seen the sup.
    return d;
}

namespace detail {

inline double poisson_pmf(std::int64_t k, double lambda) {
    if (k < 0) return 0.0;
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(-lambda + static_cast<double>(k) * std::log(lambda) - std::lgamma(static_cast<double>(k) + 1.0));
}

// Exact total variation between an empirical distribution (counts over N
// draws) and a reference law q: off the observed support the empirical mass
// is zero, so that part contributes 1 - q(observed support).
template <class Key, class Pmf>
inline double tv_empirical_vs_pmf(const std::map<Key, std::int64_t>& counts, std::int64_t n_draws, Pmf&& q) {
    double seen_q = 0.0;
    double sum_abs = 0.0;
    for (const auto& [key, c] : counts) {
        double qx = q(key);
        seen_q += qx;
        sum_abs += std::abs(static_cast<double>(c) / static_cast<double>(n_draws) - qx);
    }
    return 0.5 * (sum_abs + std::max(0.0, 1.0 - seen_q));
}

inline std::pair<cdouble, double> mean_and_se(const std::vector<cdouble>& v) {
    const auto n = static_cast<double>(v.size());
    cdouble mean(0.0, 0.0);
    for (cdouble x : v) mean += x;
    mean /= n;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (cdouble x : v) ss += std::norm(x - mean);
    return {mean, std::sqrt(ss / (n * (n - 1.0)))};
}

inline double sigma_distance(cdouble estimate, cdouble target, double se) {
    double gap = std::abs(estimate - target);
    if (se > 0.0) return gap / se;
    return gap < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Monte Carlo experiment summary. estimate and target are complex in
/// general; real_valued marks experiments whose observable is real so the
/// JSON form can stay a plain number.
struct McReport {
    std::string experiment;
    std::string family;
    std::int64_t n_samples = 0;
    cdouble estimate;
    double std_error = 0.0;
    cdouble target;
    double z_sigma = 0.0;
    std::uint64_t seed = 0;
    bool real_valued = false;
    std::map<std::string, double> extra;
};

struct TvReport {
    std::string experiment;
    std::string family;
    std::int64_t n = 0;
    std::int64_t k_max = 0;
    std::int64_t n_samples = 0;
    double joint_tv = 0.0;
    std::vector<double> marginal_tv;
    std::uint64_t seed = 0;
};

struct KsReport {
    std::string experiment;
    std::string family;
    std::int64_t n = 0;
    cdouble z;
    std::int64_t n_samples = 0;
    double ks_re = 0.0;
    double ks_im = 0.0;
    double ks_log_abs = 0.0;
    std::uint64_t seed = 0;
};

inline nlohmann::json complex_json(cdouble v) { return {{"re", v.real()}, {"im", v.imag()}}; }

inline nlohmann::json to_json(const McReport& r) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["family"] = r.family;
    j["n_samples"] = r.n_samples;
    if (r.real_valued) {
        j["estimate"] = r.estimate.real();
        j["target"] = r.target.real();
    } else {
        j["estimate"] = complex_json(r.estimate);
        j["target"] = complex_json(r.target);
    }
    j["std_error"] = r.std_error;
    j["z_sigma"] = r.z_sigma;
    j["seed"] = r.seed;
    for (const auto& [k, v] : r.extra) j[k] = v;
    return j;
}

inline nlohmann::json to_json(const TvReport& r) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["family"] = r.family;
    j["n"] = r.n;
    j["k_max"] = r.k_max;
    j["n_samples"] = r.n_samples;
    j["joint_tv"] = r.joint_tv;
    j["marginal_tv"] = r.marginal_tv;
    j["seed"] = r.seed;
    return j;
}

inline nlohmann::json to_json(const KsReport& r) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["family"] = r.family;
    j["n"] = r.n;
    j["z"] = complex_json(r.z);
    j["n_samples"] = r.n_samples;
    j["ks_re"] = r.ks_re;
    j["ks_im"] = r.ks_im;
    j["ks_log_abs"] = r.ks_log_abs;
    j["seed"] = r.seed;
    return j;
}

// MC estimate of E |p_n(z)|^2 against the exact series coefficient, with the
// stationary-limit value G(r|z|^2) / (G(rz) G(r conj z)) carried along.
inline McReport mc_second_moment(const ThetaSequence& seq, std::int64_t n, cdouble z, std::int64_t n_samples,
                                 std::uint64_t seed, unsigned threads = 1) {
    if (n < 1) throw std::invalid_argument("mc_second_moment: need n >= 1");
    if (n_samples < 2) throw std::invalid_argument("mc_second_moment: need n_samples >= 2");
    if (std::abs(z) >= 1.0) throw std::domain_error("mc_second_moment: |z| must be < 1");
    const HCoeffs hs = h_coeffs(seq, static_cast<std::size_t>(n));
    std::vector<cdouble> vals(static_cast<std::size_t>(n_samples));
    for_each_replica(n_samples, threads, [&](std::int64_t i) {
        SplitMix64 rng(replica_seed(seed, static_cast<std::uint64_t>(i)));
        cdouble log_p(0.0, 0.0);
        sample_cycles(hs, n, rng, [&](std::int64_t k) {
            log_p += std::log(cdouble(1.0, 0.0) - cpow_int(z, k));
        });
        vals[static_cast<std::size_t>(i)] = cdouble(std::exp(2.0 * log_p.real()), 0.0);
    });
    auto [mean, se] = detail::mean_and_se(vals);
    McReport rep;
    rep.experiment = "second-moment";
    rep.family = seq.to_string();
    rep.n_samples = n_samples;
    rep.estimate = mean;
    rep.std_error = se;
    rep.target = cdouble(second_moment_exact(seq, z, static_cast<std::size_t>(n)), 0.0);
    rep.z_sigma = detail::sigma_distance(rep.estimate, rep.target, se);
    rep.seed = seed;
    rep.real_valued = true;
    double q = std::norm(z);
    cdouble limit = std::exp(seq.g(seq.r() * cdouble(q, 0.0)) - seq.g(seq.r() * z) - seq.g(seq.r() * std::conj(z)));
    rep.extra["limit_second_moment"] = limit.real();
    rep.extra["n"] = static_cast<double>(n);
    return rep;
}

// Empirical joint law of (C_1..C_k_max) at size n against the product of the
// limiting Poisson(theta_l r^l / l) laws, in total variation.
inline TvReport trace_distribution_test(const ThetaSequence& seq, std::int64_t n, std::int64_t k_max,
                                        std::int64_t n_samples, std::uint64_t seed, unsigned threads = 1) {
    if (n < 1) throw std::invalid_argument("trace_distribution_test: need n >= 1");
    if (k_max < 0 || k_max > n) throw std::invalid_argument("trace_distribution_test: need 0 <= k_max <= n");
    if (n_samples < 1) throw std::invalid_argument("trace_distribution_test: need n_samples >= 1");
    TvReport rep;
    rep.experiment = "traces";
    rep.family = seq.to_string();
    rep.n = n;
    rep.k_max = k_max;
    rep.n_samples = n_samples;
    rep.seed = seed;
    if (k_max == 0) return rep;
    const HCoeffs hs = h_coeffs(seq, static_cast<std::size_t>(n));
    std::vector<std::vector<std::int64_t>> tuples(static_cast<std::size_t>(n_samples));
    for_each_replica(n_samples, threads, [&](std::int64_t i) {
        SplitMix64 rng(replica_seed(seed, static_cast<std::uint64_t>(i)));
        std::vector<std::int64_t> c(static_cast<std::size_t>(k_max), 0);
        sample_cycles(hs, n, rng, [&](std::int64_t k) {
            if (k <= k_max) ++c[static_cast<std::size_t>(k) - 1];
        });
        tuples[static_cast<std::size_t>(i)] = std::move(c);
    });
    std::vector<double> lambda(static_cast<std::size_t>(k_max));
    for (std::int64_t l = 1; l <= k_max; ++l) {
        lambda[static_cast<std::size_t>(l) - 1] = seq.scaled_theta(l) / static_cast<double>(l);
    }
    std::map<std::vector<std::int64_t>, std::int64_t> joint;
    for (const auto& t : tuples) ++joint[t];
    rep.joint_tv = detail::tv_empirical_vs_pmf(joint, n_samples, [&](const std::vector<std::int64_t>& x) {
        double q = 1.0;
        for (std::int64_t l = 1; l <= k_max; ++l) {
            q *= detail::poisson_pmf(x[static_cast<std::size_t>(l) - 1], lambda[static_cast<std::size_t>(l) - 1]);
        }
        return q;
    });
    rep.marginal_tv.resize(static_cast<std::size_t>(k_max));
    for (std::int64_t l = 1; l <= k_max; ++l) {
        std::map<std::int64_t, std::int64_t> marg;
        for (const auto& t : tuples) ++marg[t[static_cast<std::size_t>(l) - 1]];
        rep.marginal_tv[static_cast<std::size_t>(l) - 1] = detail::tv_empirical_vs_pmf(
            marg, n_samples,
            [&](std::int64_t x) { return detail::poisson_pmf(x, lambda[static_cast<std::size_t>(l) - 1]); });
    }
    return rep;
}

// KS distance between p_n(z) over n_samples draws and the truncated limit
// field F(z) over as many independent draws, compared through Re, Im and
// log of the absolute value.
inline KsReport charpoly_vs_limit_test(const ThetaSequence& seq, std::int64_t n, cdouble z, std::int64_t n_samples,
                                       std::uint64_t seed, unsigned threads = 1) {
    if (n < 1) throw std::invalid_argument("charpoly_vs_limit_test: need n >= 1");
    if (n_samples < 2) throw std::invalid_argument("charpoly_vs_limit_test: need n_samples >= 2");
    if (std::abs(z) >= 1.0) throw std::domain_error("charpoly_vs_limit_test: |z| must be < 1");
    KsReport rep;
    rep.experiment = "converge";
    rep.family = seq.to_string();
    rep.n = n;
    rep.z = z;
    rep.n_samples = n_samples;
    rep.seed = seed;
    if (z == cdouble(0.0, 0.0)) return rep;  // both sides are the constant 1
    const HCoeffs hs = h_coeffs(seq, static_cast<std::size_t>(n));
    const double delta = std::abs(z);
    const double eps = 1e-8;
    const std::int64_t depth = limit_truncation_depth(seq, delta, eps);
    const auto ns = static_cast<std::size_t>(n_samples);
    std::vector<double> fin_re(ns), fin_im(ns), fin_log(ns);
    std::vector<double> lim_re(ns), lim_im(ns), lim_log(ns);
    for_each_replica(2 * n_samples, threads, [&](std::int64_t i) {
        if (i < n_samples) {
            SplitMix64 rng(replica_seed(seed, static_cast<std::uint64_t>(i)));
            cdouble log_p(0.0, 0.0);
            sample_cycles(hs, n, rng, [&](std::int64_t k) {
                log_p += std::log(cdouble(1.0, 0.0) - cpow_int(z, k));
            });
            cdouble v = std::exp(log_p);
            fin_re[static_cast<std::size_t>(i)] = v.real();
            fin_im[static_cast<std::size_t>(i)] = v.imag();
            fin_log[static_cast<std::size_t>(i)] = log_p.real();
        } else {
            auto j = static_cast<std::size_t>(i - n_samples);
            LimitFieldSample s = sample_limit_with_depth(seq, depth, delta, eps,
                                                         replica_seed(seed, static_cast<std::uint64_t>(i)));
            cdouble v = eval_F(s, z);
            lim_re[j] = v.real();
            lim_im[j] = v.imag();
            lim_log[j] = std::log(std::abs(v));
        }
    });
    rep.ks_re = two_sample_ks(fin_re, lim_re);
    rep.ks_im = two_sample_ks(fin_im, lim_im);
    rep.ks_log_abs = two_sample_ks(fin_log, lim_log);
    return rep;
}

// MC covariance of the truncated log field at (z, w) against the closed
// form. The estimator centers with empirical means, so it is the usual
// (1/(N-1)) sum (f(z)_i - mean)(conj(f(w)_i - mean)).
inline McReport covariance_test(const ThetaSequence& seq, cdouble z, cdouble w, std::int64_t n_samples,
                                std::uint64_t seed, unsigned threads = 1) {
    if (n_samples < 2) throw std::invalid_argument("covariance_test: need n_samples >= 2");
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0) throw std::domain_error("covariance_test: need |z| < 1, |w| < 1");
    McReport rep;
    rep.experiment = "covariance";
    rep.family = seq.to_string();
    rep.n_samples = n_samples;
    rep.seed = seed;
    rep.real_valued = z.imag() == 0.0 && w.imag() == 0.0;
    if (z == cdouble(0.0, 0.0) || w == cdouble(0.0, 0.0)) {
        return rep;  // f(0) = 0, covariance vanishes identically
    }
    const double delta = std::max(std::abs(z), std::abs(w));
    const double eps = 1e-8;
    const std::int64_t depth = limit_truncation_depth(seq, delta, eps);
    const auto m_max = static_cast<std::int64_t>(
        std::clamp(std::ceil(std::log(1e-25) / std::log(delta)), 64.0, 4096.0));
    const auto ns = static_cast<std::size_t>(n_samples);
    std::vector<cdouble> fz(ns), fw(ns);
    for_each_replica(n_samples, threads, [&](std::int64_t i) {
        LimitFieldSample s = sample_limit_with_depth(seq, depth, delta, eps,
                                                     replica_seed(seed, static_cast<std::uint64_t>(i)));
        fz[static_cast<std::size_t>(i)] = eval_f(s, z, m_max);
        fw[static_cast<std::size_t>(i)] = z == w ? fz[static_cast<std::size_t>(i)] : eval_f(s, w, m_max);
    });
    cdouble mz(0.0, 0.0), mw(0.0, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
        mz += fz[i];
        mw += fw[i];
    }
    mz /= static_cast<double>(ns);
    mw /= static_cast<double>(ns);
    std::vector<cdouble> prod(ns);
    for (std::size_t i = 0; i < ns; ++i) prod[i] = (fz[i] - mz) * std::conj(fw[i] - mw);
    auto [pmean, pse] = detail::mean_and_se(prod);
    const double bias = static_cast<double>(ns) / (static_cast<double>(ns) - 1.0);
    rep.estimate = pmean * bias;
    rep.std_error = pse * bias;
    rep.target = cov_f(seq, z, w, 1e-10);
    rep.z_sigma = detail::sigma_distance(rep.estimate, rep.target, rep.std_error);
    rep.extra["truncation_depth"] = static_cast<double>(depth);
    return rep;
}

}  // namespace ewenspoly

#endif
