// Command line front end. Every subcommand prints one JSON object per line
// on stdout (or into --out) so runs can be collected and diffed.
//
// Exit codes: 0 success, 1 usage error, 2 numerical or domain error,
// 3 assertion requested with --assert failed.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ewenspoly/ewenspoly.hpp"

namespace {

using nlohmann::json;
using namespace ewenspoly;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssertionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ThetaSequence family_from(const std::string& s) {
    try {
        return parse_family(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

cdouble complex_from(const std::string& s) {
    try {
        return parse_complex(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

class LineSink {
public:
    explicit LineSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
        }
    }

    void write(const json& j) {
        std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
        os << j.dump() << "\n";
        if (!os) throw std::runtime_error("failed writing report line");
    }

private:
    std::ofstream file_;
};

json sparse_counts(const std::vector<std::int64_t>& counts) {
    json arr = json::array();
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0) arr.push_back({static_cast<std::int64_t>(k + 1), counts[k]});
    }
    return arr;
}

struct CommonOpts {
    std::string family = "ewens:1.0";
    std::uint64_t seed = 42;
    std::string out;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_threads = true, bool with_out = true) {
    cmd->add_option("--family", o.family, "weight family: ewens:T | scaled:T:R | custom:T1,...,Tk|T:R");
    cmd->add_option("--seed", o.seed, "base RNG seed");
    if (with_out) cmd->add_option("--out", o.out, "write report lines to this file instead of stdout");
    if (with_threads) cmd->add_option("--threads", o.threads, "worker threads (result independent of the count)");
}

void run_sample(const CommonOpts& c, std::int64_t n, std::int64_t samples) {
    ThetaSequence seq = family_from(c.family);
    LineSink sink(c.out);
    HCoeffs hs = h_coeffs(seq, static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < samples; ++i) {
        std::uint64_t s = replica_seed(c.seed, static_cast<std::uint64_t>(i));
        PermutationSample ps = sample_cycle_type(seq, n, s, hs);
        json j;
        j["experiment"] = "sample";
        j["family"] = seq.to_string();
        j["n"] = n;
        j["seed"] = s;
        j["num_cycles"] = ps.type.num_cycles();
        j["counts"] = sparse_counts(ps.type.counts);
        sink.write(j);
    }
}

void run_second_moment(const CommonOpts& c, std::int64_t n, const std::string& z_str, std::int64_t samples) {
    ThetaSequence seq = family_from(c.family);
    cdouble z = complex_from(z_str);
    LineSink sink(c.out);
    sink.write(to_json(mc_second_moment(seq, n, z, samples, c.seed, c.threads)));
}

void run_traces(const CommonOpts& c, std::int64_t n, std::int64_t k_max, std::int64_t samples) {
    ThetaSequence seq = family_from(c.family);
    LineSink sink(c.out);
    sink.write(to_json(trace_distribution_test(seq, n, k_max, samples, c.seed, c.threads)));
}

void run_limit_sample(const CommonOpts& c, double delta, double eps, std::int64_t samples,
                      const std::string& z_str) {
    ThetaSequence seq = family_from(c.family);
    cdouble z(0.0, 0.0);
    bool has_z = !z_str.empty();
    if (has_z) z = complex_from(z_str);
    LineSink sink(c.out);
    std::int64_t depth = limit_truncation_depth(seq, delta, eps);
    for (std::int64_t i = 0; i < samples; ++i) {
        std::uint64_t s = replica_seed(c.seed, static_cast<std::uint64_t>(i));
        LimitFieldSample ls = sample_limit_with_depth(seq, depth, delta, eps, s);
        json j;
        j["experiment"] = "limit-sample";
        j["family"] = seq.to_string();
        j["delta"] = delta;
        j["eps"] = eps;
        j["depth"] = depth;
        j["seed"] = s;
        j["y"] = sparse_counts(ls.y);
        if (has_z) {
            j["z"] = complex_json(z);
            j["F"] = complex_json(eval_F(ls, z));
        }
        sink.write(j);
    }
}

void run_covariance(const CommonOpts& c, const std::string& z_str, const std::string& w_str,
                    std::int64_t samples) {
    ThetaSequence seq = family_from(c.family);
    cdouble z = complex_from(z_str);
    cdouble w = complex_from(w_str);
    LineSink sink(c.out);
    sink.write(to_json(covariance_test(seq, z, w, samples, c.seed, c.threads)));
}

void run_converge(const CommonOpts& c, std::int64_t n, const std::string& z_str, std::int64_t samples,
                  bool do_assert) {
    ThetaSequence seq = family_from(c.family);
    cdouble z = complex_from(z_str);
    LineSink sink(c.out);
    KsReport rep = charpoly_vs_limit_test(seq, n, z, samples, c.seed, c.threads);
    sink.write(to_json(rep));
    const double bound = 0.05;
    if (do_assert && (rep.ks_re >= bound || rep.ks_im >= bound || rep.ks_log_abs >= bound)) {
        throw AssertionFailure("converge: KS distance above " + std::to_string(bound));
    }
}

void run_portrait(const CommonOpts& c, std::int64_t n, std::int64_t grid, bool limit_mode, bool csv,
                  const std::string& out_path) {
    ThetaSequence seq = family_from(c.family);
    if (out_path.empty()) throw UsageError("portrait: --out is required");
    std::vector<std::pair<std::int64_t, std::int64_t>> factors;
    json j;
    j["experiment"] = "portrait";
    j["family"] = seq.to_string();
    j["grid"] = grid;
    j["seed"] = c.seed;
    if (limit_mode) {
        const double eps = 1e-6;
        LimitFieldSample ls = sample_limit(seq, kGridExtent, eps, c.seed);
        for (std::size_t l = 0; l < ls.y.size(); ++l) {
            if (ls.y[l] > 0) factors.emplace_back(static_cast<std::int64_t>(l + 1), ls.y[l]);
        }
        j["mode"] = "limit";
        j["depth"] = ls.depth;
    } else {
        PermutationSample ps = sample_cycle_type(seq, n, c.seed);
        for (std::size_t k = 0; k < ps.type.counts.size(); ++k) {
            if (ps.type.counts[k] > 0) factors.emplace_back(static_cast<std::int64_t>(k + 1), ps.type.counts[k]);
        }
        j["mode"] = "finite";
        j["n"] = n;
    }
    std::vector<cdouble> values = evaluate_grid(grid, c.threads, factors);
    if (csv) {
        write_grid_csv(out_path, grid, values);
        j["format"] = "csv";
    } else {
        write_ppm(out_path, grid, colorize(values));
        j["format"] = "ppm";
    }
    j["out"] = out_path;
    std::cout << j.dump() << "\n";
}

void run_enumerate_check(const CommonOpts& c, std::int64_t n, bool do_assert) {
    ThetaSequence seq = family_from(c.family);
    if (n < 1 || n > 12) throw std::length_error("enumerate-check: need 1 <= n <= 12");
    LineSink sink(c.out);
    HCoeffs hs = h_coeffs(seq, static_cast<std::size_t>(n));
    std::vector<CycleType> types = enumerate_types(n);
    std::vector<double> probs(types.size());
    double total = 0.0;
    for (std::size_t t = 0; t < types.size(); ++t) {
        probs[t] = cycle_type_prob(seq, types[t], hs);
        total += probs[t];
    }
    const std::vector<cdouble> zs = {{0.0, 0.0}, {0.5, 0.0}, {-0.3, 0.0}, {0.3, 0.4}, {0.0, 0.7}};
    double err_sm = 0.0;
    for (cdouble z : zs) {
        double by_enum = 0.0;
        for (std::size_t t = 0; t < types.size(); ++t) by_enum += probs[t] * std::norm(eval_charpoly(types[t], z).value);
        err_sm = std::max(err_sm, std::abs(by_enum - second_moment_exact(seq, z, static_cast<std::size_t>(n))));
    }
    double err_cf = 0.0;
    SplitMix64 rng(9001);
    const std::int64_t b = std::min<std::int64_t>(3, n);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> s(static_cast<std::size_t>(b));
        for (auto& v : s) v = (2.0 * rng.next_unit() - 1.0) * M_PI;
        cdouble by_enum(0.0, 0.0);
        for (std::size_t t = 0; t < types.size(); ++t) {
            double phase = 0.0;
            for (std::int64_t m = 1; m <= b; ++m) {
                phase += s[static_cast<std::size_t>(m) - 1] *
                         static_cast<double>(types[t].counts[static_cast<std::size_t>(m) - 1]);
            }
            by_enum += probs[t] * std::exp(cdouble(0.0, phase));
        }
        err_cf = std::max(err_cf, std::abs(by_enum - joint_cycle_cf_exact(seq, s, static_cast<std::size_t>(n))));
    }
    json j;
    j["experiment"] = "enumerate-check";
    j["family"] = seq.to_string();
    j["n"] = n;
    j["prob_normalization_err"] = std::abs(total - 1.0);
    j["max_err_second_moment"] = err_sm;
    j["max_err_joint_cf"] = err_cf;
    sink.write(j);
    const double bound = 1e-10;
    if (do_assert && (err_sm > bound || err_cf > bound || std::abs(total - 1.0) > bound)) {
        throw AssertionFailure("enumerate-check: error above " + std::to_string(bound));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Ewens permutations: characteristic polynomials, exact series and the Poisson limit field"};
    app.require_subcommand(1);

    CommonOpts c_sample, c_sm, c_tr, c_ls, c_cov, c_conv, c_port, c_enum;
    std::int64_t n = 0, samples = 1, k_max = 5, grid = 512;
    std::string z_str, w_str;
    double delta = 0.5, eps = 1e-8;
    bool do_assert = false, limit_mode = false, csv = false;
    std::string port_out;

    auto* sample = app.add_subcommand("sample", "draw cycle types from the measure");
    add_common(sample, c_sample, false);
    sample->add_option("--n", n, "permutation size")->required();
    sample->add_option("--samples", samples, "number of draws");

    auto* sm = app.add_subcommand("second-moment", "MC E|p_n(z)|^2 against the exact series value");
    add_common(sm, c_sm);
    std::int64_t sm_n = 0, sm_samples = 10000;
    std::string sm_z;
    sm->add_option("--n", sm_n, "permutation size")->required();
    sm->add_option("--z", sm_z, "evaluation point, |z| < 1")->required();
    sm->add_option("--samples", sm_samples, "number of draws");

    auto* tr = app.add_subcommand("traces", "small cycle counts against their Poisson limit (TV distance)");
    add_common(tr, c_tr);
    std::int64_t tr_n = 0, tr_samples = 10000;
    tr->add_option("--n", tr_n, "permutation size")->required();
    tr->add_option("--kmax", k_max, "compare C_1..C_kmax");
    tr->add_option("--samples", tr_samples, "number of draws");

    auto* ls = app.add_subcommand("limit-sample", "draw truncated limit field samples");
    add_common(ls, c_ls, false);
    std::int64_t ls_samples = 1;
    std::string ls_z;
    ls->add_option("--delta", delta, "disk radius the sample must cover, in (0,1)");
    ls->add_option("--eps", eps, "tail budget for the truncation depth");
    ls->add_option("--samples", ls_samples, "number of draws");
    ls->add_option("--z", ls_z, "also report F(z) at this point");

    auto* cov = app.add_subcommand("covariance", "MC covariance of the log field against the closed form");
    add_common(cov, c_cov);
    std::int64_t cov_samples = 100000;
    cov->add_option("--z", z_str, "first point, |z| < 1")->required();
    cov->add_option("--w", w_str, "second point, |w| < 1")->required();
    cov->add_option("--samples", cov_samples, "number of draws");

    auto* conv = app.add_subcommand("converge", "KS distance between p_n(z) and the limit field at z");
    add_common(conv, c_conv);
    std::int64_t conv_n = 0, conv_samples = 10000;
    std::string conv_z;
    conv->add_option("--n", conv_n, "permutation size")->required();
    conv->add_option("--z", conv_z, "evaluation point, |z| < 1")->required();
    conv->add_option("--samples", conv_samples, "draws per side");
    conv->add_flag("--assert", do_assert, "exit 3 if any KS distance is >= 0.05");

    auto* port = app.add_subcommand("portrait", "phase portrait of one sampled polynomial (PPM or CSV)");
    add_common(port, c_port, true, false);
    std::int64_t port_n = 1000;
    port->add_option("--n", port_n, "permutation size (finite mode)");
    port->add_option("--grid", grid, "image side length, >= 16");
    port->add_option("--out", port_out, "output path")->required();
    port->add_flag("--limit", limit_mode, "render a limit field sample instead of a finite n sample");
    port->add_flag("--csv", csv, "write grid values as CSV instead of a PPM image");

    auto* en = app.add_subcommand("enumerate-check", "exhaustive enumeration against series extraction");
    add_common(en, c_enum, false);
    std::int64_t en_n = 0;
    bool en_assert = false;
    en->add_option("--n", en_n, "permutation size, at most 12")->required();
    en->add_flag("--assert", en_assert, "exit 3 if any error exceeds 1e-10");

    try {
        app.parse(argc, argv);
        if (sample->parsed()) run_sample(c_sample, n, samples);
        if (sm->parsed()) run_second_moment(c_sm, sm_n, sm_z, sm_samples);
        if (tr->parsed()) run_traces(c_tr, tr_n, k_max, tr_samples);
        if (ls->parsed()) run_limit_sample(c_ls, delta, eps, ls_samples, ls_z);
        if (cov->parsed()) run_covariance(c_cov, z_str, w_str, cov_samples);
        if (conv->parsed()) run_converge(c_conv, conv_n, conv_z, conv_samples, do_assert);
        if (port->parsed()) run_portrait(c_port, port_n, grid, limit_mode, csv, port_out);
        if (en->parsed()) run_enumerate_check(c_enum, en_n, en_assert);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const AssertionFailure& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
