#ifndef EWENSPOLY_WEIGHTS_HPP
#define EWENSPOLY_WEIGHTS_HPP

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ewenspoly/numeric.hpp"

namespace ewenspoly {

enum class Family { kEwens, kScaledEwens, kCustom };

/// A positive cycle weight sequence theta_1, theta_2, ... together with the
/// closed forms of its weighted generating functions
///
///   g(z) = sum_k (theta_k / k) z^k,      G(z) = exp(g(z)),
///
/// both defined on |z| < r where r is the radius of convergence.
///
/// Supported families:
///   Ewens(theta):             theta_k = theta,              r = 1
///   ScaledEwens(theta, rho):  theta_k = theta * rho^-k,     r = rho
///   Custom(prefix, theta, rho): finitely many explicit weights, then a
///                             ScaledEwens(theta, rho) tail, r = rho
class ThetaSequence {
public:
    static ThetaSequence ewens(double theta) {
        require_positive(theta, "theta");
        ThetaSequence s;
        s.family_ = Family::kEwens;
        s.theta_ = theta;
        s.rho_ = 1.0;
        return s;
    }

    static ThetaSequence scaled_ewens(double theta, double rho) {
        require_positive(theta, "theta");
        require_positive(rho, "rho");
        ThetaSequence s;
        s.family_ = Family::kScaledEwens;
        s.theta_ = theta;
        s.rho_ = rho;
        return s;
    }

    static ThetaSequence custom(std::vector<double> prefix, double tail_theta, double tail_rho) {
        require_positive(tail_theta, "theta");
        require_positive(tail_rho, "rho");
        for (double v : prefix) require_positive(v, "prefix weight");
        ThetaSequence s;
        s.family_ = Family::kCustom;
        s.theta_ = tail_theta;
        s.rho_ = tail_rho;
        s.prefix_ = std::move(prefix);
        return s;
    }

    Family family() const { return family_; }

    // theta_k, k >= 1
    double theta(std::int64_t k) const {
        if (k < 1) throw std::invalid_argument("theta: index must be >= 1");
        switch (family_) {
            case Family::kEwens:
                return theta_;
            case Family::kScaledEwens:
                return theta_ * std::pow(rho_, -static_cast<double>(k));
            case Family::kCustom:
                if (static_cast<std::size_t>(k) <= prefix_.size()) return prefix_[static_cast<std::size_t>(k) - 1];
                return theta_ * std::pow(rho_, -static_cast<double>(k));
        }
        return 0.0;
    }

    // theta_k * r^k in closed form. For the Ewens families this is exactly
    // theta with no cancellation, which keeps downstream recursions stable.
    double scaled_theta(std::int64_t k) const {
        if (k < 1) throw std::invalid_argument("scaled_theta: index must be >= 1");
        switch (family_) {
            case Family::kEwens:
            case Family::kScaledEwens:
                return theta_;
            case Family::kCustom:
                if (static_cast<std::size_t>(k) <= prefix_.size())
                    return prefix_[static_cast<std::size_t>(k) - 1] * std::pow(rho_, static_cast<double>(k));
                return theta_;
        }
        return 0.0;
    }

    // g(z) on |z| < r. The boundary is excluded.
    cdouble g(cdouble z) const {
        if (std::abs(z) >= r()) throw std::domain_error("g: |z| must be < r");
        cdouble tail = -theta_ * std::log(cdouble(1.0, 0.0) - z / rho_);
        if (family_ != Family::kCustom) return tail;
        cdouble corr(0.0, 0.0);
        cdouble zk(1.0, 0.0);
        for (std::size_t k = 1; k <= prefix_.size(); ++k) {
            zk *= z;
            double w = prefix_[k - 1] - theta_ * std::pow(rho_, -static_cast<double>(k));
            corr += (w / static_cast<double>(k)) * zk;
        }
        return tail + corr;
    }

    // G(z) = exp(g(z)) on |z| < r.
    cdouble exp_g(cdouble z) const { return std::exp(g(z)); }

    double r() const { return rho_; }

    // Log-class parameters: the sequence satisfies theta_k = theta * r^-k for
    // k beyond the prefix, so gamma = theta and the defect constant is 0.
    double gamma() const { return theta_; }
    double k_const() const { return 0.0; }

    std::size_t prefix_size() const { return prefix_.size(); }

    std::string to_string() const {
        std::ostringstream os;
        os.precision(17);
        switch (family_) {
            case Family::kEwens:
                os << "ewens:" << theta_;
                break;
            case Family::kScaledEwens:
                os << "scaled:" << theta_ << ":" << rho_;
                break;
            case Family::kCustom:
                os << "custom:";
                for (std::size_t i = 0; i < prefix_.size(); ++i) {
                    if (i) os << ",";
                    os << prefix_[i];
                }
                os << "|" << theta_ << ":" << rho_;
                break;
        }
        return os.str();
    }

private:
    ThetaSequence() = default;

    static void require_positive(double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + " must be positive and finite");
        }
    }

    Family family_ = Family::kEwens;
    double theta_ = 1.0;
    double rho_ = 1.0;
    std::vector<double> prefix_;
};

namespace detail {

inline double parse_double_full(std::string_view s, const char* what) {
    try {
        std::size_t pos = 0;
        std::string buf(s);
        double v = std::stod(buf, &pos);
        if (pos != buf.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("invalid number for ") + what + ": '" + std::string(s) + "'");
    }
}

}  // namespace detail

/// Parses a family description:
///   "ewens:THETA"
///   "scaled:THETA:RHO"
///   "custom:T1,...,Tk|THETA:RHO"
inline ThetaSequence parse_family(std::string_view spec) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("family: expected 'name:params'");
    std::string_view name = spec.substr(0, colon);
    std::string_view rest = spec.substr(colon + 1);
    if (name == "ewens") {
        return ThetaSequence::ewens(detail::parse_double_full(rest, "theta"));
    }
    if (name == "scaled") {
        auto c2 = rest.find(':');
        if (c2 == std::string_view::npos) throw std::invalid_argument("family: scaled needs THETA:RHO");
        double theta = detail::parse_double_full(rest.substr(0, c2), "theta");
        double rho = detail::parse_double_full(rest.substr(c2 + 1), "rho");
        return ThetaSequence::scaled_ewens(theta, rho);
    }
    if (name == "custom") {
        auto bar = rest.find('|');
        if (bar == std::string_view::npos) throw std::invalid_argument("family: custom needs T1,...,Tk|THETA:RHO");
        std::string_view list = rest.substr(0, bar);
        std::string_view tail = rest.substr(bar + 1);
        std::vector<double> prefix;
        for (;;) {
            auto comma = list.find(',');
            std::string_view item = comma == std::string_view::npos ? list : list.substr(0, comma);
            prefix.push_back(detail::parse_double_full(item, "prefix weight"));
            if (comma == std::string_view::npos) break;
            list = list.substr(comma + 1);
        }
        auto c2 = tail.find(':');
        if (c2 == std::string_view::npos) throw std::invalid_argument("family: custom tail needs THETA:RHO");
        double theta = detail::parse_double_full(tail.substr(0, c2), "theta");
        double rho = detail::parse_double_full(tail.substr(c2 + 1), "rho");
        return ThetaSequence::custom(std::move(prefix), theta, rho);
    }
    throw std::invalid_argument("family: unknown name '" + std::string(name) + "'");
}

}  // namespace ewenspoly

#endif
