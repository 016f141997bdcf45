#ifndef EWENSPOLY_PARSE_HPP
#define EWENSPOLY_PARSE_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "ewenspoly/numeric.hpp"

namespace ewenspoly {

namespace detail {

inline double parse_signed_decimal(std::string_view s, std::string_view whole) {
    if (s.empty() || s == "+" || s == "-") {
        throw std::invalid_argument("invalid complex literal '" + std::string(whole) + "'");
    }
    try {
        std::size_t pos = 0;
        std::string buf(s);
        double v = std::stod(buf, &pos);
        if (pos != buf.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid complex literal '" + std::string(whole) + "'");
    }
}

// "i", "+i", "-i", "0.4i", "-0.4i"
inline double parse_imag_part(std::string_view s, std::string_view whole) {
    if (s.empty() || s.back() != 'i') {
        throw std::invalid_argument("invalid complex literal '" + std::string(whole) + "'");
    }
    std::string_view body = s.substr(0, s.size() - 1);
    if (body.empty()) return 1.0;
    if (body == "+") return 1.0;
    if (body == "-") return -1.0;
    return parse_signed_decimal(body, whole);
}

}  // namespace detail

/// Parses a complex literal in plain decimal notation: "0.5", "-0.3",
/// "0.3+0.4i", "0.3-0.4i", "0.7i", "-i". No exponent forms, so any
/// '+' or '-' past the leading sign separates real and imaginary parts.
inline cdouble parse_complex(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("invalid complex literal ''");
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == '+' || s[i] == '-') {
            if (split != std::string_view::npos) {
                throw std::invalid_argument("invalid complex literal '" + std::string(s) + "'");
            }
            split = i;
        }
    }
    if (split == std::string_view::npos) {
        if (s.back() == 'i') return cdouble(0.0, detail::parse_imag_part(s, s));
        return cdouble(detail::parse_signed_decimal(s, s), 0.0);
    }
    double re = detail::parse_signed_decimal(s.substr(0, split), s);
    double im = detail::parse_imag_part(s.substr(split), s);
    return cdouble(re, im);
}

}  // namespace ewenspoly

#endif
