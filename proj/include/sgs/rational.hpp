#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "sgs/errors.hpp"

namespace sgs {

using Int = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision rational. All probabilities, rewards and
/// computed values in the library are of this type; there is no floating
/// point on any value-carrying path.
using Q = boost::multiprecision::cpp_rational;

inline Q make_q(long num, long den = 1) { return Q(Int(num), Int(den)); }

/// Renders "num" when the denominator is 1, "num/den" otherwise.
inline std::string to_string(const Q& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Strict parser for exact rational literals: [-]digits or [-]digits/digits.
/// Everything else (floats, exponents, whitespace) is rejected.
inline Q parse_rational(const std::string& text) {
    auto fail = [&] { throw ParseError("not an exact rational literal: '" + text + "'"); };
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && text[i] == '-') {
        neg = true;
        ++i;
    }
    auto digits = [&](std::size_t& pos) -> std::string {
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        return text.substr(start, pos - start);
    };
    std::string num = digits(i);
    if (num.empty()) fail();
    std::string den = "1";
    if (i < text.size()) {
        if (text[i] != '/') fail();
        ++i;
        den = digits(i);
        if (den.empty() || i != text.size()) fail();
    }
    Int n(num), d(den);
    if (d == 0) fail();
    if (neg) n = -n;
    return Q(n, d);
}

inline Q q_pow(const Q& base, unsigned exp) {
    Q acc(1);
    Q b = base;
    while (exp) {
        if (exp & 1u) acc *= b;
        b *= b;
        exp >>= 1u;
    }
    return acc;
}

}  // namespace sgs
