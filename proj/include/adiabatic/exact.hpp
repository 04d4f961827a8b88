#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace adiabatic {

using BigInt = boost::multiprecision::cpp_int;
using Exact = boost::multiprecision::cpp_rational;

/// num / den for any nonzero den (cpp_rational rejects negative denominators).
inline Exact make_exact(BigInt num, BigInt den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Exact(num, den);
}

/// A decimal literal read without rounding. `unit` is one unit in the
/// last written digit, the uncertainty assumed for truncated constants.
struct Decimal {
    Exact value;
    Exact unit;
    int significant_digits = 0;
};

/// Accepts `[+-]digits[.digits][(e|E)[+-]digits]`. Throws Error(parse).
Decimal parse_decimal(std::string_view text);

/// Accepts either `p/q` with integer parts or a decimal literal.
Exact parse_exact(std::string_view text);

std::string to_string(const Exact& value);

}  // namespace adiabatic
