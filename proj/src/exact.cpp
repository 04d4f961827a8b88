#include "adiabatic/exact.hpp"

#include "adiabatic/error.hpp"

#include <cctype>

namespace adiabatic {

namespace {

[[noreturn]] void bad_number(std::string_view text) {
    throw Error(ErrorKind::parse, "not a number: '" + std::string(text) + "'");
}

BigInt pow10(long exponent) {
    BigInt result = 1;
    for (long i = 0; i < exponent; ++i) result *= 10;
    return result;
}

BigInt parse_integer(std::string_view text, std::string_view whole) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    if (i == text.size()) bad_number(whole);
    BigInt value = 0;
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) bad_number(whole);
        value = value * 10 + (text[i] - '0');
    }
    return negative ? BigInt(-value) : value;
}

}  // namespace

Decimal parse_decimal(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';

    BigInt digits = 0;
    long fraction_digits = 0;
    int significant = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            if (seen_point) bad_number(text);
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) break;
        any_digit = true;
        digits = digits * 10 + (c - '0');
        if (seen_point) ++fraction_digits;
        if (significant > 0 || c != '0') ++significant;
    }
    if (!any_digit) bad_number(text);

    long exponent = 0;
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') bad_number(text);
        const BigInt e = parse_integer(text.substr(i + 1), text);
        if (e > 4000 || e < -4000) bad_number(text);
        exponent = e.convert_to<long>();
    }

    const long scale = exponent - fraction_digits;
    Decimal out;
    Exact unit = scale >= 0 ? Exact(pow10(scale)) : Exact(BigInt(1), pow10(-scale));
    out.value = Exact(digits) * unit;
    if (negative) out.value = -out.value;
    out.unit = unit;
    out.significant_digits = significant;
    return out;
}

Exact parse_exact(std::string_view text) {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_integer(text.substr(0, slash), text);
        const BigInt den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) throw Error(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
        return make_exact(num, den);
    }
    return parse_decimal(text).value;
}

std::string to_string(const Exact& value) { return value.str(); }

}  // namespace adiabatic
