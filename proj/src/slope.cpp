#include "adiabatic/slope.hpp"

#include "adiabatic/error.hpp"
#include "adiabatic/exact.hpp"

#include <array>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace adiabatic {

namespace {

struct CatalogEntry {
    std::string_view tag;
    std::string_view decimal;
};

constexpr std::array<CatalogEntry, 5> kCatalog{{
    {"golden", "1.618033988749894848204586834365638117720"},
    {"sqrt2", "1.414213562373095048801688724209698078570"},
    {"e", "2.718281828459045235360287471352662497757"},
    {"pi", "3.141592653589793238462643383279502884197"},
    {"cbrt2", "1.259921049894873164767210607278228350570"},
}};

double nearest_double(const std::string& decimal) {
    // strtod rounds to nearest; the "C" locale is the program default.
    return std::strtod(decimal.c_str(), nullptr);
}

std::int64_t parse_int64(std::string_view text, std::string_view whole) {
    try {
        const BigInt v = parse_exact(text).convert_to<BigInt>();
        if (Exact(v) != parse_exact(text) || v > std::numeric_limits<std::int64_t>::max() ||
            v < std::numeric_limits<std::int64_t>::min() + 1)
            throw Error(ErrorKind::parse, "");
        return v.convert_to<std::int64_t>();
    } catch (const Error&) {
        throw Error(ErrorKind::parse, "bad integer in slope '" + std::string(whole) + "'");
    }
}

Exact exact_value(const RationalSlope& r) { return Exact(BigInt(r.p), BigInt(r.q)); }

BigInt floor_of(const Exact& x) {
    BigInt n = numerator(x);
    BigInt d = denominator(x);
    BigInt f = n / d;  // truncates toward zero
    if (n < 0 && f * d != n) f -= 1;
    return f;
}

class ConvergentBuilder {
public:
    // Returns false when the next convergent would leave int64.
    bool push(const BigInt& a, ContinuedFraction& out) {
        const BigInt p = a * p1_ + p2_;
        const BigInt q = a * q1_ + q2_;
        constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
        if (abs(p) > kMax || q > kMax || abs(a) > kMax) return false;
        out.quotients.push_back(a.convert_to<std::int64_t>());
        out.convergents.push_back({p.convert_to<std::int64_t>(), q.convert_to<std::int64_t>()});
        p2_ = p1_;
        q2_ = q1_;
        p1_ = p;
        q1_ = q;
        return true;
    }

private:
    BigInt p1_ = 1, q1_ = 0, p2_ = 0, q2_ = 1;
};

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_slope: return "invalid-slope";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::precision_exhausted: return "precision-exhausted";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::instance_too_large: return "instance-too-large";
    case ErrorKind::too_many_eigenvalues: return "too-many-eigenvalues";
    case ErrorKind::beyond_cap: return "lambda-beyond-cap";
    case ErrorKind::rational_slope: return "rational-slope";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::parse: return "parse";
    }
    return "unknown";
}

Slope reduce(std::int64_t p, std::int64_t q) {
    if (q == 0) throw Error(ErrorKind::invalid_slope, "slope denominator is zero");
    if (p == std::numeric_limits<std::int64_t>::min() || q == std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorKind::invalid_slope, "slope component out of range");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    const std::int64_t g = std::gcd(p, q);  // gcd(0, q) = q
    return Slope::rational(p / g, q / g);
}

Slope Slope::rational(std::int64_t p, std::int64_t q) {
    if (q <= 0 || std::gcd(p, q) != 1) return reduce(p, q);
    return Slope(RationalSlope{p, q});
}

Slope Slope::named(std::string_view tag) {
    for (const auto& entry : kCatalog) {
        if (entry.tag == tag) {
            std::string decimal(entry.decimal);
            return Slope(IrrationalSlope{std::string(tag), decimal, nearest_double(decimal)});
        }
    }
    throw Error(ErrorKind::invalid_slope, "unknown slope tag '" + std::string(tag) + "'");
}

Slope Slope::custom(std::string_view decimal) {
    Decimal parsed;
    try {
        parsed = parse_decimal(decimal);
    } catch (const Error& e) {
        throw Error(ErrorKind::invalid_slope, e.what());
    }
    if (parsed.significant_digits < kMinIrrationalDigits)
        throw Error(ErrorKind::invalid_slope,
                    "custom irrational slope needs at least " + std::to_string(kMinIrrationalDigits) +
                        " significant digits");
    std::string text(decimal);
    return Slope(IrrationalSlope{"custom", text, nearest_double(text)});
}

Slope Slope::parse(std::string_view text) {
    if (text.starts_with("dec:")) return custom(text.substr(4));
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto p = parse_int64(text.substr(0, slash), text);
        const auto q = parse_int64(text.substr(slash + 1), text);
        if (q == 0) throw Error(ErrorKind::invalid_slope, "slope denominator is zero");
        return reduce(p, q);
    }
    for (const auto& entry : kCatalog)
        if (entry.tag == text) return named(text);
    throw Error(ErrorKind::parse, "cannot parse slope '" + std::string(text) + "'");
}

double Slope::value() const {
    if (const auto* r = as_rational()) return r->value();
    return std::get<IrrationalSlope>(kind_).value;
}

std::string Slope::to_string() const {
    if (const auto* r = as_rational()) return std::to_string(r->p) + "/" + std::to_string(r->q);
    const auto& i = std::get<IrrationalSlope>(kind_);
    return i.tag == "custom" ? "dec:" + i.decimal : i.tag;
}

void to_json(nlohmann::json& j, const Slope& s) {
    if (const auto* r = s.as_rational()) {
        j = {{"kind", "rational"}, {"p", r->p}, {"q", r->q}};
    } else {
        const auto* i = s.as_irrational();
        j = {{"kind", "irrational"}, {"tag", i->tag}, {"value", i->decimal}};
    }
}

void from_json(const nlohmann::json& j, Slope& s) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rational") {
        s = reduce(j.at("p").get<std::int64_t>(), j.at("q").get<std::int64_t>());
    } else if (kind == "irrational") {
        const auto tag = j.at("tag").get<std::string>();
        s = tag == "custom" ? Slope::custom(j.at("value").get<std::string>()) : Slope::named(tag);
    } else {
        throw Error(ErrorKind::invalid_slope, "unknown slope kind '" + kind + "'");
    }
}

ContinuedFraction continued_fraction(const Slope& s, std::optional<std::size_t> n_terms) {
    ContinuedFraction out;
    ConvergentBuilder builder;

    if (const auto* r = s.as_rational()) {
        // Euclid on (p, q); terminates after at most ~90 steps for int64.
        std::int64_t num = r->p;
        std::int64_t den = r->q;
        const std::size_t limit = n_terms.value_or(std::numeric_limits<std::size_t>::max());
        while (out.quotients.size() < limit) {
            std::int64_t a = num / den;
            if (num % den != 0 && num < 0) --a;
            builder.push(a, out);
            const std::int64_t rem = num - a * den;
            if (rem == 0) {
                out.terminated = true;
                break;
            }
            num = den;
            den = rem;
        }
        return out;
    }

    if (!n_terms)
        throw Error(ErrorKind::invalid_argument, "full expansion requested for an irrational slope");

    // Run Euclid on both ends of [x - u, x + u]; a quotient is certified
    // when both ends agree on it.
    const Decimal d = parse_decimal(s.as_irrational()->decimal);
    Exact lo = d.value - d.unit;
    Exact hi = d.value + d.unit;
    for (std::size_t n = 0; n < *n_terms; ++n) {
        const BigInt a_lo = floor_of(lo);
        const BigInt a_hi = floor_of(hi);
        if (a_lo != a_hi || Exact(a_lo) == lo)
            throw Error(ErrorKind::precision_exhausted,
                        "partial quotient " + std::to_string(n) + " of " + s.to_string() +
                            " is not determined by the stored digits");
        if (!builder.push(a_lo, out))
            throw Error(ErrorKind::precision_exhausted,
                        "convergent " + std::to_string(n) + " exceeds the 64-bit range");
        // x -> 1/(x - a) reverses the order of the interval ends.
        Exact next_lo = 1 / (hi - Exact(a_hi));
        Exact next_hi = 1 / (lo - Exact(a_lo));
        lo = std::move(next_lo);
        hi = std::move(next_hi);
    }
    return out;
}

Slope from_quotients(const std::vector<std::int64_t>& quotients) {
    if (quotients.empty()) throw Error(ErrorKind::invalid_argument, "empty continued fraction");
    Exact x(quotients.back());
    for (auto it = quotients.rbegin() + 1; it != quotients.rend(); ++it) x = Exact(*it) + 1 / x;
    const BigInt p = numerator(x);
    const BigInt q = denominator(x);
    constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
    if (abs(p) > kMax || q > kMax) throw Error(ErrorKind::overflow, "continued fraction value exceeds int64");
    return reduce(p.convert_to<std::int64_t>(), q.convert_to<std::int64_t>());
}

ApproximationGap approximation_gap(const Slope& s, const Convergent& c) {
    if (c.q <= 0) throw Error(ErrorKind::invalid_argument, "convergent denominator must be positive");
    const Exact approx(BigInt(c.p), BigInt(c.q));
    const Exact bound = Exact(BigInt(1), BigInt(c.q) * c.q);
    ApproximationGap gap;
    if (const auto* r = s.as_rational()) {
        const Exact diff = abs(exact_value(*r) - approx);
        gap.error = diff.convert_to<double>();
        gap.below_inverse_square = diff < bound;
        return gap;
    }
    const Decimal d = parse_decimal(s.as_irrational()->decimal);
    const Exact diff = abs(d.value - approx);
    gap.error = diff.convert_to<double>();
    gap.below_inverse_square = diff + d.unit < bound;
    return gap;
}

}  // namespace adiabatic
