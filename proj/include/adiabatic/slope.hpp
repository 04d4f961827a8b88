#pragma once

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace adiabatic {

/// Reduced fraction p/q, q >= 1, gcd(|p|, q) = 1.
struct RationalSlope {
    std::int64_t p = 0;
    std::int64_t q = 1;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    friend bool operator==(const RationalSlope&, const RationalSlope&) = default;
};

/// An irrational slope known through a decimal expansion of at least
/// kMinIrrationalDigits significant digits. `value` is that expansion
/// rounded to the nearest double.
struct IrrationalSlope {
    std::string tag;      // golden, sqrt2, e, pi, cbrt2 or custom
    std::string decimal;  // high-precision expansion
    double value = 0.0;

    friend bool operator==(const IrrationalSlope&, const IrrationalSlope&) = default;
};

inline constexpr int kMinIrrationalDigits = 30;

/// Slope of the Kronecker foliation. Whether the slope is treated as
/// rational is fixed by construction, never inferred from a double.
class Slope {
public:
    Slope() = default;

    static Slope rational(std::int64_t p, std::int64_t q);
    /// golden, sqrt2, e, pi or cbrt2.
    static Slope named(std::string_view tag);
    static Slope custom(std::string_view decimal);

    /// "p/q", a catalog tag, or "dec:<decimal>".
    static Slope parse(std::string_view text);

    bool is_rational() const { return std::holds_alternative<RationalSlope>(kind_); }
    const RationalSlope* as_rational() const { return std::get_if<RationalSlope>(&kind_); }
    const IrrationalSlope* as_irrational() const { return std::get_if<IrrationalSlope>(&kind_); }

    double value() const;
    /// Inverse of parse().
    std::string to_string() const;

    friend bool operator==(const Slope&, const Slope&) = default;

private:
    explicit Slope(RationalSlope r) : kind_(r) {}
    explicit Slope(IrrationalSlope i) : kind_(std::move(i)) {}

    std::variant<RationalSlope, IrrationalSlope> kind_;
};

Slope reduce(std::int64_t p, std::int64_t q);
inline bool is_rational(const Slope& s) { return s.is_rational(); }

void to_json(nlohmann::json& j, const Slope& s);
void from_json(const nlohmann::json& j, Slope& s);

struct Convergent {
    std::int64_t p = 0;
    std::int64_t q = 1;
    friend bool operator==(const Convergent&, const Convergent&) = default;
};

struct ContinuedFraction {
    std::vector<std::int64_t> quotients;   // a0; a1, a2, ...
    std::vector<Convergent> convergents;   // pn/qn after each quotient
    bool terminated = false;               // expansion ended exactly (rational input)
};

/// First `n_terms` partial quotients, or the full expansion when
/// `n_terms` is empty (rational slopes only). Quotients of an irrational
/// slope are certified against the decimal's last-digit uncertainty;
/// throws Error(precision_exhausted) when one cannot be.
ContinuedFraction continued_fraction(const Slope& s, std::optional<std::size_t> n_terms);

/// Rebuilds p/q from partial quotients.
Slope from_quotients(const std::vector<std::int64_t>& quotients);

struct ApproximationGap {
    double error = 0.0;              // |alpha - p/q|
    bool below_inverse_square = false;  // |alpha - p/q| < 1/q^2, certified
};

ApproximationGap approximation_gap(const Slope& s, const Convergent& c);

}  // namespace adiabatic
