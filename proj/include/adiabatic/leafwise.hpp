#pragma once

#include "adiabatic/slope.hpp"

#include <json.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace adiabatic {

struct Jump {
    double location = 0.0;
    double height = 0.0;
};

/// Pure-jump distribution function, valid for lambda <= cap.
struct StepFunction {
    std::vector<Jump> jumps;  // locations strictly increasing, heights > 0
    double cap = std::numeric_limits<double>::infinity();
};

/// Absolutely continuous distribution function F(l) = int_{start}^{l} density.
/// `cdf`, when set, is the closed form of that integral. `sqrt_coefficient`
/// marks the law F(l) = c sqrt(l), the only smooth form with a JSON encoding.
struct SmoothDensity {
    std::function<double(double)> density;
    double support_start = 0.0;
    std::function<double(double)> cdf;
    std::optional<double> sqrt_coefficient;
};

/// Non-decreasing, left-continuous, zero far to the left.
class DistributionFunction {
public:
    using Representation = std::variant<StepFunction, SmoothDensity>;

    /// Validates the step invariants; throws Error(invalid_argument).
    explicit DistributionFunction(StepFunction steps);
    explicit DistributionFunction(SmoothDensity density);

    /// F(l) = c sqrt(l) for l > 0, with density c / (2 sqrt(l)).
    static DistributionFunction sqrt_law(double coefficient);

    const Representation& representation() const { return rep_; }
    const StepFunction* steps() const { return std::get_if<StepFunction>(&rep_); }
    const SmoothDensity* smooth() const { return std::get_if<SmoothDensity>(&rep_); }

    /// Upper end of the validity domain (infinite for smooth laws).
    double cap() const;

    /// F(lambda); jumps at lambda itself are excluded. Throws
    /// Error(beyond_cap) past the validity domain.
    double evaluate(double lambda) const;

private:
    Representation rep_;
};

inline double evaluate(const DistributionFunction& df, double lambda) { return df.evaluate(lambda); }

/// {"type":"step","jumps":[[tau,height],...]} or {"type":"sqrt","coefficient":c}.
/// A general smooth density has no encoding; throws Error(invalid_argument).
nlohmann::json to_json(const DistributionFunction& df);
DistributionFunction distribution_from_json(const nlohmann::json& j);

struct LeafSpectrum {
    Slope slope;
    DistributionFunction df;
};

/// Leafwise counting function N_F of the slope.
///
/// Irrational slopes give the closed form N_F(l) = sqrt(l) / pi. A rational
/// slope p/q has closed leaves of length L = sqrt(p^2 + q^2) and
/// N_F(l) = #{k in Z : 4 pi^2 k^2 / L^2 < l} / L, stored as jumps at
/// tau_k = (2 pi k / L)^2 up to `lambda_max`, with height 1/L at k = 0 and
/// 2/L for each pair +-k.
LeafSpectrum leafwise_df(const Slope& s, double lambda_max);

}  // namespace adiabatic
