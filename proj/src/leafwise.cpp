#include "adiabatic/leafwise.hpp"

#include "adiabatic/error.hpp"
#include "adiabatic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace adiabatic {

DistributionFunction::DistributionFunction(StepFunction steps) : rep_(std::move(steps)) {
    const auto& s = std::get<StepFunction>(rep_);
    for (std::size_t i = 0; i < s.jumps.size(); ++i) {
        if (!(s.jumps[i].height > 0.0) || !std::isfinite(s.jumps[i].location))
            throw Error(ErrorKind::invalid_argument, "jump heights must be positive and locations finite");
        if (i > 0 && !(s.jumps[i - 1].location < s.jumps[i].location))
            throw Error(ErrorKind::invalid_argument, "jump locations must be strictly increasing");
    }
    if (!s.jumps.empty() && s.jumps.back().location > s.cap)
        throw Error(ErrorKind::invalid_argument, "jump stored beyond the step function cap");
}

DistributionFunction::DistributionFunction(SmoothDensity density) : rep_(std::move(density)) {
    if (!std::get<SmoothDensity>(rep_).density)
        throw Error(ErrorKind::invalid_argument, "smooth distribution needs a density");
}

DistributionFunction DistributionFunction::sqrt_law(double coefficient) {
    SmoothDensity d;
    d.density = [coefficient](double tau) { return tau > 0.0 ? coefficient / (2.0 * std::sqrt(tau)) : 0.0; };
    d.support_start = 0.0;
    d.cdf = [coefficient](double lambda) { return lambda > 0.0 ? coefficient * std::sqrt(lambda) : 0.0; };
    d.sqrt_coefficient = coefficient;
    return DistributionFunction(std::move(d));
}

double DistributionFunction::cap() const {
    if (const auto* s = steps()) return s->cap;
    return std::numeric_limits<double>::infinity();
}

double DistributionFunction::evaluate(double lambda) const {
    if (const auto* s = steps()) {
        if (lambda > s->cap)
            throw Error(ErrorKind::beyond_cap, "lambda " + std::to_string(lambda) + " beyond step function cap " +
                                                   std::to_string(s->cap));
        double total = 0.0;
        for (const auto& j : s->jumps) {
            if (!(j.location < lambda)) break;
            total += j.height;
        }
        return total;
    }
    const auto& d = std::get<SmoothDensity>(rep_);
    if (!(lambda > d.support_start)) return 0.0;
    if (d.cdf) return d.cdf(lambda);
    // tau = start + (lambda - start) sin^2(theta) absorbs inverse square-root
    // singularities at either end.
    const double width = lambda - d.support_start;
    auto integrand = [&](double theta) {
        const double sn = std::sin(theta);
        const double cs = std::cos(theta);
        return d.density(d.support_start + width * sn * sn) * 2.0 * width * sn * cs;
    };
    return integrate_adaptive(integrand, 0.0, std::numbers::pi / 2, 1e-12).value;
}

nlohmann::json to_json(const DistributionFunction& df) {
    if (const auto* s = df.steps()) {
        nlohmann::json jumps = nlohmann::json::array();
        for (const auto& j : s->jumps) jumps.push_back({j.location, j.height});
        nlohmann::json out = {{"type", "step"}, {"jumps", jumps}};
        if (std::isfinite(s->cap)) out["cap"] = s->cap;
        return out;
    }
    const auto* d = df.smooth();
    if (!d->sqrt_coefficient)
        throw Error(ErrorKind::invalid_argument, "only the square-root law has a JSON encoding");
    return {{"type", "sqrt"}, {"coefficient", *d->sqrt_coefficient}};
}

DistributionFunction distribution_from_json(const nlohmann::json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "sqrt") return DistributionFunction::sqrt_law(j.at("coefficient").get<double>());
    if (type != "step") throw Error(ErrorKind::parse, "unknown distribution type '" + type + "'");
    StepFunction s;
    for (const auto& pair : j.at("jumps")) s.jumps.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    if (j.contains("cap")) s.cap = j.at("cap").get<double>();
    return DistributionFunction(std::move(s));
}

LeafSpectrum leafwise_df(const Slope& s, double lambda_max) {
    const auto* r = s.as_rational();
    if (!r) return {s, DistributionFunction::sqrt_law(1.0 / std::numbers::pi)};
    if (!std::isfinite(lambda_max)) throw Error(ErrorKind::invalid_argument, "step function cap must be finite");

    const double p = static_cast<double>(r->p);
    const double q = static_cast<double>(r->q);
    const double norm = p * p + q * q;
    const double length = std::sqrt(norm);
    StepFunction steps;
    steps.cap = lambda_max;
    for (std::int64_t k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        const double tau = 4.0 * std::numbers::pi * std::numbers::pi * kd * kd / norm;
        if (tau > lambda_max) break;
        steps.jumps.push_back({tau, (k == 0 ? 1.0 : 2.0) / length});
    }
    return {s, DistributionFunction(std::move(steps))};
}

}  // namespace adiabatic
