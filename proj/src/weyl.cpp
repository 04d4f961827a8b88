#include "adiabatic/weyl.hpp"

#include "adiabatic/error.hpp"
#include "adiabatic/quadrature.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace adiabatic {

namespace {

double transverse_power(double gap, int q) {
    assert(gap >= 0.0);
    return q == 2 ? gap : std::pow(gap, 0.5 * q);
}

}  // namespace

double weyl_coefficient(int q) {
    if (q < 1) throw Error(ErrorKind::invalid_argument, "transverse dimension must be >= 1");
    return std::pow(4.0 * std::numbers::pi, -0.5 * q) / std::tgamma(0.5 * q + 1.0);
}

double stieltjes_convolve(const DistributionFunction& df, const WeylParams& params) {
    if (params.q < 1) throw Error(ErrorKind::invalid_argument, "transverse dimension must be >= 1");
    if (!(params.quadrature_tolerance > 0.0))
        throw Error(ErrorKind::invalid_argument, "quadrature tolerance must be positive");
    const double lambda = params.lambda;

    if (const auto* s = df.steps()) {
        if (lambda > s->cap)
            throw Error(ErrorKind::beyond_cap, "lambda beyond the step function cap");
        double total = 0.0;
        for (const auto& j : s->jumps) {
            if (!(j.location < lambda)) break;
            total += j.height * transverse_power(lambda - j.location, params.q);
        }
        return total;
    }

    const auto& d = *df.smooth();
    if (!(lambda > d.support_start)) return 0.0;
    const double width = lambda - d.support_start;
    // (lambda - tau) = width cos^2, dtau = 2 width sin cos dtheta.
    auto integrand = [&](double theta) {
        const double sn = std::sin(theta);
        const double cs = std::cos(theta);
        const double tau = d.support_start + width * sn * sn;
        return transverse_power(width * cs * cs, params.q) * d.density(tau) * 2.0 * width * sn * cs;
    };
    return integrate_adaptive(integrand, 0.0, std::numbers::pi / 2, params.quadrature_tolerance).value;
}

double weyl_estimate(const Slope& s, AdiabaticScale h, const WeylParams& params) {
    if (!(params.lambda > 0.0)) return 0.0;
    const LeafSpectrum leaf = leafwise_df(s, params.lambda);
    return std::pow(h.value(), -params.q) * weyl_coefficient(params.q) * stieltjes_convolve(leaf.df, params);
}

double closed_form_asymptotic(const Slope& s, AdiabaticScale h, double lambda) {
    if (!(lambda > 0.0)) return 0.0;
    const double inv_h = 1.0 / h.value();
    const auto* r = s.as_rational();
    if (!r) return inv_h * lambda / (4.0 * std::numbers::pi);

    const double p = static_cast<double>(r->p);
    const double q = static_cast<double>(r->q);
    const double n = p * p + q * q;
    const double step = 4.0 * std::numbers::pi * std::numbers::pi / n;
    double sum = std::sqrt(lambda);  // k = 0
    for (std::int64_t k = 1;; ++k) {
        const double kd = static_cast<double>(k);
        const double tau = step * kd * kd;
        if (!(tau < lambda)) break;
        sum += 2.0 * std::sqrt(lambda - tau);  // k and -k
    }
    return inv_h * sum / (std::numbers::pi * std::sqrt(n));
}

}  // namespace adiabatic
