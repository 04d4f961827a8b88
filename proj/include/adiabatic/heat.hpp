#pragma once

#include "adiabatic/leafwise.hpp"
#include "adiabatic/slope.hpp"
#include "adiabatic/spectrum.hpp"

#include <cstdint>

namespace adiabatic {

struct HeatTraceResult {
    enum class Method { spectral, image };

    double value = 0.0;
    double truncation_bound = 0.0;  // bound on the sum of omitted terms
    std::uint64_t terms_used = 0;
    Method method = Method::spectral;
};

const char* to_string(HeatTraceResult::Method method) noexcept;

/// tr exp(-t Delta_h) = sum over (k, l) of exp(-t lambda_kl), truncated to an
/// ellipse whose complement contributes at most `eps`.
HeatTraceResult heat_trace_spectral(const Slope& s, AdiabaticScale h, double t, double eps);

/// The same trace from the periodised Euclidean heat kernel:
/// h^{-1} / (4 pi t) sum over (k, l) of
///   exp[-(k + a l)^2 / (4t(1 + a^2)) - (-a k + l)^2 / (4 t h^2 (1 + a^2))].
HeatTraceResult heat_trace_image(const Slope& s, AdiabaticScale h, double t, double eps);

/// Exponent of the (k, l) image term, without the h^{-1} / (4 pi t) prefactor.
double image_exponent(const Slope& s, AdiabaticScale h, double t, std::int64_t k, std::int64_t l);

/// lim_{h -> 0} h tr exp(-t Delta_h) = 1 / (4 pi t) for irrational slopes.
/// Throws Error(rational_slope) otherwise.
double adiabatic_trace_limit(const Slope& s, double t);

/// Laplace-Stieltjes transform int exp(-lambda t) dF(lambda).
///
/// `growth` is the exponent in |F(lambda)| <= C exp(growth lambda); the
/// transform is rejected with Error(divergence) unless t > growth. Step
/// functions are summed exactly over their stored jumps; smooth densities
/// are integrated numerically.
double laplace_stieltjes(const DistributionFunction& df, double t, double growth = 0.0);

/// N_h sampled below `cap` as a step function (equal eigenvalues merged).
DistributionFunction sampled_distribution(const Slope& s, AdiabaticScale h, double cap);

}  // namespace adiabatic
