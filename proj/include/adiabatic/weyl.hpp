#pragma once

#include "adiabatic/leafwise.hpp"
#include "adiabatic/slope.hpp"
#include "adiabatic/spectrum.hpp"

namespace adiabatic {

struct WeylParams {
    int q = 1;  // transverse dimension
    double lambda = 0.0;
    double quadrature_tolerance = 1e-10;
};

/// (4 pi)^{-q/2} / Gamma(q/2 + 1).
double weyl_coefficient(int q);

/// int_{-inf}^{lambda} (lambda - tau)^{q/2} dF(tau).
///
/// Step functions give the finite sum over jumps below lambda. Smooth
/// densities are integrated after tau = start + (lambda - start) sin^2(theta),
/// which leaves a smooth integrand on [0, pi/2] even when the density or
/// the kernel has a square-root singularity at an endpoint.
double stieltjes_convolve(const DistributionFunction& df, const WeylParams& params);

/// h^{-q} weyl_coefficient(q) stieltjes_convolve(N_F, params).
double weyl_estimate(const Slope& s, AdiabaticScale h, const WeylParams& params);

/// Leading asymptotic term of N_h(lambda) as h -> 0, evaluated directly:
/// h^{-1} lambda / (4 pi) for irrational slopes and, for p/q,
/// h^{-1} sum_{k : 4 pi^2 k^2 / n < lambda} (lambda - 4 pi^2 k^2 / n)^{1/2} / (pi sqrt(n)),
/// n = p^2 + q^2.
double closed_form_asymptotic(const Slope& s, AdiabaticScale h, double lambda);

}  // namespace adiabatic
