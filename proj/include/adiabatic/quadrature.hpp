#pragma once

#include <functional>

namespace adiabatic {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]; bisects the interval
/// with the largest error estimate until the summed estimate is below
/// `abs_tolerance` or `max_intervals` is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tolerance, int max_intervals = 2000);

}  // namespace adiabatic
