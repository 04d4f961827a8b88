#pragma once

#include "adiabatic/exact.hpp"
#include "adiabatic/slope.hpp"

#include <cstdint>
#include <numbers>
#include <vector>

namespace adiabatic {

inline constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

/// h in (0, 1]; scales the transverse part of the metric by h^-2.
class AdiabaticScale {
public:
    explicit AdiabaticScale(double h);
    double value() const { return h_; }

private:
    double h_;
};

/// Threshold lambda, kept in both absolute and reduced (lambda / 4 pi^2) units.
class EnergyWindow {
public:
    enum class Unit { absolute, reduced };

    static EnergyWindow absolute(double lambda);
    static EnergyWindow reduced(double mu);

    double lambda() const { return lambda_; }
    double reduced_value() const { return reduced_; }
    Unit unit() const { return unit_; }

private:
    EnergyWindow(double lambda, double reduced, Unit unit)
        : lambda_(lambda), reduced_(reduced), unit_(unit) {}

    double lambda_;
    double reduced_;
    Unit unit_;
};

struct LatticeCount {
    std::uint64_t count = 0;          // #{(k,l) : lambda_kl < lambda}
    std::uint64_t near_boundary = 0;  // #{|lambda_kl - lambda| <= tol}
    std::uint64_t strips_visited = 0;
};

struct EigenvalueRecord {
    std::int64_t k = 0;
    std::int64_t l = 0;
    double value = 0.0;
};

/// lambda_kl = 4 pi^2 [ (k + a l)^2 + h^2 (-a k + l)^2 ] / (1 + a^2).
/// Rational slopes p/q are evaluated as
/// 4 pi^2 [ (qk + pl)^2 + h^2 (ql - pk)^2 ] / (p^2 + q^2).
double eigenvalue(const Slope& s, AdiabaticScale h, std::int64_t k, std::int64_t l);

struct CountOptions {
    double tie_tolerance = 0.0;
    unsigned threads = 1;
};

/// Strip bound: lattice points of the open ellipse satisfy |k| <= K_k and
/// |l| <= K_l. Strips run over whichever coordinate has the smaller bound.
struct StripBounds {
    std::int64_t k_max = 0;
    std::int64_t l_max = 0;
    bool strips_over_l = false;
};

StripBounds strip_bounds(const Slope& s, AdiabaticScale h, const EnergyWindow& w);

/// Exact N_h(lambda) by counting one strip at a time, each in O(1).
/// Throws Error(overflow) when there would be more than 2^62 strips.
LatticeCount count_exact(const Slope& s, AdiabaticScale h, const EnergyWindow& w,
                         const CountOptions& options = {});

/// Exhaustive double loop over the same bounding box as count_exact.
/// Throws Error(instance_too_large) above kNaiveLimit box points.
LatticeCount count_naive(const Slope& s, AdiabaticScale h, const EnergyWindow& w);

inline constexpr std::uint64_t kNaiveLimit = 100'000'000;
inline constexpr std::uint64_t kEigenvalueListLimit = 10'000'000;

/// Count with integer arithmetic only: rational slope, rational h^2 and
/// rational mu = lambda / 4 pi^2. near_boundary counts exact ties.
LatticeCount count_exact_rational(const Slope& s, const Exact& h_squared, const Exact& mu);

/// All eigenvalues below lambda, ascending, ties ordered by (k, l).
std::vector<EigenvalueRecord> eigenvalues_below(const Slope& s, AdiabaticScale h, const EnergyWindow& w);

}  // namespace adiabatic
