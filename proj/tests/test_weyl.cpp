#include "adiabatic/error.hpp"
#include "adiabatic/quadrature.hpp"
#include "adiabatic/weyl.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace adiabatic;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("weyl coefficients") {
    CHECK(weyl_coefficient(1) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(weyl_coefficient(2) == doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-15));
    CHECK(weyl_coefficient(3) == doctest::Approx(std::pow(4 * kPi, -1.5) / (0.75 * std::sqrt(kPi))).epsilon(1e-15));
    CHECK(weyl_coefficient(4) == doctest::Approx(1.0 / (32 * kPi * kPi)).epsilon(1e-15));
    CHECK_THROWS_AS(weyl_coefficient(0), Error);
}

TEST_CASE("convolution with the square-root law") {
    const auto df = leafwise_df(Slope::named("golden"), 0.0).df;
    for (double lambda : {0.5, 1.0, 10.0, 30.0, 100.0, 1e4}) {
        // int_0^lambda (lambda - tau)^{1/2} tau^{-1/2} dtau / (2 pi) = lambda / 4
        CHECK(std::abs(stieltjes_convolve(df, {1, lambda, 1e-10}) - lambda / 4) <= 1e-10);
        // q = 2: int_0^lambda (lambda - tau) / (2 pi sqrt(tau)) = 2 lambda^{3/2} / (3 pi)
        CHECK(stieltjes_convolve(df, {2, lambda, 1e-10}) ==
              doctest::Approx(2 * std::pow(lambda, 1.5) / (3 * kPi)).epsilon(1e-12));
    }
    CHECK(stieltjes_convolve(df, {1, 0.0, 1e-10}) == 0.0);
    CHECK(stieltjes_convolve(df, {1, -2.0, 1e-10}) == 0.0);
}

TEST_CASE("convolution with a general density matches Simpson") {
    SmoothDensity d;
    d.density = [](double tau) { return std::exp(-tau); };
    const DistributionFunction df(d);
    for (double lambda : {0.3, 2.0, 9.0}) {
        // u = lambda - tau = s^2 removes the kernel's square root
        const double ref = oracle::simpson(
            [&](double s) { return s * std::exp(-(lambda - s * s)) * 2 * s; }, 0.0, std::sqrt(lambda), 20000);
        CHECK(stieltjes_convolve(df, {1, lambda, 1e-12}) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("convolution with step functions") {
    const double c = 0.37;
    CHECK(stieltjes_convolve(DistributionFunction(StepFunction{{{0.0, c}}}), {1, 9.0, 1e-10}) == doctest::Approx(3 * c));

    const auto leaf = leafwise_df(Slope::rational(1, 2), 30.0).df;
    const double expected = (std::sqrt(30.0) + 2 * std::sqrt(30.0 - 4 * kPi * kPi / 5)) / std::sqrt(5.0);
    CHECK(stieltjes_convolve(leaf, {1, 30.0, 1e-10}) == doctest::Approx(expected).epsilon(1e-15));
    CHECK_THROWS_AS(stieltjes_convolve(leaf, {1, 31.0, 1e-10}), Error);
}

TEST_CASE("convolution is homogeneous in the jump heights and monotone in lambda") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        StepFunction steps;
        double loc = -unit(rng);
        for (int i = 0; i < 20; ++i) {
            steps.jumps.push_back({loc, unit(rng)});
            loc += unit(rng);
        }
        StepFunction scaled = steps;
        const double factor = 10 * unit(rng);
        for (auto& j : scaled.jumps) j.height *= factor;
        const DistributionFunction f(steps), g(scaled);
        double previous = 0.0;
        for (double lambda = -1.0; lambda < loc; lambda += 0.37) {
            for (int q : {1, 2, 3}) {
                const double a = stieltjes_convolve(f, {q, lambda, 1e-10});
                CHECK(stieltjes_convolve(g, {q, lambda, 1e-10}) == doctest::Approx(factor * a).epsilon(1e-13));
            }
            const double v = stieltjes_convolve(f, {1, lambda, 1e-10});
            CHECK(v >= previous);
            previous = v;
        }
    }
}

TEST_CASE("weyl estimate reproduces the leading asymptotics") {
    CHECK(weyl_estimate(Slope::named("golden"), AdiabaticScale(0.01), {1, 30.0, 1e-10}) ==
          doctest::Approx(3000.0 / (4 * kPi)).epsilon(1e-12));
    CHECK(weyl_estimate(Slope::rational(1, 2), AdiabaticScale(0.001), {1, 30.0, 1e-10}) ==
          doctest::Approx(2118.2439268202602).epsilon(1e-13));
    CHECK(weyl_estimate(Slope::named("pi"), AdiabaticScale(0.5), {1, 0.0, 1e-10}) == 0.0);
    CHECK(weyl_estimate(Slope::rational(3, 4), AdiabaticScale(0.5), {1, 0.0, 1e-10}) == 0.0);

    for (const char* tag : {"golden", "sqrt2", "e"}) {
        for (double lambda : {1.0, 10.0, 30.0, 100.0}) {
            const double h = 0.01;
            const double closed = lambda / (4 * kPi * h);
            CHECK(std::abs(weyl_estimate(Slope::named(tag), AdiabaticScale(h), {1, lambda, 1e-10}) - closed) <=
                  1e-8 * lambda / h);
        }
    }
    for (int p = -9; p <= 9; ++p) {
        for (int q = 1; q <= 9; ++q) {
            if (p * p + q * q > 100 || std::gcd(p, q) != 1) continue;
            for (double lambda : {0.5, 17.0, 60.0, 200.0}) {
                const Slope s = Slope::rational(p, q);
                const double w = weyl_estimate(s, AdiabaticScale(0.1), {1, lambda, 1e-10});
                CHECK(w == doctest::Approx(closed_form_asymptotic(s, AdiabaticScale(0.1), lambda)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("adaptive quadrature") {
    const auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.error_estimate <= 1e-12);
    CHECK(integrate_adaptive([](double x) { return std::cos(x); }, 0.0, kPi / 2, 1e-14).value ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0, 1e-10).value == 0.0);
}
