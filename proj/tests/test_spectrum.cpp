#include "adiabatic/error.hpp"
#include "adiabatic/spectrum.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace adiabatic;

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t count(const Slope& s, double h, double lambda, double tol = 0.0) {
    return count_exact(s, AdiabaticScale(h), EnergyWindow::absolute(lambda), {tol, 1}).count;
}

std::vector<Slope> test_slopes() {
    return {Slope::rational(0, 1), Slope::rational(1, 1),   Slope::rational(1, 2), Slope::rational(2, 3),
            Slope::rational(5, 7), Slope::rational(-3, 2), Slope::rational(7, 2), Slope::named("golden"),
            Slope::named("sqrt2"), Slope::named("pi")};
}

}  // namespace

TEST_CASE("eigenvalue formula") {
    for (const Slope& s : test_slopes()) CHECK(eigenvalue(s, AdiabaticScale(0.37), 0, 0) == 0.0);
    CHECK(eigenvalue(Slope::rational(1, 1), AdiabaticScale(1.0), 1, 0) == doctest::Approx(4 * kPi * kPi));
    CHECK(eigenvalue(Slope::rational(0, 1), AdiabaticScale(0.5), 0, 1) == doctest::Approx(kPi * kPi));
    // Rational slopes vanish on the leaf direction only: (k, l) = (-p, q) for p/q... (q k + p l = 0)
    // gives a pure transverse mode, and never both parts at once.
    CHECK(eigenvalue(Slope::rational(2, 3), AdiabaticScale(0.1), -2, 3) > 0.0);
    // Agreement with the long double formula.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> idx(-50, 50);
    for (const Slope& s : test_slopes()) {
        for (int i = 0; i < 100; ++i) {
            const int k = idx(rng), l = idx(rng);
            const double h = 0.05 + 0.01 * (i % 90);
            const long double ref = oracle::eigenvalue(s.value(), h, k, l);
            CHECK(eigenvalue(s, AdiabaticScale(h), k, l) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
        }
    }
}

TEST_CASE("count_exact examples") {
    CHECK(count(Slope::rational(0, 1), 0.01, 1.0) == 31);
    for (const Slope& s : test_slopes()) {
        CHECK(count(s, 0.3, 0.0) == 0);
        CHECK(count(s, 0.3, 1e-9) == 1);
        CHECK(count(s, 0.3, -5.0) == 0);
    }
    CHECK(count(Slope::rational(1, 1), 1.0, 4 * kPi * kPi * 2.5) == 9);
    // Frozen from a 30-digit brute-force enumeration.
    CHECK(count(Slope::rational(2, 3), 0.2, 100.0) == 43);
    CHECK(count(Slope::named("golden"), 0.5, 50.0) == 7);
    CHECK(count(Slope::rational(1, 2), 0.001, 30.0) == 2119);
    CHECK(count(Slope::named("golden"), 0.001, 30.0) == 2389);
}

TEST_CASE("count_exact agrees with the naive count and a long double brute force") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> hdist(0.05, 1.0);
    std::uniform_real_distribution<double> ldist(0.0, 400.0);
    const auto slopes = test_slopes();
    for (int i = 0; i < 300; ++i) {
        const Slope& s = slopes[i % slopes.size()];
        const double h = hdist(rng);
        const double lambda = ldist(rng);
        const auto w = EnergyWindow::absolute(lambda);
        const auto fast = count_exact(s, AdiabaticScale(h), w);
        const auto slow = count_naive(s, AdiabaticScale(h), w);
        CHECK(fast.count == slow.count);
        if (fast.near_boundary == 0) {
            const auto box = static_cast<std::int64_t>(std::sqrt(lambda) / (2 * kPi) * (1 + std::abs(s.value())) / h) + 2;
            CHECK(fast.count == oracle::brute_count(s.value(), h, lambda, box));
        }
    }
    CHECK(count_naive(Slope::rational(0, 1), AdiabaticScale(1.0), EnergyWindow::absolute(1.0)).count == 1);
    CHECK_THROWS_AS(count_naive(Slope::named("golden"), AdiabaticScale(1e-4), EnergyWindow::absolute(1e4)), Error);
}

TEST_CASE("isotropy at h = 1") {
    for (double lambda : {1.0, 40.0, 100.0, 200.0, 1000.0}) {
        const double mu = lambda / (4 * kPi * kPi);
        std::uint64_t euclid = 0;
        for (int k = -20; k <= 20; ++k)
            for (int l = -20; l <= 20; ++l) euclid += (k * k + l * l < mu);
        for (const Slope& s : test_slopes()) CHECK(count(s, 1.0, lambda) == euclid);
    }
}

TEST_CASE("count monotonicity and symmetry") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ldist(0.0, 300.0);
    for (const Slope& s : test_slopes()) {
        std::vector<double> lambdas(25);
        for (auto& l : lambdas) l = ldist(rng);
        std::sort(lambdas.begin(), lambdas.end());
        std::uint64_t previous = 0;
        for (double l : lambdas) {
            const auto n = count(s, 0.2, l);
            CHECK(n >= previous);
            previous = n;
            if (l > 0) CHECK((n - 1) % 2 == 0);
        }
        previous = std::numeric_limits<std::uint64_t>::max();
        for (double h : {0.01, 0.03, 0.1, 0.3, 1.0}) {
            const auto n = count(s, h, 150.0);
            CHECK(n <= previous);
            previous = n;
        }
    }
}

TEST_CASE("strip count stays within 2K + 1") {
    for (const Slope& s : test_slopes()) {
        for (double h : {1.0, 0.3, 0.01, 0.001}) {
            for (double lambda : {0.5, 30.0, 250.0}) {
                const double a = s.value();
                const double spec_k = std::ceil(std::sqrt(lambda) * (1 + std::abs(a) / h) / (2 * kPi * std::sqrt(1 + a * a)));
                const auto c = count_exact(s, AdiabaticScale(h), EnergyWindow::absolute(lambda));
                CHECK(static_cast<double>(c.strips_visited) <= 2 * spec_k + 1);
            }
        }
    }
}

TEST_CASE("strips follow the shorter coordinate") {
    const auto w = EnergyWindow::absolute(100.0);
    CHECK_FALSE(strip_bounds(Slope::rational(1, 3), AdiabaticScale(0.1), w).strips_over_l);
    CHECK(strip_bounds(Slope::rational(3, 1), AdiabaticScale(0.1), w).strips_over_l);
    CHECK(strip_bounds(Slope::named("golden"), AdiabaticScale(0.1), w).strips_over_l);
}

TEST_CASE("threaded counting is deterministic") {
    const Slope s = Slope::named("sqrt2");
    const auto w = EnergyWindow::absolute(500.0);
    const auto one = count_exact(s, AdiabaticScale(0.001), w, {0.0, 1});
    for (unsigned threads : {2u, 3u, 8u}) {
        const auto many = count_exact(s, AdiabaticScale(0.001), w, {0.0, threads});
        CHECK(many.count == one.count);
        CHECK(many.near_boundary == one.near_boundary);
        CHECK(many.strips_visited == one.strips_visited);
    }
}

TEST_CASE("overflow on absurd strip ranges") {
    try {
        count_exact(Slope::named("golden"), AdiabaticScale(1e-300), EnergyWindow::absolute(1e300));
        FAIL("expected overflow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::overflow);
    }
}

TEST_CASE("boundary ties") {
    // h = 1, lambda = 4 pi^2: the four unit vectors sit on the circle.
    const Slope s = Slope::rational(1, 1);
    const auto exact = count_exact_rational(s, Exact(1), Exact(1));
    CHECK(exact.count == 1);
    CHECK(exact.near_boundary == 4);
    const auto fp = count_exact(s, AdiabaticScale(1.0), EnergyWindow::reduced(1.0), {1e-9, 1});
    CHECK(fp.near_boundary == 4);

    // With no ties in the tolerance band, shifting lambda inside it keeps the count.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ldist(1.0, 200.0);
    for (int i = 0; i < 100; ++i) {
        const double lambda = ldist(rng);
        const double tol = 1e-6;
        const auto c = count_exact(Slope::rational(2, 3), AdiabaticScale(0.25), EnergyWindow::absolute(lambda), {tol, 1});
        if (c.near_boundary == 0) {
            CHECK(count(Slope::rational(2, 3), 0.25, lambda - 0.9 * tol) == c.count);
            CHECK(count(Slope::rational(2, 3), 0.25, lambda + 0.9 * tol) == c.count);
        }
    }
}

TEST_CASE("integer counting path agrees with floating point away from ties") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> num(1, 400);
    for (const Slope& s : {Slope::rational(0, 1), Slope::rational(1, 2), Slope::rational(-5, 7), Slope::rational(9, 4)}) {
        for (int i = 0; i < 40; ++i) {
            const Exact mu(num(rng), 37);
            const Exact h(num(rng), 401);
            const auto exact = count_exact_rational(s, h * h, mu);
            const auto fp = count_exact(s, AdiabaticScale(h.convert_to<double>()),
                                        EnergyWindow::reduced(mu.convert_to<double>()), {1e-9, 1});
            if (fp.near_boundary == 0) CHECK(exact.count == fp.count);
            CHECK(exact.near_boundary <= fp.near_boundary);
        }
    }
    CHECK(count_exact_rational(Slope::rational(1, 2), Exact(1, 1000000), Exact(30) / Exact(39.47841760435743)).count > 0);
    CHECK_THROWS_AS(count_exact_rational(Slope::named("golden"), Exact(1), Exact(1)), Error);
}

TEST_CASE("eigenvalues_below") {
    const auto list = eigenvalues_below(Slope::rational(1, 1), AdiabaticScale(1.0), EnergyWindow::absolute(40.0));
    REQUIRE(list.size() == 5);
    CHECK(list[0].k == 0);
    CHECK(list[0].l == 0);
    CHECK(list[0].value == 0.0);
    for (std::size_t i = 1; i < 5; ++i) CHECK(list[i].value == doctest::Approx(4 * kPi * kPi));
    CHECK(list[1].k == -1);
    CHECK(list[2].k == 0);
    CHECK(list[2].l == -1);
    CHECK(eigenvalues_below(Slope::named("e"), AdiabaticScale(0.5), EnergyWindow::absolute(0.0)).empty());

    const Slope s = Slope::rational(2, 3);
    const auto w = EnergyWindow::absolute(90.0);
    const auto many = eigenvalues_below(s, AdiabaticScale(0.05), w);
    CHECK(many.size() == count_exact(s, AdiabaticScale(0.05), w).count);
    for (std::size_t i = 1; i < many.size(); ++i) {
        CHECK(many[i - 1].value <= many[i].value);
        CHECK(many[i].value < 90.0);
        CHECK(many[i].value == eigenvalue(s, AdiabaticScale(0.05), many[i].k, many[i].l));
    }
}
