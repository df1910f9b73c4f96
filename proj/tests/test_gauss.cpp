#include <doctest.h>

#include <cmath>
#include <numbers>

#include "urglab/errors.hpp"
#include "urglab/gauss.hpp"

using namespace urglab;

TEST_SUITE("gauss") {
    TEST_CASE("closed form values") {
        CHECK(orthant_probability(0.0) == doctest::Approx(0.25));
        CHECK(orthant_probability(1.0) == 0.0);
        CHECK(orthant_probability(-1.0) == doctest::Approx(0.5));
        CHECK(symmetric_difference_probability(1.0) == 0.0);
        CHECK(symmetric_difference_probability(0.0) == doctest::Approx(0.5));
        CHECK_THROWS_WITH_AS(orthant_probability(1.01), "correlation rho must satisfy |rho| <= 1", ValidationError);
        CHECK_THROWS_AS(orthant_probability(std::nan("")), ValidationError);
    }

    TEST_CASE("reflection symmetry and monotonicity") {
        double prev = orthant_probability(-1.0);
        for (int i = 0; i <= 100; ++i) {
            const double rho = -1.0 + 0.02 * i;
            CHECK(orthant_probability(rho) + orthant_probability(-rho) == doctest::Approx(0.5));
            const double v = orthant_probability(rho);
            CHECK(v <= prev);
            CHECK(prev - v < 0.05);
            prev = v;
        }
    }

    TEST_CASE("monte carlo agrees with the closed form") {
        for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
            const auto mc = orthant_probability_mc(rho, 1000000, 42);
            CHECK(mc.trials == 1000000);
            CHECK(std::abs(mc.estimate - orthant_probability(rho)) < 4 * mc.std_error);
        }
        const auto zero = orthant_probability_mc(0.0, 1000000, 7);
        CHECK(std::abs(zero.estimate - 0.25) <= 0.0013);
        // the single-orthant constant 1/pi would put rho = 0 at 1/2
        CHECK(std::abs(zero.estimate - 0.5) > 100 * zero.std_error);
    }

    TEST_CASE("symmetric difference against a two orthant count") {
        const CorrelatedGaussianPair pair(0.5);
        Rng rng(3);
        const std::size_t n = 400000;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [x, y] = pair.draw(rng);
            hits += (x >= 0) != (y >= 0);
        }
        const auto e = binomial_estimate("sym", hits, n, 3);
        CHECK(std::abs(e.estimate - 1.0 / 3) <= 3 * e.std_error);
        CHECK(symmetric_difference_probability(0.5) == doctest::Approx(1.0 / 3));
    }

    TEST_CASE("marginal moments") {
        for (double rho : {-0.7, 0.0, 0.3}) {
            const CorrelatedGaussianPair pair(rho);
            Rng rng(11);
            RunningStats x, y, x2, y2, xy;
            for (int i = 0; i < 200000; ++i) {
                const auto [a, b] = pair.draw(rng);
                x.add(a);
                y.add(b);
                x2.add(a * a);
                y2.add(b * b);
                xy.add(a * b);
            }
            CHECK(std::abs(x.mean()) <= 4 * x.std_error());
            CHECK(std::abs(y.mean()) <= 4 * y.std_error());
            CHECK(std::abs(x2.mean() - 1) <= 4 * x2.std_error());
            CHECK(std::abs(y2.mean() - 1) <= 4 * y2.std_error());
            CHECK(std::abs(xy.mean() - rho) <= 4 * xy.std_error());
        }
        CHECK_THROWS_AS(CorrelatedGaussianPair(-1.5), ValidationError);
    }
}
