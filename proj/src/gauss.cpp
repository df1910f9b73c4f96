#include "urglab/gauss.hpp"

#include <cmath>
#include <numbers>

#include "urglab/errors.hpp"

namespace urglab {

namespace {

void check_rho(double rho) {
    require(std::isfinite(rho) && std::abs(rho) <= 1.0, "correlation rho must satisfy |rho| <= 1");
}

}  // namespace

CorrelatedGaussianPair::CorrelatedGaussianPair(double rho) : rho_(rho) {
    check_rho(rho);
    complement_ = std::sqrt(std::max(0.0, 1.0 - rho * rho));
}

std::pair<double, double> CorrelatedGaussianPair::draw(Rng& rng) const {
    std::normal_distribution<double> normal;
    const double x = normal(rng);
    const double z = normal(rng);
    return {x, rho_ * x + complement_ * z};
}

double orthant_probability(double rho) {
    check_rho(rho);
    return std::acos(rho) / (2.0 * std::numbers::pi);
}

EstimateReport orthant_probability_mc(double rho, std::uint64_t n, std::uint64_t seed) {
    require(n >= 1, "orthant_probability_mc: n must be >= 1");
    const CorrelatedGaussianPair pair(rho);
    Rng rng = make_rng(seed, "gauss-orthant");
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto [x, y] = pair.draw(rng);
        hits += (x >= 0.0 && y < 0.0);
    }
    return binomial_estimate("orthant_probability", hits, n, seed);
}

double symmetric_difference_probability(double rho) {
    check_rho(rho);
    return std::acos(rho) / std::numbers::pi;
}

}  // namespace urglab
