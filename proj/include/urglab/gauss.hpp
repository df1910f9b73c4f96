// gauss.hpp: orthant probabilities of a correlated standard Gaussian pair.
#pragma once

#include <cstdint>
#include <utility>

#include "urglab/random.hpp"
#include "urglab/stats.hpp"

namespace urglab {

// (X, Y) standard normal with E[XY] = rho, drawn as (X, rho X + sqrt(1 - rho^2) Z).
class CorrelatedGaussianPair {
public:
    explicit CorrelatedGaussianPair(double rho);
    double rho() const { return rho_; }
    std::pair<double, double> draw(Rng& rng) const;

private:
    double rho_;
    double complement_;
};

// P(X >= 0, Y < 0) = arccos(rho) / (2 pi).
double orthant_probability(double rho);

// Frequency of {X >= 0, Y < 0} over n draws, with binomial standard error.
EstimateReport orthant_probability_mc(double rho, std::uint64_t n, std::uint64_t seed);

// P({X >= 0} symmetric-difference {Y >= 0}) = arccos(rho) / pi.
double symmetric_difference_probability(double rho);

}  // namespace urglab
