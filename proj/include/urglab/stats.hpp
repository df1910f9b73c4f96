#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace urglab {

// Welford accumulator. Feed values in a fixed order for reproducible roundoff.
class RunningStats {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double std_error() const {
        return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct EstimateReport {
    std::string quantity;
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
};

inline EstimateReport summarize(std::string quantity, std::span<const double> samples,
                                std::uint64_t master_seed) {
    RunningStats s;
    for (double x : samples) s.add(x);
    return {std::move(quantity), s.mean(), s.std_error(), s.count(), master_seed};
}

// Frequency estimate with the binomial standard error sqrt(p(1-p)/n).
inline EstimateReport binomial_estimate(std::string quantity, std::size_t hits, std::size_t trials,
                                        std::uint64_t master_seed) {
    const double n = static_cast<double>(trials);
    const double p = trials ? static_cast<double>(hits) / n : 0.0;
    const double se = trials ? std::sqrt(p * (1.0 - p) / n) : 0.0;
    return {std::move(quantity), p, se, trials, master_seed};
}

}  // namespace urglab
