// kazhdan.hpp: balanced partitions of a window minimizing the boundary.
//
// The Kazhdan value of a partition is the number of directed boundary
// incidences per vertex, i.e. the expansion of the partition seen as a
// colouring. Parts are colours 1..k.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "urglab/colouring.hpp"
#include "urglab/graph.hpp"

namespace urglab {

class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights);
    static WeightVector uniform(std::uint32_t k);

    std::uint32_t size() const { return static_cast<std::uint32_t>(weights_.size()); }
    double operator[](std::size_t i) const { return weights_.at(i); }
    double min() const;
    const std::vector<double>& values() const { return weights_; }

private:
    std::vector<double> weights_;
};

// max_i |a_i - b_i|
double d_infinity(const std::vector<double>& a, const std::vector<double>& b);
double d_infinity(const WeightVector& a, const WeightVector& b);

// W(pi): the measure of each part under the uniform vertex measure.
std::vector<double> part_weights(const Colouring& partition);

struct AnnealBudget {
    std::uint64_t iterations = 0;       // moves per restart; 0 means 1500 epochs
    std::uint32_t restarts = 10;
    double initial_temperature = 0.0;   // 0 means the degree bound D
    double cooling = 0.995;             // T_j = T_0 cooling^j, j = epoch
    std::uint32_t epoch_length = 0;     // moves per epoch; 0 means n
};

struct KazhdanProblem {
    std::uint32_t parts = 2;
    WeightVector alpha = WeightVector::uniform(2);
    double eps = 0.0;
    AnnealBudget budget;
    std::uint64_t seed = 0;

    // Stable messages; empty iff the problem is well posed (window aside).
    std::vector<std::string> violations() const;
};

// Integer class sizes allowed for each part: [n(a_i - eps), n(a_i + eps)],
// widened to include floor/ceil(n a_i) and cut to >= 1.
struct SizeWindow {
    std::vector<std::uint32_t> lo;
    std::vector<std::uint32_t> hi;
    bool admits(const std::vector<std::size_t>& sizes) const;
};

// Throws ValidationError naming the feasible class-size window if no
// partition of n vertices fits.
SizeWindow admissible_sizes(std::uint32_t n, const WeightVector& alpha, double eps);

struct TracePoint {
    std::uint32_t restart;
    std::uint32_t epoch;
    double temperature;
    double current;
    double best;
};

struct KazhdanResult {
    Colouring partition;
    std::size_t boundary_incidences = 0;
    double value = 0.0;
    std::vector<double> weights;  // W(pi)
    std::vector<TracePoint> trace;
    bool certified = false;       // set only by brute force
    bool empty_part = false;
};

// Directed boundary incidences over n; equals expansion(w, partition).
double kazhdan_value(const WindowGraph& w, const Colouring& partition);
bool has_empty_part(const Colouring& partition);

// Exact minimum over all admissible partitions. Ties go to the
// lexicographically smallest colour sequence. Guarded by k^n <= 10^7.
KazhdanResult brute_force_kazhdan(const WindowGraph& w, const KazhdanProblem& problem);

// Simulated annealing over admissible partitions: balance-preserving swaps,
// single-vertex recolours when the size window allows, and cluster merges.
KazhdanResult anneal_kazhdan(const WindowGraph& w, const KazhdanProblem& problem);

struct MergeResult {
    Colouring partition;
    std::size_t decrement_incidences = 0;  // boundary incidences removed
    double decrement = 0.0;                // decrement_incidences / n
    std::uint32_t eligible_clusters = 0;   // clusters of part r adjacent to part b
    std::uint32_t moved_clusters = 0;
    std::size_t moved_vertices = 0;
    bool identity = false;                 // no eligible clusters
};

// Each cluster of part `from` that touches part `to` is recoloured `to`
// independently with probability eps.
MergeResult cluster_merge_move(const WindowGraph& w, const Colouring& partition, Colour from, Colour to,
                               double eps, std::uint64_t seed);

struct ProfileRow {
    std::uint32_t n;
    double value;
    double balance;  // d_infinity(W(pi), alpha)
    double wall_seconds;
};

using WindowFamily = std::function<WindowGraph(std::uint32_t size, std::uint64_t seed)>;

// Best annealed Kazhdan value for each window size of a family.
std::vector<ProfileRow> kazhdan_profile(const WindowFamily& family, const std::vector<std::uint32_t>& sizes,
                                        const KazhdanProblem& problem);

}  // namespace urglab
