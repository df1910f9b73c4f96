// clusters.hpp: clusters of random subsets, clusterwise coin flips, the
// cluster-connecting factor graph and cost bounds.
#pragma once

#include <cstdint>
#include <vector>

#include "urglab/colouring.hpp"
#include "urglab/graph.hpp"

namespace urglab {

class UnionFind {
public:
    explicit UnionFind(std::size_t n);
    std::uint32_t find(std::uint32_t x);
    bool unite(std::uint32_t a, std::uint32_t b);  // false if already joined
    std::size_t set_size(std::uint32_t x) { return size_[find(x)]; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

inline constexpr std::int32_t no_cluster = -1;

struct ClusterDecomposition {
    std::vector<bool> in;                 // subset membership per vertex
    std::vector<std::int32_t> cluster_of;  // cluster id per vertex, no_cluster outside the subset
    std::uint32_t count = 0;
    std::vector<std::uint32_t> sizes;     // by cluster id
    std::vector<Vertex> smallest;         // smallest vertex of each cluster

    std::size_t subset_size() const;
    // histogram[s] = number of clusters of size s
    std::vector<std::uint32_t> size_histogram() const;
    std::uint32_t largest() const;
};

// Connected components of the subgraph induced by the subset. Cluster ids
// are 0..count-1 in order of each cluster's smallest vertex.
ClusterDecomposition decompose(const WindowGraph& w, const std::vector<bool>& subset);
// Subset = colour 1 of a d = 2 colouring.
ClusterDecomposition decompose(const WindowGraph& w, const Colouring& subset);

// One Bernoulli(eps) coin per cluster, copied to all its vertices. The result
// is a subset colouring: coin 1 -> in (colour 1), everything else out.
Colouring clusterwise_bernoulli(const ClusterDecomposition& dec, double eps, std::uint64_t seed);
// The coin values themselves, by cluster id.
std::vector<std::uint8_t> cluster_coins(const ClusterDecomposition& dec, double eps, std::uint64_t seed);

struct FactorPair {
    Vertex a;
    Vertex b;
    std::uint32_t cluster_a;
    std::uint32_t cluster_b;
    std::uint32_t distance;  // window distance between the two clusters
};

struct FactorGraphEdges {
    std::vector<FactorPair> pairs;
    std::size_t total_distance() const;
};

// Minimum spanning tree of the cluster quotient graph weighted by
// inter-cluster distance, one witness pair per tree edge. Throws if the
// clusters do not lie in a single window component.
FactorGraphEdges connect_clusters(const WindowGraph& w, const ClusterDecomposition& dec);

// True iff (induced subgraph + pairs) connects the whole subset.
bool connects_subset(const WindowGraph& w, const ClusterDecomposition& dec, const FactorGraphEdges& extra);

struct CostBound {
    double intensity = 0.0;
    std::uint32_t generators = 0;          // |S|
    double induced_average_degree = 0.0;   // over subset vertices
    double extra_half_degree = 0.0;        // |extra| / n: half the extra degree per window vertex
    double generator_bound = 0.0;              // 1 + intensity |S|
    double empirical_bound = 0.0;          // 1 + (1/2) E[deg_o] - intensity
    double slack() const { return generator_bound - empirical_bound; }
};

CostBound cost_upper_bound(const WindowGraph& w, const ClusterDecomposition& dec,
                           const FactorGraphEdges& extra);

// 1 + mu_A (cost_restricted - 1).
double gaboriau_induction(double cost_restricted, double mu_a);

// Subset consisting of one cluster chosen uniformly at random.
Colouring uniform_cluster_select(const ClusterDecomposition& dec, std::uint64_t seed);
std::uint32_t uniform_cluster_index(const ClusterDecomposition& dec, std::uint64_t seed);

struct PercolationRow {
    double p = 0.0;
    double intensity = 0.0;
    std::uint32_t cluster_count = 0;
    double largest_cluster_fraction = 0.0;  // largest cluster / subset size
    double cost_bound_generators = 0.0;
    double cost_bound_empirical = 0.0;
};

// Bernoulli(p) site percolation on w followed by the cost bounds. An empty
// subset reports intensity 0 and bounds of 1.
PercolationRow percolation_trial(const WindowGraph& w, double p, std::uint64_t seed);

}  // namespace urglab
