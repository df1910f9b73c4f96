// graph.hpp: finite windows standing in for Cayley graphs and URG samples.
//
// A WindowGraph stores, for each vertex, its half-edges (neighbour, generator
// label). Every half-edge (u, v, s) has a partner (v, u, s^-1); loops from the
// permutation model contribute two half-edges at their vertex, so degrees are
// counted with multiplicity.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace urglab {

using Vertex = std::uint32_t;
using Label = std::uint32_t;

class GeneratorSet {
public:
    // inverse[i] is the index paired with i; the pairing must be an involution.
    GeneratorSet(std::vector<std::string> names, std::vector<Label> inverse);

    // +e1, -e1, +e2, -e2, ... for the standard generators of Z^d.
    static GeneratorSet torus(std::uint32_t dim);
    // a1, a1^-1, a2, a2^-1, ... for the free group of rank k.
    static GeneratorSet free_group(std::uint32_t rank);
    // One self-inverse label, for graphs with no group structure.
    static GeneratorSet plain();

    std::uint32_t size() const { return static_cast<std::uint32_t>(names_.size()); }
    const std::string& name(Label s) const { return names_.at(s); }
    Label inverse(Label s) const { return inverse_.at(s); }
    std::optional<Label> find(const std::string& name) const;

    bool operator==(const GeneratorSet&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<Label> inverse_;
};

struct HalfEdge {
    Vertex to;
    Label label;
    bool operator==(const HalfEdge&) const = default;
};

struct WindowModel {
    enum class Kind { torus, random_regular, explicit_graph };
    Kind kind = Kind::explicit_graph;
    std::uint32_t dim = 0;   // torus
    std::uint32_t side = 0;  // torus
    std::uint32_t rank = 0;  // random regular
    std::optional<std::uint64_t> seed;
    std::string name;        // explicit graphs: "path", "complete", ...

    std::string kind_name() const;
    // Short stable identifier, e.g. "torus-2-8" or "random-regular-2-100-s7".
    std::string id(std::uint32_t n) const;
    bool operator==(const WindowModel&) const = default;
};

class WindowGraph {
public:
    // Validates edge symmetry, label range and the degree bound; adjacency
    // lists are sorted by (label, neighbour).
    WindowGraph(std::vector<std::vector<HalfEdge>> adjacency, GeneratorSet generators,
                WindowModel model, std::uint32_t degree_bound);

    std::uint32_t n() const { return static_cast<std::uint32_t>(adjacency_.size()); }
    std::span<const HalfEdge> neighbours(Vertex v) const { return adjacency_.at(v); }
    std::uint32_t degree(Vertex v) const { return static_cast<std::uint32_t>(adjacency_.at(v).size()); }
    // D, the global degree bound. Equals |S| for torus and random-regular windows.
    std::uint32_t degree_bound() const { return degree_bound_; }
    const GeneratorSet& generators() const { return generators_; }
    const WindowModel& model() const { return model_; }
    std::string id() const { return model_.id(n()); }

    std::size_t directed_edge_count() const;
    // Number of loop half-edges (each loop contributes two).
    std::size_t loop_half_edges() const { return loop_half_edges_; }
    // Number of surplus parallel half-edges (same endpoints, different labels).
    std::size_t multi_half_edges() const { return multi_half_edges_; }

    // The neighbour reached from v along label s, if that label is present
    // exactly once at v.
    std::optional<Vertex> follow(Vertex v, Label s) const;

    bool operator==(const WindowGraph& other) const {
        return adjacency_ == other.adjacency_ && generators_ == other.generators_ &&
               model_ == other.model_ && degree_bound_ == other.degree_bound_;
    }

private:
    std::vector<std::vector<HalfEdge>> adjacency_;
    GeneratorSet generators_;
    WindowModel model_;
    std::uint32_t degree_bound_;
    std::size_t loop_half_edges_ = 0;
    std::size_t multi_half_edges_ = 0;
};

// Cayley graph of (Z/LZ)^d with the 2d standard generators. L >= 3.
WindowGraph build_torus_window(std::uint32_t dim, std::uint32_t side);

// Permutation model: k independent uniform permutations of [n], permutation i
// contributing the edges (v, sigma_i(v)) with label a_i. Loops are kept.
WindowGraph build_random_regular(std::uint32_t rank, std::uint32_t n, std::uint64_t seed);

// P_n with labels +/-; endpoints have degree 1. n >= 2.
WindowGraph build_path(std::uint32_t n);

// K_n as the Cayley graph of Z/n with generators 1..n-1. n >= 2.
WindowGraph build_complete(std::uint32_t n);

struct LabelledEdge {
    Vertex u;
    Vertex v;
    Label label;
};

// Explicit graph from one entry per undirected edge; the reverse half-edge
// gets the inverse label.
WindowGraph build_explicit(std::uint32_t n, std::span<const LabelledEdge> edges,
                           GeneratorSet generators, std::string name,
                           std::optional<std::uint32_t> degree_bound = std::nullopt);

// Component index per vertex; components numbered by smallest vertex.
std::vector<std::uint32_t> connected_components(const WindowGraph& w);

}  // namespace urglab
