// ball.hpp: rooted coloured balls and the local (Benjamini-Schramm) metric.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "urglab/colouring.hpp"
#include "urglab/graph.hpp"

namespace urglab {

struct BallVertex {
    Vertex origin;        // vertex id in the source window
    std::uint32_t depth;  // distance from the root
    Colour colour;
};

// Induced subgraph on the vertices within distance r of the root. Local index
// 0 is the root; vertices are ordered by (depth, discovery order), discovery
// following each vertex's half-edges in label order.
class RootedBall {
public:
    RootedBall(std::uint32_t radius, std::vector<BallVertex> vertices,
               std::vector<std::vector<HalfEdge>> adjacency);

    std::uint32_t radius() const { return radius_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(vertices_.size()); }
    const BallVertex& vertex(std::uint32_t i) const { return vertices_.at(i); }
    std::span<const BallVertex> vertices() const { return vertices_; }
    // Half-edges with local endpoints.
    std::span<const HalfEdge> neighbours(std::uint32_t i) const { return adjacency_.at(i); }
    const BallVertex& root() const { return vertices_.front(); }
    std::size_t directed_edge_count() const;

    // Ball of the given radius around a local vertex, computed inside this
    // ball. Valid when depth(centre) + radius <= this->radius().
    RootedBall subball(std::uint32_t centre, std::uint32_t radius) const;

    // True iff the ball is a tree: no loops, no parallel edges, no cycles.
    bool is_tree() const;

    bool operator==(const RootedBall&) const = default;

private:
    std::uint32_t radius_;
    std::vector<BallVertex> vertices_;
    std::vector<std::vector<HalfEdge>> adjacency_;
};

inline bool operator==(const BallVertex& a, const BallVertex& b) {
    return a.origin == b.origin && a.depth == b.depth && a.colour == b.colour;
}

// Ball of radius r around u. An empty colour span means "uncoloured" (all 1).
RootedBall ball(const WindowGraph& w, std::span<const Colour> colours, Vertex u, std::uint32_t r);
RootedBall ball(const WindowGraph& w, const Colouring& c, Vertex u, std::uint32_t r);

// Root-preserving, colour-preserving isomorphism of the underlying
// multigraphs (generator labels are ignored). Radii must match.
bool balls_isomorphic(const RootedBall& a, const RootedBall& b);

struct LocalDistance {
    double value;            // 2^-r* where r* is the largest matching radius
    int matched_radius;      // r*, or -1 if even the roots differ
    bool indistinguishable;  // all radii up to the horizon matched
};

// d((G,u),(H,v)) = inf{2^-r : B_(G,u)(r) ~ B_(H,v)(r)}, searched up to
// r_max. A full match is reported as 2^-(r_max+1) with the flag set.
LocalDistance local_distance(const WindowGraph& g, std::span<const Colour> g_colours, Vertex u,
                             const WindowGraph& h, std::span<const Colour> h_colours, Vertex v,
                             std::uint32_t r_max);

}  // namespace urglab
