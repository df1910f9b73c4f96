// transport.hpp: finite-window mass transport and the f-> construction.
//
// Edge and vertex functions only ever see a rooted ball, so they are
// functions of the local geometry by construction.
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "urglab/ball.hpp"
#include "urglab/colouring.hpp"
#include "urglab/graph.hpp"

namespace urglab {

// f(G, u, v): `edge` indexes the root's half-edge list in the ball at u
// (so parallel edges are told apart). The ball radius is max(radius, 1).
struct EdgeFunction {
    std::string name;
    std::uint32_t radius = 1;
    std::function<double(const RootedBall& at_u, std::uint32_t edge)> eval;
};

// A transport is an edge function required to be nonnegative.
using TransportFunction = EdgeFunction;

struct VertexFunction {
    std::string name;
    std::uint32_t radius = 0;
    std::function<double(const RootedBall& at_u)> eval;
};

struct MtpReport {
    double lhs = 0.0;  // (1/n) sum over directed edges of f(u, v)
    double rhs = 0.0;  // (1/n) sum over directed edges of f(v, u)
    double abs_diff = 0.0;
    std::uint32_t n = 0;
    bool exact = false;  // |lhs - rhs| <= 1e-9 max(lhs, 1)
};

MtpReport mtp_check(const WindowGraph& w, const Colouring& c, const TransportFunction& f);

// |f(G,u) - f(G,v)|, locality radius r + 1.
EdgeFunction f_arrow(const VertexFunction& f);
// f(G,u) - f(G,v).
EdgeFunction f_arrow_signed(const VertexFunction& f);

struct NormBoundReport {
    double lhs_norm = 0.0;   // (1/n) sum over directed edges |f(u) - f(v)|
    double rhs_bound = 0.0;  // 2D (1/n) sum over vertices |f(u)|
    bool holds = false;
};

NormBoundReport norm_bound_check(const WindowGraph& w, const Colouring& c, const VertexFunction& f);

// (1/n) sum over directed edges of |f(u, v)| for an arbitrary edge function.
double edge_l1_norm(const WindowGraph& w, const Colouring& c, const EdgeFunction& f);

VertexFunction sum(const VertexFunction& f, const VertexFunction& g);

namespace transports {

TransportFunction constant(double value = 1.0);
// [c(u) = k]
TransportFunction colour_indicator(Colour k);
// deg_ball(u) * [c(v) = k]
TransportFunction degree_weighted(Colour k);
// [c(u) != c(v)]
TransportFunction bichromatic();

}  // namespace transports

namespace vertex_functions {

VertexFunction constant(double value);
// [c(root) = k]
VertexFunction colour_indicator(Colour k);
// table[c(root) - 1]
VertexFunction colour_table(std::vector<double> table);
// Number of ball vertices with colour k within the given radius.
VertexFunction colour_count(Colour k, std::uint32_t radius);

}  // namespace vertex_functions

}  // namespace urglab
