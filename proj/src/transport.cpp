#include "urglab/transport.hpp"

#include <algorithm>
#include <cmath>

#include "urglab/errors.hpp"

namespace urglab {

namespace {

std::vector<RootedBall> all_balls(const WindowGraph& w, const Colouring& c, std::uint32_t radius) {
    std::vector<RootedBall> balls;
    balls.reserve(w.n());
    for (Vertex u = 0; u < w.n(); ++u) balls.push_back(ball(w, c, u, radius));
    return balls;
}

// Index in the root list of `at_v` of the half-edge reversing `e` out of u.
std::uint32_t reverse_edge(const WindowGraph& w, const RootedBall& at_v, Vertex u, Label s) {
    const Label back = w.generators().inverse(s);
    auto root_edges = at_v.neighbours(0);
    for (std::uint32_t j = 0; j < root_edges.size(); ++j) {
        if (root_edges[j].label == back && at_v.vertex(root_edges[j].to).origin == u) return j;
    }
    throw ValidationError("edge without a reverse half-edge");
}

double eval_checked(const TransportFunction& f, const RootedBall& b, std::uint32_t edge) {
    const double value = f.eval(b, edge);
    if (!(value >= 0.0)) {
        throw ValidationError("transport '" + f.name + "' returned a negative value");
    }
    return value;
}

}  // namespace

MtpReport mtp_check(const WindowGraph& w, const Colouring& c, const TransportFunction& f) {
    require(static_cast<bool>(f.eval), "transport function has no evaluator");
    require(c.size() == w.n(), "colouring size does not match the window");
    const std::uint32_t radius = std::max<std::uint32_t>(f.radius, 1);
    const auto balls = all_balls(w, c, radius);

    double out_flow = 0.0;
    double in_flow = 0.0;
    for (Vertex u = 0; u < w.n(); ++u) {
        const auto edges = w.neighbours(u);
        for (std::uint32_t j = 0; j < edges.size(); ++j) {
            out_flow += eval_checked(f, balls[u], j);
            const Vertex v = edges[j].to;
            in_flow += eval_checked(f, balls[v], reverse_edge(w, balls[v], u, edges[j].label));
        }
    }
    MtpReport r;
    r.n = w.n();
    r.lhs = out_flow / w.n();
    r.rhs = in_flow / w.n();
    r.abs_diff = std::abs(r.lhs - r.rhs);
    r.exact = r.abs_diff <= 1e-9 * std::max(r.lhs, 1.0);
    return r;
}

namespace {

EdgeFunction make_arrow(const VertexFunction& f, bool absolute) {
    require(static_cast<bool>(f.eval), "vertex function has no evaluator");
    EdgeFunction out;
    out.name = (absolute ? "|d " : "d ") + f.name + (absolute ? "|" : "");
    out.radius = f.radius + 1;
    out.eval = [f, absolute](const RootedBall& at_u, std::uint32_t edge) {
        const std::uint32_t v = at_u.neighbours(0)[edge].to;
        const double diff = f.eval(at_u.subball(0, f.radius)) - f.eval(at_u.subball(v, f.radius));
        return absolute ? std::abs(diff) : diff;
    };
    return out;
}

}  // namespace

EdgeFunction f_arrow(const VertexFunction& f) { return make_arrow(f, true); }
EdgeFunction f_arrow_signed(const VertexFunction& f) { return make_arrow(f, false); }

double edge_l1_norm(const WindowGraph& w, const Colouring& c, const EdgeFunction& f) {
    const std::uint32_t radius = std::max<std::uint32_t>(f.radius, 1);
    double total = 0.0;
    for (Vertex u = 0; u < w.n(); ++u) {
        const RootedBall b = ball(w, c, u, radius);
        for (std::uint32_t j = 0; j < w.degree(u); ++j) total += std::abs(f.eval(b, j));
    }
    return total / w.n();
}

NormBoundReport norm_bound_check(const WindowGraph& w, const Colouring& c, const VertexFunction& f) {
    require(static_cast<bool>(f.eval), "vertex function has no evaluator");
    require(c.size() == w.n(), "colouring size does not match the window");
    std::vector<double> values(w.n());
    for (Vertex u = 0; u < w.n(); ++u) values[u] = f.eval(ball(w, c, u, f.radius));

    double edge_sum = 0.0;
    double vertex_sum = 0.0;
    for (Vertex u = 0; u < w.n(); ++u) {
        vertex_sum += std::abs(values[u]);
        for (const HalfEdge& e : w.neighbours(u)) edge_sum += std::abs(values[u] - values[e.to]);
    }
    NormBoundReport r;
    r.lhs_norm = edge_sum / w.n();
    r.rhs_bound = 2.0 * w.degree_bound() * vertex_sum / w.n();
    r.holds = r.lhs_norm <= r.rhs_bound + 1e-12;
    return r;
}

VertexFunction sum(const VertexFunction& f, const VertexFunction& g) {
    const std::uint32_t radius = std::max(f.radius, g.radius);
    return {f.name + "+" + g.name, radius, [f, g](const RootedBall& b) {
                return f.eval(b.subball(0, f.radius)) + g.eval(b.subball(0, g.radius));
            }};
}

namespace transports {

TransportFunction constant(double value) {
    return {"constant", 1, [value](const RootedBall&, std::uint32_t) { return value; }};
}

TransportFunction colour_indicator(Colour k) {
    return {"colour-indicator", 1,
            [k](const RootedBall& b, std::uint32_t) { return b.root().colour == k ? 1.0 : 0.0; }};
}

TransportFunction degree_weighted(Colour k) {
    return {"degree-weighted", 1, [k](const RootedBall& b, std::uint32_t edge) {
                const auto& v = b.vertex(b.neighbours(0)[edge].to);
                return v.colour == k ? static_cast<double>(b.neighbours(0).size()) : 0.0;
            }};
}

TransportFunction bichromatic() {
    return {"bichromatic", 1, [](const RootedBall& b, std::uint32_t edge) {
                return b.root().colour != b.vertex(b.neighbours(0)[edge].to).colour ? 1.0 : 0.0;
            }};
}

}  // namespace transports

namespace vertex_functions {

VertexFunction constant(double value) {
    return {"constant", 0, [value](const RootedBall&) { return value; }};
}

VertexFunction colour_indicator(Colour k) {
    return {"colour-indicator", 0, [k](const RootedBall& b) { return b.root().colour == k ? 1.0 : 0.0; }};
}

VertexFunction colour_table(std::vector<double> table) {
    return {"colour-table", 0, [table = std::move(table)](const RootedBall& b) {
                return table.at(b.root().colour - 1);
            }};
}

VertexFunction colour_count(Colour k, std::uint32_t radius) {
    return {"colour-count", radius, [k](const RootedBall& b) {
                return static_cast<double>(std::count_if(b.vertices().begin(), b.vertices().end(),
                                                         [k](const BallVertex& v) { return v.colour == k; }));
            }};
}

}  // namespace vertex_functions

}  // namespace urglab
