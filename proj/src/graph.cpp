#include "urglab/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include "urglab/errors.hpp"
#include "urglab/random.hpp"

namespace urglab {

GeneratorSet::GeneratorSet(std::vector<std::string> names, std::vector<Label> inverse)
    : names_(std::move(names)), inverse_(std::move(inverse)) {
    require(!names_.empty(), "generator set must be nonempty (|S| >= 1)");
    require(names_.size() == inverse_.size(), "generator set: one inverse per generator");
    for (Label s = 0; s < inverse_.size(); ++s) {
        require(inverse_[s] < inverse_.size() && inverse_[inverse_[s]] == s,
                "generator set: inverse pairing must be an involution");
    }
}

GeneratorSet GeneratorSet::torus(std::uint32_t dim) {
    std::vector<std::string> names;
    std::vector<Label> inverse;
    for (std::uint32_t j = 1; j <= dim; ++j) {
        names.push_back("+e" + std::to_string(j));
        names.push_back("-e" + std::to_string(j));
        const Label base = 2 * (j - 1);
        inverse.push_back(base + 1);
        inverse.push_back(base);
    }
    return {std::move(names), std::move(inverse)};
}

GeneratorSet GeneratorSet::free_group(std::uint32_t rank) {
    std::vector<std::string> names;
    std::vector<Label> inverse;
    for (std::uint32_t i = 1; i <= rank; ++i) {
        names.push_back("a" + std::to_string(i));
        names.push_back("a" + std::to_string(i) + "^-1");
        const Label base = 2 * (i - 1);
        inverse.push_back(base + 1);
        inverse.push_back(base);
    }
    return {std::move(names), std::move(inverse)};
}

GeneratorSet GeneratorSet::plain() { return {{"e"}, {0}}; }

std::optional<Label> GeneratorSet::find(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Label>(it - names_.begin());
}

std::string WindowModel::kind_name() const {
    switch (kind) {
        case Kind::torus: return "torus";
        case Kind::random_regular: return "random-regular";
        case Kind::explicit_graph: return "explicit";
    }
    return "explicit";
}

std::string WindowModel::id(std::uint32_t n) const {
    switch (kind) {
        case Kind::torus:
            return "torus-" + std::to_string(dim) + "-" + std::to_string(side);
        case Kind::random_regular:
            return "random-regular-" + std::to_string(rank) + "-" + std::to_string(n) + "-s" +
                   std::to_string(seed.value_or(0));
        case Kind::explicit_graph:
            return "explicit-" + (name.empty() ? std::string("graph") : name) + "-" + std::to_string(n);
    }
    return {};
}

WindowGraph::WindowGraph(std::vector<std::vector<HalfEdge>> adjacency, GeneratorSet generators,
                         WindowModel model, std::uint32_t degree_bound)
    : adjacency_(std::move(adjacency)),
      generators_(std::move(generators)),
      model_(std::move(model)),
      degree_bound_(degree_bound) {
    const auto n = static_cast<Vertex>(adjacency_.size());
    require(n >= 1, "window must have at least one vertex");
    std::map<std::tuple<Vertex, Vertex, Label>, int> balance;
    for (Vertex u = 0; u < n; ++u) {
        auto& list = adjacency_[u];
        require(list.size() <= degree_bound_,
                "vertex " + std::to_string(u) + " exceeds the degree bound " + std::to_string(degree_bound_));
        std::sort(list.begin(), list.end(), [](const HalfEdge& a, const HalfEdge& b) {
            return std::tie(a.label, a.to) < std::tie(b.label, b.to);
        });
        std::map<Vertex, int> multiplicity;
        for (const HalfEdge& e : list) {
            require(e.to < n, "half-edge target out of range");
            require(e.label < generators_.size(), "half-edge label out of range");
            ++balance[{u, e.to, e.label}];
            --balance[{e.to, u, generators_.inverse(e.label)}];
            if (e.to == u) {
                ++loop_half_edges_;
            } else if (++multiplicity[e.to] > 1) {
                ++multi_half_edges_;
            }
        }
    }
    for (const auto& [key, count] : balance) {
        require(count == 0, "edge symmetry violated at (" + std::to_string(std::get<0>(key)) + "," +
                                std::to_string(std::get<1>(key)) + ")");
    }
}

std::size_t WindowGraph::directed_edge_count() const {
    std::size_t total = 0;
    for (const auto& list : adjacency_) total += list.size();
    return total;
}

std::optional<Vertex> WindowGraph::follow(Vertex v, Label s) const {
    std::optional<Vertex> hit;
    for (const HalfEdge& e : adjacency_.at(v)) {
        if (e.label != s) continue;
        if (hit) return std::nullopt;
        hit = e.to;
    }
    return hit;
}

WindowGraph build_torus_window(std::uint32_t dim, std::uint32_t side) {
    require(dim >= 1, "torus dimension d must be >= 1");
    require(side >= 3, "torus side L must be >= 3 (L < 3 collapses generator edges)");
    std::uint64_t n64 = 1;
    for (std::uint32_t j = 0; j < dim; ++j) {
        n64 *= side;
        require(n64 <= (1ULL << 28), "torus window too large");
    }
    const auto n = static_cast<Vertex>(n64);
    std::vector<std::vector<HalfEdge>> adj(n);
    std::uint32_t stride = 1;
    for (std::uint32_t j = 0; j < dim; ++j) {
        for (Vertex v = 0; v < n; ++v) {
            const std::uint32_t coord = (v / stride) % side;
            const Vertex base = v - coord * stride;
            const Vertex up = base + ((coord + 1) % side) * stride;
            const Vertex down = base + ((coord + side - 1) % side) * stride;
            adj[v].push_back({up, 2 * j});
            adj[v].push_back({down, 2 * j + 1});
        }
        stride *= side;
    }
    WindowModel model{WindowModel::Kind::torus, dim, side, 0, std::nullopt, {}};
    return {std::move(adj), GeneratorSet::torus(dim), std::move(model), 2 * dim};
}

WindowGraph build_random_regular(std::uint32_t rank, std::uint32_t n, std::uint64_t seed) {
    require(rank >= 1, "random-regular rank k must be >= 1");
    require(n >= 2 * rank + 1, "random-regular requires n >= 2k+1");
    Rng rng = make_rng(seed, "random-regular");
    std::vector<std::vector<HalfEdge>> adj(n);
    std::vector<Vertex> sigma(n);
    for (std::uint32_t i = 0; i < rank; ++i) {
        std::iota(sigma.begin(), sigma.end(), Vertex{0});
        std::shuffle(sigma.begin(), sigma.end(), rng);
        for (Vertex v = 0; v < n; ++v) {
            adj[v].push_back({sigma[v], 2 * i});
            adj[sigma[v]].push_back({v, 2 * i + 1});
        }
    }
    WindowModel model{WindowModel::Kind::random_regular, 0, 0, rank, seed, {}};
    return {std::move(adj), GeneratorSet::free_group(rank), std::move(model), 2 * rank};
}

WindowGraph build_path(std::uint32_t n) {
    require(n >= 2, "path needs n >= 2");
    std::vector<LabelledEdge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 0});
    return build_explicit(n, edges, GeneratorSet({"+", "-"}, {1, 0}), "path", 2);
}

WindowGraph build_complete(std::uint32_t n) {
    require(n >= 2, "complete graph needs n >= 2");
    std::vector<std::string> names;
    std::vector<Label> inverse;
    for (std::uint32_t s = 1; s < n; ++s) {
        names.push_back("+" + std::to_string(s));
        inverse.push_back(n - s - 1);
    }
    std::vector<LabelledEdge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (std::uint32_t s = 1; s < n; ++s) {
            const Vertex v = (u + s) % n;
            // keep one half-edge per pair: the label no larger than its inverse
            if (s < n - s || (s == n - s && u < v)) edges.push_back({u, v, s - 1});
        }
    }
    return build_explicit(n, edges, GeneratorSet(std::move(names), std::move(inverse)), "complete",
                          n - 1);
}

WindowGraph build_explicit(std::uint32_t n, std::span<const LabelledEdge> edges,
                           GeneratorSet generators, std::string name,
                           std::optional<std::uint32_t> degree_bound) {
    std::vector<std::vector<HalfEdge>> adj(n);
    for (const LabelledEdge& e : edges) {
        require(e.u < n && e.v < n, "explicit edge endpoint out of range");
        require(e.label < generators.size(), "explicit edge label out of range");
        adj[e.u].push_back({e.v, e.label});
        adj[e.v].push_back({e.u, generators.inverse(e.label)});
    }
    std::uint32_t bound = degree_bound.value_or(0);
    if (!degree_bound) {
        for (const auto& list : adj) bound = std::max(bound, static_cast<std::uint32_t>(list.size()));
    }
    WindowModel model{WindowModel::Kind::explicit_graph, 0, 0, 0, std::nullopt, std::move(name)};
    return {std::move(adj), std::move(generators), std::move(model), bound};
}

std::vector<std::uint32_t> connected_components(const WindowGraph& w) {
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> comp(w.n(), unset);
    std::uint32_t next = 0;
    std::queue<Vertex> queue;
    for (Vertex s = 0; s < w.n(); ++s) {
        if (comp[s] != unset) continue;
        comp[s] = next;
        queue.push(s);
        while (!queue.empty()) {
            const Vertex u = queue.front();
            queue.pop();
            for (const HalfEdge& e : w.neighbours(u)) {
                if (comp[e.to] == unset) {
                    comp[e.to] = next;
                    queue.push(e.to);
                }
            }
        }
        ++next;
    }
    return comp;
}

}  // namespace urglab
