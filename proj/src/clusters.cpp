#include "urglab/clusters.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "urglab/errors.hpp"
#include "urglab/random.hpp"

namespace urglab {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
}

std::uint32_t UnionFind::find(std::uint32_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];  // path halving
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

std::size_t ClusterDecomposition::subset_size() const {
    return static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
}

std::vector<std::uint32_t> ClusterDecomposition::size_histogram() const {
    std::vector<std::uint32_t> hist(largest() + 1, 0);
    for (auto s : sizes) ++hist[s];
    return hist;
}

std::uint32_t ClusterDecomposition::largest() const {
    return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

ClusterDecomposition decompose(const WindowGraph& w, const std::vector<bool>& subset) {
    require(subset.size() == w.n(), "subset size does not match the window");
    const std::uint32_t n = w.n();
    UnionFind uf(n);
    for (Vertex u = 0; u < n; ++u) {
        if (!subset[u]) continue;
        for (const HalfEdge& e : w.neighbours(u)) {
            if (subset[e.to]) uf.unite(u, e.to);
        }
    }
    ClusterDecomposition dec;
    dec.in = subset;
    dec.cluster_of.assign(n, no_cluster);
    std::vector<std::int32_t> id_of_root(n, no_cluster);
    for (Vertex u = 0; u < n; ++u) {
        if (!subset[u]) continue;
        const auto root = uf.find(u);
        if (id_of_root[root] == no_cluster) {
            id_of_root[root] = static_cast<std::int32_t>(dec.count++);
            dec.sizes.push_back(0);
            dec.smallest.push_back(u);
        }
        dec.cluster_of[u] = id_of_root[root];
        ++dec.sizes[static_cast<std::size_t>(id_of_root[root])];
    }
    return dec;
}

ClusterDecomposition decompose(const WindowGraph& w, const Colouring& subset) {
    require(subset.d() == 2, "decompose expects a subset (d = 2) colouring");
    return decompose(w, subset.mask(in_colour));
}

std::vector<std::uint8_t> cluster_coins(const ClusterDecomposition& dec, double eps, std::uint64_t seed) {
    require(eps >= 0.0 && eps <= 1.0, "eps must lie in [0,1]");
    Rng rng = make_rng(seed, "clusterwise-bernoulli");
    std::bernoulli_distribution coin(eps);
    std::vector<std::uint8_t> coins(dec.count);
    for (auto& c : coins) c = coin(rng) ? 1 : 0;
    return coins;
}

Colouring clusterwise_bernoulli(const ClusterDecomposition& dec, double eps, std::uint64_t seed) {
    const auto coins = cluster_coins(dec, eps, seed);
    std::vector<Colour> colours(dec.cluster_of.size(), out_colour);
    for (std::size_t v = 0; v < colours.size(); ++v) {
        const auto id = dec.cluster_of[v];
        if (id != no_cluster && coins[static_cast<std::size_t>(id)]) colours[v] = in_colour;
    }
    return {std::move(colours), 2};
}

std::size_t FactorGraphEdges::total_distance() const {
    std::size_t total = 0;
    for (const auto& p : pairs) total += p.distance;
    return total;
}

FactorGraphEdges connect_clusters(const WindowGraph& w, const ClusterDecomposition& dec) {
    require(dec.cluster_of.size() == w.n(), "decomposition does not match the window");
    FactorGraphEdges out;
    if (dec.count <= 1) return out;

    // Multi-source BFS: every vertex learns its nearest subset vertex. Sources
    // enter in (cluster id, vertex id) order so ties resolve deterministically.
    constexpr auto unreached = static_cast<std::uint32_t>(-1);
    const std::uint32_t n = w.n();
    std::vector<std::uint32_t> dist(n, unreached);
    std::vector<Vertex> source(n, 0);
    std::vector<Vertex> order;
    for (Vertex v = 0; v < n; ++v) {
        if (dec.in[v]) order.push_back(v);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return dec.cluster_of[a] < dec.cluster_of[b]; });
    std::queue<Vertex> queue;
    for (Vertex v : order) {
        dist[v] = 0;
        source[v] = v;
        queue.push(v);
    }
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop();
        for (const HalfEdge& e : w.neighbours(u)) {
            if (dist[e.to] != unreached) continue;
            dist[e.to] = dist[u] + 1;
            source[e.to] = source[u];
            queue.push(e.to);
        }
    }

    // Boundary edges between BFS regions give candidate quotient edges; the
    // MST of these candidates is an MST of the full inter-cluster distance
    // graph (Mehlhorn's construction).
    using Candidate = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, Vertex, Vertex>;
    std::vector<Candidate> candidates;
    for (Vertex x = 0; x < n; ++x) {
        if (dist[x] == unreached) continue;
        for (const HalfEdge& e : w.neighbours(x)) {
            const Vertex y = e.to;
            if (dist[y] == unreached) continue;
            auto cx = static_cast<std::uint32_t>(dec.cluster_of[source[x]]);
            auto cy = static_cast<std::uint32_t>(dec.cluster_of[source[y]]);
            if (cx >= cy) continue;  // each unordered region pair once per edge orientation
            candidates.emplace_back(dist[x] + 1 + dist[y], cx, cy, source[x], source[y]);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    UnionFind uf(dec.count);
    for (const auto& [weight, cx, cy, a, b] : candidates) {
        if (!uf.unite(cx, cy)) continue;
        out.pairs.push_back({a, b, cx, cy, weight});
        if (out.pairs.size() + 1 == dec.count) break;
    }
    if (out.pairs.size() + 1 != dec.count) {
        const auto comp = connected_components(w);
        std::set<std::uint32_t> touched;
        for (std::uint32_t c = 0; c < dec.count; ++c) touched.insert(comp[dec.smallest[c]]);
        std::string list;
        for (auto c : touched) list += (list.empty() ? "" : ",") + std::to_string(c);
        throw ValidationError("clusters lie in different window components: {" + list + "}");
    }
    return out;
}

bool connects_subset(const WindowGraph& w, const ClusterDecomposition& dec, const FactorGraphEdges& extra) {
    if (dec.count <= 1) return true;
    UnionFind uf(dec.count);
    std::uint32_t joins = 0;
    for (const auto& p : extra.pairs) {
        require(p.a < w.n() && p.b < w.n() && dec.in[p.a] && dec.in[p.b], "factor pair outside the subset");
        joins += uf.unite(static_cast<std::uint32_t>(dec.cluster_of[p.a]),
                          static_cast<std::uint32_t>(dec.cluster_of[p.b]));
    }
    return joins + 1 == dec.count;
}

CostBound cost_upper_bound(const WindowGraph& w, const ClusterDecomposition& dec,
                           const FactorGraphEdges& extra) {
    require(connects_subset(w, dec, extra), "cost_upper_bound: extra pairs do not connect the subset");
    CostBound r;
    r.generators = w.generators().size();
    const std::size_t members = dec.subset_size();
    r.intensity = static_cast<double>(members) / w.n();
    r.generator_bound = 1.0 + r.intensity * r.generators;
    if (members == 0) {
        r.empirical_bound = 1.0;
        return r;
    }
    std::size_t induced_half_edges = 0;
    for (Vertex u = 0; u < w.n(); ++u) {
        if (!dec.in[u]) continue;
        for (const HalfEdge& e : w.neighbours(u)) induced_half_edges += dec.in[e.to];
    }
    const double m = static_cast<double>(members);
    r.induced_average_degree = static_cast<double>(induced_half_edges) / m;
    const double extra_degree = 2.0 * static_cast<double>(extra.pairs.size()) / m;
    r.extra_half_degree = static_cast<double>(extra.pairs.size()) / w.n();
    r.empirical_bound = 1.0 + 0.5 * (r.induced_average_degree + extra_degree) * r.intensity - r.intensity;
    return r;
}

double gaboriau_induction(double cost_restricted, double mu_a) {
    require(cost_restricted >= 1.0, "gaboriau_induction: restricted cost must be >= 1");
    require(mu_a > 0.0 && mu_a <= 1.0, "gaboriau_induction: mu(A) must lie in (0,1]");
    return 1.0 + mu_a * (cost_restricted - 1.0);
}

std::uint32_t uniform_cluster_index(const ClusterDecomposition& dec, std::uint64_t seed) {
    require(dec.count >= 1, "uniform_cluster_select: no clusters");
    Rng rng = make_rng(seed, "cluster-select");
    return std::uniform_int_distribution<std::uint32_t>(0, dec.count - 1)(rng);
}

Colouring uniform_cluster_select(const ClusterDecomposition& dec, std::uint64_t seed) {
    const auto chosen = static_cast<std::int32_t>(uniform_cluster_index(dec, seed));
    std::vector<Colour> colours(dec.cluster_of.size(), out_colour);
    for (std::size_t v = 0; v < colours.size(); ++v) {
        if (dec.cluster_of[v] == chosen) colours[v] = in_colour;
    }
    return {std::move(colours), 2};
}

PercolationRow percolation_trial(const WindowGraph& w, double p, std::uint64_t seed) {
    require(p >= 0.0 && p <= 1.0, "percolation p must lie in [0,1]");
    const Colouring subset = sample(ColouringModel::bernoulli({p, 1.0 - p}), w, seed);
    const ClusterDecomposition dec = decompose(w, subset);
    const FactorGraphEdges extra = connect_clusters(w, dec);
    const CostBound bound = cost_upper_bound(w, dec, extra);
    PercolationRow row;
    row.p = p;
    row.intensity = bound.intensity;
    row.cluster_count = dec.count;
    const auto members = dec.subset_size();
    row.largest_cluster_fraction = members ? static_cast<double>(dec.largest()) / members : 0.0;
    row.cost_bound_generators = bound.generator_bound;
    row.cost_bound_empirical = bound.empirical_bound;
    return row;
}

}  // namespace urglab
