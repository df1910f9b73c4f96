#include "urglab/ball.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "urglab/errors.hpp"

namespace urglab {

RootedBall::RootedBall(std::uint32_t radius, std::vector<BallVertex> vertices,
                       std::vector<std::vector<HalfEdge>> adjacency)
    : radius_(radius), vertices_(std::move(vertices)), adjacency_(std::move(adjacency)) {
    require(!vertices_.empty() && vertices_.front().depth == 0, "ball must contain its root at index 0");
    require(adjacency_.size() == vertices_.size(), "ball adjacency size mismatch");
    for (const auto& bv : vertices_) require(bv.depth <= radius_, "ball vertex beyond radius");
}

std::size_t RootedBall::directed_edge_count() const {
    std::size_t total = 0;
    for (const auto& list : adjacency_) total += list.size();
    return total;
}

bool RootedBall::is_tree() const {
    std::size_t half_edges = 0;
    for (std::uint32_t i = 0; i < size(); ++i) {
        std::vector<Vertex> seen;
        for (const HalfEdge& e : adjacency_[i]) {
            if (e.to == i) return false;
            if (std::find(seen.begin(), seen.end(), e.to) != seen.end()) return false;
            seen.push_back(e.to);
            ++half_edges;
        }
    }
    return half_edges == 2 * (static_cast<std::size_t>(size()) - 1);
}

namespace {

// BFS over an adjacency accessor. `expand(x)` yields the half-edges of x in
// label order; targets are keys of type Key.
template <class Key, class Expand, class Colour_of>
RootedBall bfs_ball(Key centre, std::uint32_t radius, Expand&& expand, Colour_of&& colour_of) {
    std::vector<Key> keys{centre};
    std::vector<BallVertex> vertices;
    std::unordered_map<Key, std::uint32_t> local{{centre, 0}};
    std::vector<std::uint32_t> depth{0};
    for (std::size_t head = 0; head < keys.size(); ++head) {
        if (depth[head] == radius) continue;
        for (const HalfEdge& e : expand(keys[head])) {
            const Key k = static_cast<Key>(e.to);
            if (local.emplace(k, static_cast<std::uint32_t>(keys.size())).second) {
                keys.push_back(k);
                depth.push_back(depth[head] + 1);
            }
        }
    }
    std::vector<std::vector<HalfEdge>> adjacency(keys.size());
    vertices.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto [origin, colour] = colour_of(keys[i]);
        vertices.push_back({origin, depth[i], colour});
        for (const HalfEdge& e : expand(keys[i])) {
            auto it = local.find(static_cast<Key>(e.to));
            if (it != local.end()) adjacency[i].push_back({it->second, e.label});
        }
    }
    return {radius, std::move(vertices), std::move(adjacency)};
}

}  // namespace

RootedBall RootedBall::subball(std::uint32_t centre, std::uint32_t radius) const {
    require(centre < size(), "subball centre out of range");
    require(vertices_[centre].depth + radius <= radius_, "subball does not fit inside this ball");
    return bfs_ball<std::uint32_t>(
        centre, radius, [&](std::uint32_t x) { return std::span<const HalfEdge>(adjacency_[x]); },
        [&](std::uint32_t x) { return std::pair{vertices_[x].origin, vertices_[x].colour}; });
}

RootedBall ball(const WindowGraph& w, std::span<const Colour> colours, Vertex u, std::uint32_t r) {
    require(u < w.n(), "ball root out of range");
    require(colours.empty() || colours.size() == w.n(), "colouring size does not match the window");
    return bfs_ball<Vertex>(
        u, r, [&](Vertex x) { return w.neighbours(x); },
        [&](Vertex x) { return std::pair{x, colours.empty() ? Colour{1} : colours[x]}; });
}

RootedBall ball(const WindowGraph& w, const Colouring& c, Vertex u, std::uint32_t r) {
    return ball(w, c.values(), u, r);
}

namespace {

using Multiplicities = std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>;

// Per vertex: sorted (neighbour, multiplicity) pairs, loops included.
Multiplicities multiplicities(const RootedBall& b) {
    Multiplicities out(b.size());
    for (std::uint32_t i = 0; i < b.size(); ++i) {
        std::map<std::uint32_t, std::uint32_t> m;
        for (const HalfEdge& e : b.neighbours(i)) ++m[e.to];
        out[i].assign(m.begin(), m.end());
    }
    return out;
}

std::uint32_t multiplicity(const Multiplicities& m, std::uint32_t x, std::uint32_t y) {
    const auto& row = m[x];
    auto it = std::lower_bound(row.begin(), row.end(), std::pair{y, 0u});
    return (it != row.end() && it->first == y) ? it->second : 0;
}

// Joint colour refinement of both balls; returns stable class ids.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> refine(const RootedBall& a,
                                                                         const Multiplicities& ma,
                                                                         const RootedBall& b,
                                                                         const Multiplicities& mb) {
    using Signature = std::vector<std::uint64_t>;
    auto initial = [](const RootedBall& ball, std::uint32_t i) {
        const BallVertex& v = ball.vertex(i);
        return Signature{v.depth, v.colour, ball.neighbours(i).size()};
    };
    std::vector<Signature> sa(a.size()), sb(b.size());
    for (std::uint32_t i = 0; i < a.size(); ++i) sa[i] = initial(a, i);
    for (std::uint32_t i = 0; i < b.size(); ++i) sb[i] = initial(b, i);

    std::vector<std::uint32_t> ca(a.size()), cb(b.size());
    std::size_t classes = 0;
    for (;;) {
        std::map<Signature, std::uint32_t> ids;
        for (const auto& s : sa) ids.emplace(s, 0);
        for (const auto& s : sb) ids.emplace(s, 0);
        std::uint32_t next = 0;
        for (auto& [sig, id] : ids) id = next++;
        for (std::uint32_t i = 0; i < a.size(); ++i) ca[i] = ids[sa[i]];
        for (std::uint32_t i = 0; i < b.size(); ++i) cb[i] = ids[sb[i]];
        if (ids.size() == classes) break;
        classes = ids.size();
        auto next_signature = [](const Multiplicities& m, const std::vector<std::uint32_t>& cls,
                                 std::uint32_t i) {
            Signature s{cls[i]};
            std::vector<std::uint64_t> around;
            for (auto [y, mult] : m[i]) around.push_back((static_cast<std::uint64_t>(cls[y]) << 32) | mult);
            std::sort(around.begin(), around.end());
            s.insert(s.end(), around.begin(), around.end());
            return s;
        };
        for (std::uint32_t i = 0; i < a.size(); ++i) sa[i] = next_signature(ma, ca, i);
        for (std::uint32_t i = 0; i < b.size(); ++i) sb[i] = next_signature(mb, cb, i);
    }
    return {ca, cb};
}

class IsoSearch {
public:
    IsoSearch(const RootedBall& a, const RootedBall& b)
        : a_(a), b_(b), ma_(multiplicities(a)), mb_(multiplicities(b)) {
        std::tie(ca_, cb_) = refine(a_, ma_, b_, mb_);
        image_.assign(a_.size(), unset);
        preimage_.assign(b_.size(), unset);
    }

    bool run() {
        std::vector<std::uint32_t> hist_a(a_.size() + b_.size(), 0), hist_b(hist_a.size(), 0);
        for (auto c : ca_) ++hist_a[c];
        for (auto c : cb_) ++hist_b[c];
        if (hist_a != hist_b) return false;
        if (ca_[0] != cb_[0]) return false;
        if (!assign(0, 0)) return false;
        return extend(1);
    }

private:
    static constexpr std::uint32_t unset = static_cast<std::uint32_t>(-1);

    bool consistent(std::uint32_t x, std::uint32_t y) const {
        if (ca_[x] != cb_[y] || preimage_[y] != unset) return false;
        if (multiplicity(ma_, x, x) != multiplicity(mb_, y, y)) return false;
        for (auto [nx, mult] : ma_[x]) {
            if (nx != x && image_[nx] != unset && multiplicity(mb_, y, image_[nx]) != mult) return false;
        }
        for (auto [ny, mult] : mb_[y]) {
            if (ny != y && preimage_[ny] != unset && multiplicity(ma_, x, preimage_[ny]) != mult) return false;
        }
        return true;
    }

    bool assign(std::uint32_t x, std::uint32_t y) {
        if (!consistent(x, y)) return false;
        image_[x] = y;
        preimage_[y] = x;
        return true;
    }

    void unassign(std::uint32_t x) {
        preimage_[image_[x]] = unset;
        image_[x] = unset;
    }

    bool extend(std::uint32_t x) {
        if (x == a_.size()) return true;
        // BFS order guarantees a mapped neighbour at smaller index.
        std::uint32_t anchor = unset;
        for (auto [nx, mult] : ma_[x]) {
            if (nx < x) {
                anchor = nx;
                break;
            }
        }
        std::vector<std::uint32_t> candidates;
        if (anchor == unset) {
            for (std::uint32_t y = 0; y < b_.size(); ++y) candidates.push_back(y);
        } else {
            for (auto [ny, mult] : mb_[image_[anchor]]) candidates.push_back(ny);
        }
        for (std::uint32_t y : candidates) {
            if (!assign(x, y)) continue;
            if (extend(x + 1)) return true;
            unassign(x);
        }
        return false;
    }

    const RootedBall& a_;
    const RootedBall& b_;
    Multiplicities ma_, mb_;
    std::vector<std::uint32_t> ca_, cb_;
    std::vector<std::uint32_t> image_, preimage_;
};

}  // namespace

bool balls_isomorphic(const RootedBall& a, const RootedBall& b) {
    require(a.radius() == b.radius(), "balls_isomorphic: radius mismatch");
    if (a.size() != b.size() || a.directed_edge_count() != b.directed_edge_count()) return false;
    if (a.root().colour != b.root().colour) return false;
    return IsoSearch(a, b).run();
}

LocalDistance local_distance(const WindowGraph& g, std::span<const Colour> g_colours, Vertex u,
                             const WindowGraph& h, std::span<const Colour> h_colours, Vertex v,
                             std::uint32_t r_max) {
    int matched = -1;
    for (std::uint32_t r = 0; r <= r_max; ++r) {
        if (!balls_isomorphic(ball(g, g_colours, u, r), ball(h, h_colours, v, r))) break;
        matched = static_cast<int>(r);
    }
    if (matched == static_cast<int>(r_max)) {
        return {std::ldexp(1.0, -static_cast<int>(r_max) - 1), matched, true};
    }
    return {matched < 0 ? 1.0 : std::ldexp(1.0, -matched), matched, false};
}

}  // namespace urglab
