#include "urglab/kazhdan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "urglab/clusters.hpp"
#include "urglab/errors.hpp"
#include "urglab/parallel.hpp"
#include "urglab/random.hpp"

namespace urglab {

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    require(!weights_.empty(), "weight vector must be nonempty");
    double total = 0.0;
    for (double x : weights_) {
        require(x >= 0.0, "weights must be nonnegative");
        total += x;
    }
    require(std::abs(total - 1.0) <= 1e-12, "weights must sum to 1");
}

WeightVector WeightVector::uniform(std::uint32_t k) {
    require(k >= 1, "need at least one part");
    return WeightVector(std::vector<double>(k, 1.0 / k));
}

double WeightVector::min() const { return *std::min_element(weights_.begin(), weights_.end()); }

double d_infinity(const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size(), "d_infinity: length mismatch");
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
    return gap;
}

double d_infinity(const WeightVector& a, const WeightVector& b) { return d_infinity(a.values(), b.values()); }

std::vector<double> part_weights(const Colouring& partition) {
    std::vector<double> w;
    for (auto s : partition.class_sizes()) w.push_back(static_cast<double>(s) / partition.size());
    return w;
}

std::vector<std::string> KazhdanProblem::violations() const {
    std::vector<std::string> out;
    if (parts < 1) out.push_back("k must be >= 1");
    if (alpha.size() != parts) out.push_back("alpha must have k entries");
    if (!(eps >= 0.0 && eps < 1.0)) out.push_back("eps must lie in [0,1)");
    if (!(eps < alpha.min())) out.push_back("eps < min(alpha) required");
    if (budget.restarts < 1) out.push_back("restarts must be >= 1");
    if (!(budget.cooling > 0.0 && budget.cooling < 1.0)) out.push_back("cooling must lie in (0,1)");
    return out;
}

bool SizeWindow::admits(const std::vector<std::size_t>& sizes) const {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < lo[i] || sizes[i] > hi[i]) return false;
    }
    return true;
}

SizeWindow admissible_sizes(std::uint32_t n, const WeightVector& alpha, double eps) {
    require(eps >= 0.0, "eps must be nonnegative");
    constexpr double slop = 1e-9;
    SizeWindow win;
    std::uint64_t lo_sum = 0, hi_sum = 0;
    bool ok = true;
    for (std::uint32_t i = 0; i < alpha.size(); ++i) {
        const double target = n * alpha[i];
        const double raw_lo = std::ceil(n * (alpha[i] - eps) - slop);
        const double raw_hi = std::floor(n * (alpha[i] + eps) + slop);
        const double lo = std::max(1.0, std::min(raw_lo, std::floor(target + slop)));
        const double hi = std::min<double>(n, std::max(raw_hi, std::ceil(target - slop)));
        win.lo.push_back(static_cast<std::uint32_t>(std::max(0.0, lo)));
        win.hi.push_back(static_cast<std::uint32_t>(std::max(0.0, hi)));
        ok = ok && lo <= hi;
        lo_sum += win.lo.back();
        hi_sum += win.hi.back();
    }
    if (!ok || lo_sum > n || hi_sum < n) {
        std::ostringstream msg;
        msg << "infeasible balance for n=" << n << ": feasible class-size window is";
        for (std::size_t i = 0; i < win.lo.size(); ++i) msg << " [" << win.lo[i] << "," << win.hi[i] << "]";
        msg << " and sizes must sum to n";
        throw ValidationError(msg.str());
    }
    return win;
}

double kazhdan_value(const WindowGraph& w, const Colouring& partition) {
    return static_cast<double>(bichromatic_incidences(w, partition)) / w.n();
}

bool has_empty_part(const Colouring& partition) {
    const auto sizes = partition.class_sizes();
    return std::find(sizes.begin(), sizes.end(), 0) != sizes.end();
}

namespace {

void check_problem(const KazhdanProblem& problem) {
    const auto v = problem.violations();
    if (!v.empty()) throw ValidationError(v.front());
}

KazhdanResult finish(const WindowGraph& w, Colouring partition, bool certified) {
    KazhdanResult r{std::move(partition), 0, 0.0, {}, {}, false, false};
    r.boundary_incidences = bichromatic_incidences(w, r.partition);
    r.value = static_cast<double>(r.boundary_incidences) / w.n();
    r.weights = part_weights(r.partition);
    r.certified = certified;
    r.empty_part = has_empty_part(r.partition);
    return r;
}

}  // namespace

KazhdanResult brute_force_kazhdan(const WindowGraph& w, const KazhdanProblem& problem) {
    check_problem(problem);
    const std::uint32_t n = w.n();
    const std::uint32_t k = problem.parts;
    double states = 1.0;
    for (std::uint32_t i = 0; i < n; ++i) states *= k;
    if (states > 1e7) throw ValidationError("brute force instance too large: k^n > 10^7");
    const SizeWindow win = admissible_sizes(n, problem.alpha, problem.eps);

    std::vector<Colour> colours(n, 1);
    std::vector<std::size_t> sizes(k, 0);
    sizes[0] = n;
    std::vector<Colour> best;
    std::size_t best_count = static_cast<std::size_t>(-1);
    for (;;) {
        if (win.admits(sizes)) {
            std::size_t count = 0;
            for (Vertex u = 0; u < n && count < best_count; ++u) {
                for (const HalfEdge& e : w.neighbours(u)) count += colours[u] != colours[e.to];
            }
            if (count < best_count) {
                best_count = count;
                best = colours;
            }
        }
        // next colour sequence in lexicographic order, vertex 0 most significant
        std::int64_t pos = static_cast<std::int64_t>(n) - 1;
        while (pos >= 0 && colours[static_cast<std::size_t>(pos)] == k) {
            --sizes[k - 1];
            ++sizes[0];
            colours[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) break;
        auto& c = colours[static_cast<std::size_t>(pos)];
        --sizes[c - 1];
        ++c;
        ++sizes[c - 1];
    }
    return finish(w, Colouring(std::move(best), k), true);
}

namespace {

struct Chain {
    const WindowGraph& w;
    const SizeWindow& win;
    std::vector<Colour> colour;  // 1-based
    std::vector<std::size_t> sizes;
    std::int64_t incidences = 0;

    // Change in directed boundary incidences if v alone moves to part `to`.
    std::int64_t recolour_delta(Vertex v, Colour to) const {
        const Colour from = colour[v];
        std::int64_t delta = 0;
        for (const HalfEdge& e : w.neighbours(v)) {
            if (e.to == v) continue;
            const Colour c = colour[e.to];
            delta += 2 * ((c != to) - (c != from));
        }
        return delta;
    }

    void recolour(Vertex v, Colour to, std::int64_t delta) {
        --sizes[colour[v] - 1];
        ++sizes[to - 1];
        colour[v] = to;
        incidences += delta;
    }
};

std::vector<Colour> random_admissible(std::uint32_t n, std::uint32_t k, const SizeWindow& win, Rng& rng) {
    std::vector<std::uint32_t> sizes = win.lo;
    std::uint32_t placed = std::accumulate(sizes.begin(), sizes.end(), 0u);
    std::uniform_int_distribution<std::uint32_t> part(0, k - 1);
    while (placed < n) {
        const auto i = part(rng);
        if (sizes[i] < win.hi[i]) {
            ++sizes[i];
            ++placed;
        }
    }
    std::vector<Colour> colours;
    for (std::uint32_t i = 0; i < k; ++i) colours.insert(colours.end(), sizes[i], i + 1);
    std::shuffle(colours.begin(), colours.end(), rng);
    return colours;
}

struct RestartOutcome {
    std::vector<Colour> best;
    std::int64_t best_incidences;
    std::vector<TracePoint> trace;
};

RestartOutcome run_restart(const WindowGraph& w, const KazhdanProblem& problem, const SizeWindow& win,
                           std::uint32_t restart) {
    const std::uint32_t n = w.n();
    const std::uint32_t k = problem.parts;
    Rng rng = make_rng(problem.seed, "anneal", restart);
    Chain chain{w, win, random_admissible(n, k, win, rng), std::vector<std::size_t>(k, 0), 0};
    for (Colour c : chain.colour) ++chain.sizes[c - 1];
    chain.incidences = static_cast<std::int64_t>(
        bichromatic_incidences(w, Colouring(chain.colour, k)));

    const AnnealBudget& b = problem.budget;
    const std::uint32_t epoch_length = b.epoch_length ? b.epoch_length : std::max<std::uint32_t>(n, 1);
    const std::uint64_t iterations = b.iterations ? b.iterations : 1500ULL * epoch_length;
    double temperature = b.initial_temperature > 0.0 ? b.initial_temperature : w.degree_bound();

    RestartOutcome out{chain.colour, chain.incidences, {}};
    std::uniform_int_distribution<Vertex> pick_vertex(0, n - 1);
    std::uniform_int_distribution<Colour> pick_part(1, k);
    auto accept = [&](std::int64_t delta) {
        return delta <= 0 || uniform01(rng) < std::exp(-static_cast<double>(delta) / temperature);
    };

    std::vector<Vertex> cluster;
    std::vector<char> in_cluster(n, 0);
    std::uint32_t epoch = 0;
    for (std::uint64_t it = 0; it < iterations && k > 1; ++it) {
        const double move = uniform01(rng);
        const Vertex u = pick_vertex(rng);
        const Colour a = chain.colour[u];
        if (move < 0.6) {
            // swap u with a vertex of another part; sizes unchanged
            const Vertex v = pick_vertex(rng);
            const Colour bpart = chain.colour[v];
            if (bpart != a) {
                const auto d1 = chain.recolour_delta(u, bpart);
                chain.recolour(u, bpart, d1);
                const auto d2 = chain.recolour_delta(v, a);
                chain.recolour(v, a, d2);
                if (!accept(d1 + d2)) {
                    chain.recolour(v, bpart, -d2);
                    chain.recolour(u, a, -d1);
                }
            }
        } else if (move < 0.95) {
            const Colour to = pick_part(rng);
            if (to != a && chain.sizes[a - 1] > win.lo[a - 1] && chain.sizes[to - 1] < win.hi[to - 1]) {
                const auto d = chain.recolour_delta(u, to);
                if (accept(d)) chain.recolour(u, to, d);
            }
        } else {
            // cluster merge: move u's whole cluster in part a to part `to`
            const Colour to = pick_part(rng);
            if (to != a) {
                cluster.assign(1, u);
                in_cluster[u] = 1;
                std::int64_t touching = 0;
                for (std::size_t head = 0; head < cluster.size(); ++head) {
                    for (const HalfEdge& e : w.neighbours(cluster[head])) {
                        const Colour c = chain.colour[e.to];
                        if (c == to) ++touching;
                        if (c == a && !in_cluster[e.to]) {
                            in_cluster[e.to] = 1;
                            cluster.push_back(e.to);
                        }
                    }
                }
                const std::size_t m = cluster.size();
                const bool fits = chain.sizes[a - 1] >= win.lo[a - 1] + m && chain.sizes[to - 1] + m <= win.hi[to - 1];
                const std::int64_t delta = -2 * touching;
                if (fits && touching > 0 && accept(delta)) {
                    for (Vertex x : cluster) {
                        --chain.sizes[a - 1];
                        ++chain.sizes[to - 1];
                        chain.colour[x] = to;
                    }
                    chain.incidences += delta;
                }
                for (Vertex x : cluster) in_cluster[x] = 0;
            }
        }
        if (chain.incidences < out.best_incidences) {
            out.best_incidences = chain.incidences;
            out.best = chain.colour;
        }
        if ((it + 1) % epoch_length == 0) {
            out.trace.push_back({restart, epoch, temperature, static_cast<double>(chain.incidences) / n,
                                 static_cast<double>(out.best_incidences) / n});
            ++epoch;
            temperature *= b.cooling;
        }
    }
    return out;
}

}  // namespace

KazhdanResult anneal_kazhdan(const WindowGraph& w, const KazhdanProblem& problem) {
    check_problem(problem);
    const SizeWindow win = admissible_sizes(w.n(), problem.alpha, problem.eps);
    auto outcomes = parallel_map(problem.budget.restarts, [&](std::size_t r) {
        return run_restart(w, problem, win, static_cast<std::uint32_t>(r));
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < outcomes.size(); ++r) {
        const auto& cand = outcomes[r];
        const auto& cur = outcomes[best];
        if (cand.best_incidences < cur.best_incidences ||
            (cand.best_incidences == cur.best_incidences && cand.best < cur.best)) {
            best = r;
        }
    }
    KazhdanResult result = finish(w, Colouring(outcomes[best].best, problem.parts), false);
    for (auto& o : outcomes) result.trace.insert(result.trace.end(), o.trace.begin(), o.trace.end());
    return result;
}

MergeResult cluster_merge_move(const WindowGraph& w, const Colouring& partition, Colour from, Colour to,
                               double eps, std::uint64_t seed) {
    require(partition.size() == w.n(), "partition size does not match the window");
    require(from != to, "cluster_merge_move: parts must differ");
    require(from >= 1 && from <= partition.d() && to >= 1 && to <= partition.d(),
            "cluster_merge_move: part out of range");
    require(eps >= 0.0 && eps <= 1.0, "cluster_merge_move: eps must lie in [0,1]");

    const ClusterDecomposition dec = decompose(w, partition.mask(from));
    std::vector<char> eligible(dec.count, 0);
    for (Vertex u = 0; u < w.n(); ++u) {
        if (dec.cluster_of[u] == no_cluster) continue;
        for (const HalfEdge& e : w.neighbours(u)) {
            if (partition[e.to] == to) eligible[static_cast<std::size_t>(dec.cluster_of[u])] = 1;
        }
    }
    MergeResult r{partition};
    Rng rng = make_rng(seed, "cluster-merge");
    std::bernoulli_distribution coin(eps);
    std::vector<char> moved(dec.count, 0);
    for (std::uint32_t c = 0; c < dec.count; ++c) {
        if (!eligible[c]) continue;
        ++r.eligible_clusters;
        if (coin(rng)) {
            moved[c] = 1;
            ++r.moved_clusters;
        }
    }
    r.identity = r.eligible_clusters == 0;

    std::vector<Colour> colours(partition.values().begin(), partition.values().end());
    std::size_t touching = 0;
    for (Vertex u = 0; u < w.n(); ++u) {
        const auto id = dec.cluster_of[u];
        if (id == no_cluster || !moved[static_cast<std::size_t>(id)]) continue;
        colours[u] = to;
        ++r.moved_vertices;
        for (const HalfEdge& e : w.neighbours(u)) touching += partition[e.to] == to;
    }
    // Moved sets are unions of whole clusters of `from`, so no boundary is
    // created; each undirected edge into `to` loses both of its incidences.
    r.decrement_incidences = 2 * touching;
    r.decrement = static_cast<double>(r.decrement_incidences) / w.n();
    r.partition = Colouring(std::move(colours), partition.d());
    return r;
}

std::vector<ProfileRow> kazhdan_profile(const WindowFamily& family, const std::vector<std::uint32_t>& sizes,
                                        const KazhdanProblem& problem) {
    std::vector<ProfileRow> rows;
    for (std::uint32_t size : sizes) {
        const auto start = std::chrono::steady_clock::now();
        const WindowGraph w = family(size, derive_seed(problem.seed, "profile-window", size));
        KazhdanProblem p = problem;
        p.seed = derive_seed(problem.seed, "profile", size);
        const KazhdanResult r = anneal_kazhdan(w, p);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        rows.push_back({w.n(), r.value, d_infinity(r.weights, problem.alpha.values()), elapsed.count()});
    }
    return rows;
}

}  // namespace urglab
