// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "urglab/clusters.hpp"
#include "urglab/colouring.hpp"
#include "urglab/gauss.hpp"
#include "urglab/graph.hpp"
#include "urglab/kazhdan.hpp"
#include "urglab/palm.hpp"
#include "urglab/random.hpp"
#include "urglab/runner.hpp"
#include "urglab/transport.hpp"

using namespace urglab;

namespace {

constexpr std::uint64_t master = 20261015;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::uint32_t between(Rng& rng, std::uint32_t lo, std::uint32_t hi) {
    return lo + static_cast<std::uint32_t>(rng() % (hi - lo + 1));
}

WindowGraph random_window(Rng& rng) {
    if (rng() % 2) {
        const std::uint32_t d = between(rng, 1, 3);
        const std::uint32_t side = d == 1 ? between(rng, 3, 60) : d == 2 ? between(rng, 3, 12) : between(rng, 3, 5);
        return build_torus_window(d, side);
    }
    const std::uint32_t k = between(rng, 1, 3);
    return build_random_regular(k, between(rng, 2 * k + 1, 150), rng());
}

Colouring random_colouring(const WindowGraph& w, Rng& rng) {
    const std::uint32_t d = between(rng, 1, 4);
    return sample(ColouringModel::uniform(d), w, rng());
}

// Asymmetric radius-2 transport: depends on the root colour, the edge index
// and the colours around u.
TransportFunction lopsided_transport() {
    return {"lopsided", 2, [](const RootedBall& b, std::uint32_t edge) {
                double far = 0;
                for (const auto& v : b.vertices()) far += v.depth == 2 && v.colour == 1;
                return b.root().colour * (edge + 1.0) + 0.5 * far;
            }};
}

Outcome mtp_exactness() {
    Rng rng(derive_seed(master, "acceptance-mtp", 0));
    std::size_t failures = 0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto w = random_window(rng);
        const auto c = random_colouring(w, rng);
        TransportFunction f;
        switch (rng() % 5) {
            case 0: f = transports::constant(uniform01(rng)); break;
            case 1: f = transports::colour_indicator(between(rng, 1, c.d())); break;
            case 2: f = transports::degree_weighted(between(rng, 1, c.d())); break;
            case 3: f = transports::bichromatic(); break;
            default: f = lopsided_transport();
        }
        const auto r = mtp_check(w, c, f);
        worst = std::max(worst, r.abs_diff / std::max(r.lhs, 1.0));
        failures += !(r.abs_diff <= 1e-9 * std::max(r.lhs, 1.0));
    }
    std::ostringstream s;
    s << "1000 triples, " << failures << " inexact, worst relative gap " << worst;
    return {failures == 0, s.str()};
}

VertexFunction random_vertex_function(Rng& rng, std::uint32_t colours) {
    std::vector<double> table(colours);
    for (auto& x : table) x = 4 * uniform01(rng) - 2;
    switch (rng() % 3) {
        case 0: return vertex_functions::colour_table(table);
        case 1: return vertex_functions::colour_count(between(rng, 1, colours), between(rng, 0, 2));
        default:
            return sum(vertex_functions::colour_table(table),
                       vertex_functions::colour_count(between(rng, 1, colours), between(rng, 0, 1)));
    }
}

Outcome norm_bound() {
    Rng rng(derive_seed(master, "acceptance-norm", 0));
    std::size_t violations = 0;
    double tightest = 0;
    for (int i = 0; i < 10000; ++i) {
        WindowGraph w = rng() % 2 ? build_torus_window(between(rng, 1, 2), between(rng, 3, 9))
                                  : build_random_regular(between(rng, 1, 3), between(rng, 7, 60), rng());
        const auto c = random_colouring(w, rng);
        const auto r = norm_bound_check(w, c, random_vertex_function(rng, c.d()));
        violations += !r.holds;
        if (r.rhs_bound > 0) tightest = std::max(tightest, r.lhs_norm / r.rhs_bound);
    }
    std::ostringstream s;
    s << "10^4 instances, " << violations << " violations, largest lhs/bound " << tightest;
    return {violations == 0, s.str()};
}

Outcome gauss_orthant() {
    bool ok = std::abs(orthant_probability(0.0) - 0.25) < 1e-15;
    std::ostringstream s;
    for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        const auto mc = orthant_probability_mc(rho, 1000000, derive_seed(master, "acceptance-gauss", 0));
        const double gap = std::abs(orthant_probability(rho) - mc.estimate);
        ok = ok && gap < 4 * mc.std_error;
        s << "rho=" << rho << " gap/se=" << gap / mc.std_error << "  ";
    }
    return {ok, s.str()};
}

Outcome palm_cell_volume() {
    bool ok = true;
    std::ostringstream s;
    struct Setting {
        double t;
        double side;
        std::uint32_t d;
    };
    for (const auto& [t, side, d] : {Setting{1, 20, 2}, Setting{4, 20, 2}, Setting{1, 50, 1}}) {
        const auto r = verify_mean_cell_volume(t, FlatTorus(d, side), 1000, 10000,
                                               derive_seed(master, "acceptance-cellvol", d));
        const double z = r.abs_error / r.estimate.std_error;
        ok = ok && z <= 4;
        s << "(t=" << t << ",L=" << side << ",d=" << d << ") " << r.estimate.estimate << " vs " << r.target
          << " z=" << z << "  ";
    }
    return {ok, s.str()};
}

Outcome voronoi_inversion() {
    bool ok = true;
    std::ostringstream s;
    for (const auto& f : {functionals::constant_one(), functionals::capped_nearest_distance(),
                          functionals::occupied_unit_ball()}) {
        const auto r = verify_voronoi_inversion(f, 1.0, FlatTorus(2, 20), 1000, 10000,
                                                derive_seed(master, "acceptance-inversion", 0));
        const double z = std::abs(r.diff) / r.combined_std_error;
        ok = ok && z <= 4;
        s << f.name << " lhs=" << r.lhs << " rhs=" << r.rhs << " z=" << z << "  ";
    }
    return {ok, s.str()};
}

Outcome kazhdan_oracle() {
    std::vector<std::pair<std::string, WindowGraph>> windows;
    for (std::uint32_t n = 3; n <= 12; ++n) {
        windows.emplace_back("C" + std::to_string(n), build_torus_window(1, n));
        windows.emplace_back("P" + std::to_string(n), build_path(n));
    }
    windows.emplace_back("K4", build_complete(4));
    KazhdanProblem p;
    p.seed = derive_seed(master, "acceptance-kazhdan", 0);
    std::size_t mismatches = 0;
    std::string which;
    for (const auto& [name, w] : windows) {
        const auto exact = brute_force_kazhdan(w, p);
        const auto heur = anneal_kazhdan(w, p);
        if (heur.boundary_incidences != exact.boundary_incidences) {
            ++mismatches;
            which += " " + name;
        }
    }
    const double c8 = brute_force_kazhdan(build_torus_window(1, 8), p).value;
    std::ostringstream s;
    s << windows.size() << " windows, " << mismatches << " mismatches" << which << "; C8 optimum " << c8;
    return {mismatches == 0 && c8 == 0.5, s.str()};
}

Outcome merge_decrement() {
    Rng rng(derive_seed(master, "acceptance-merge", 0));
    std::size_t wrong = 0, increases = 0, moved = 0;
    auto instance = [&](std::uint32_t k, double eps) {
        const auto w = rng() % 2 ? build_torus_window(2, between(rng, 3, 8))
                                 : build_random_regular(2, between(rng, 10, 60), rng());
        std::vector<Colour> colours(w.n());
        for (auto& x : colours) x = between(rng, 1, k);
        const Colouring part(colours, k);
        const Colour from = between(rng, 1, k);
        const Colour to = from % k + 1;
        const auto r = cluster_merge_move(w, part, from, to, eps, rng());
        std::vector<std::uint32_t> before(part.values().begin(), part.values().end());
        std::vector<std::uint32_t> after(r.partition.values().begin(), r.partition.values().end());
        const auto b = static_cast<std::int64_t>(oracle::boundary_count(w, before));
        const auto a = static_cast<std::int64_t>(oracle::boundary_count(w, after));
        wrong += b - a != static_cast<std::int64_t>(r.decrement_incidences) ||
                 r.decrement != static_cast<double>(b - a) / w.n();
        moved += r.moved_clusters;
        return a > b;
    };
    for (int i = 0; i < 100; ++i) instance(2 + static_cast<std::uint32_t>(i % 2), i % 4 == 0 ? 1.0 : uniform01(rng));
    for (int i = 0; i < 100; ++i) increases += instance(2, 1.0);
    std::ostringstream s;
    s << "200 instances, " << moved << " clusters moved, " << wrong << " decrement mismatches, " << increases
      << " increases at eps=1, k=2";
    return {wrong == 0 && increases == 0, s.str()};
}

Outcome cost_pipeline() {
    const std::uint32_t n = 64;
    const auto w = build_torus_window(1, n);
    bool ok = true;
    double prev_gap = 1e9, prev_degree_part = 1e9;
    std::ostringstream s;
    for (std::uint32_t k : {2u, 4u, 8u}) {
        std::vector<bool> mask(n, false);
        for (Vertex v = 0; v < n; v += k) mask[v] = true;
        const auto dec = decompose(w, mask);
        const auto b = cost_upper_bound(w, dec, connect_clusters(w, dec));
        // 1 + (1/2) E[deg]: the bound before the intensity is subtracted
        const double degree_part = b.empirical_bound + b.intensity;
        const double gap = std::abs(b.empirical_bound - 1);
        ok = ok && b.intensity == 1.0 / k && b.empirical_bound <= b.generator_bound &&
             std::abs(b.generator_bound - (1 + 2.0 / k)) < 1e-12 && gap <= prev_gap + 1e-12 &&
             degree_part < prev_degree_part && degree_part - 1 <= 1.0 / k;
        prev_gap = gap;
        prev_degree_part = degree_part;
        s << "k=" << k << " empirical=" << b.empirical_bound << " generators=" << b.generator_bound
          << " 1+deg/2=" << degree_part << "  ";
    }
    const double g = gaboriau_induction(5, 0.1);
    ok = ok && std::abs(g - 1.4) < 1e-12;
    s << "induction(5, 0.1)=" << g;
    return {ok, s.str()};
}

Outcome union_find() {
    Rng rng(derive_seed(master, "acceptance-clusters", 0));
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto w = random_window(rng);
        std::vector<bool> mask(w.n());
        const double p = uniform01(rng);
        for (Vertex v = 0; v < w.n(); ++v) mask[v] = uniform01(rng) < p;
        const auto dec = decompose(w, mask);
        std::uint32_t count = 0;
        const auto labels = oracle::flood_fill(w, mask, count);
        mismatches += dec.count != count || dec.cluster_of != labels;
    }
    std::ostringstream s;
    s << "1000 instances, " << mismatches << " mismatches";
    return {mismatches == 0, s.str()};
}

// Every experiment kind computed twice, the second time with a different
// worker cap; data outputs must match byte for byte.
Outcome reproducibility() {
    const std::vector<std::vector<std::string>> configs = {
        {"kind=mtp-check", "model=random-regular", "n=200", "trials=20", "transport=degree-weighted"},
        {"kind=kazhdan", "model=torus", "L=6", "restarts=3"},
        {"kind=percolation", "L=64", "p=0.2,0.5", "trials=50"},
        {"kind=palm", "L=10", "trials=30", "m=500", "check=inversion"},
        {"kind=palm", "L=10", "trials=30", "check=locfin"},
        {"kind=cost-bound", "source=palm", "L=10", "d=2"},
        {"kind=cost-bound", "subset=bernoulli", "L=32", "d=2", "p=0.3"},
        {"kind=gauss-check", "n=100000"},
    };
    const char* saved = std::getenv("URGLAB_THREADS");
    const std::string restore = saved ? saved : "";
    std::size_t files = 0, differing = 0;
    for (const auto& assignments : configs) {
        ExperimentConfig c;
        for (const auto& a : assignments) c.assign(a);
        c.set("seed", std::to_string(master));
        setenv("URGLAB_THREADS", "1", 1);
        const auto first = compute_outputs(c);
        setenv("URGLAB_THREADS", "3", 1);
        const auto second = compute_outputs(c);
        files += first.size();
        differing += first != second;
    }
    if (saved) setenv("URGLAB_THREADS", restore.c_str(), 1);
    else unsetenv("URGLAB_THREADS");
    std::ostringstream s;
    s << configs.size() << " runs, " << files << " data files, " << differing << " runs differing";
    return {differing == 0, s.str()};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_seconds;  // 0: no runtime limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"mass transport exactness", 30, mtp_exactness},
        {"norm bound fuzz", 60, norm_bound},
        {"gaussian orthant constant", 20, gauss_orthant},
        {"palm cell volume", 300, palm_cell_volume},
        {"voronoi inversion", 300, voronoi_inversion},
        {"kazhdan brute-force oracle", 120, kazhdan_oracle},
        {"cluster-merge decrement", 0, merge_decrement},
        {"cost bound pipeline", 0, cost_pipeline},
        {"cluster decomposition", 0, union_find},
        {"reproducibility", 0, reproducibility},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s %2zu %s: %s [%.1fs%s]\n", pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs,
                    in_time ? "" : " over limit");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
