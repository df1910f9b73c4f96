#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "urglab/colouring.hpp"
#include "urglab/errors.hpp"
#include "urglab/graph.hpp"
#include "urglab/kazhdan.hpp"
#include "urglab/random.hpp"

using namespace urglab;

namespace {

KazhdanProblem problem(std::uint32_t k, double eps, std::uint64_t seed = 1) {
    KazhdanProblem p;
    p.parts = k;
    p.alpha = WeightVector::uniform(k);
    p.eps = eps;
    p.seed = seed;
    return p;
}

Colouring random_partition(std::uint32_t n, std::uint32_t k, Rng& rng) {
    std::vector<Colour> c(n);
    for (auto& x : c) x = 1 + static_cast<Colour>(rng() % k);
    return Colouring(std::move(c), k);
}

}  // namespace

TEST_SUITE("kazhdan") {
    TEST_CASE("d_infinity") {
        CHECK(d_infinity(std::vector<double>{0.2, 0.8}, std::vector<double>{0.2, 0.8}) == 0.0);
        CHECK(d_infinity(WeightVector({1, 0}), WeightVector({0, 1})) == 1.0);
        CHECK(d_infinity(WeightVector({0.5, 0.3, 0.2}), WeightVector({0.4, 0.4, 0.2})) == doctest::Approx(0.1));
        CHECK_THROWS_AS(d_infinity(std::vector<double>{1}, std::vector<double>{0.5, 0.5}), ValidationError);
        CHECK_THROWS_AS(WeightVector({0.6, 0.6}), ValidationError);
    }

    TEST_CASE("kazhdan value examples") {
        const auto c8 = build_torus_window(1, 8);
        CHECK(kazhdan_value(c8, Colouring(std::vector<Colour>(8, 1), 1)) == 0.0);
        CHECK(kazhdan_value(c8, Colouring({1, 1, 1, 1, 2, 2, 2, 2}, 2)) == 0.5);
        CHECK(kazhdan_value(build_complete(4), Colouring({1, 1, 2, 2}, 2)) == 2.0);
    }

    TEST_CASE("kazhdan value equals expansion and ignores part labels") {
        Rng rng(3);
        for (int t = 0; t < 200; ++t) {
            const auto w = build_random_regular(2, 20 + static_cast<std::uint32_t>(rng() % 20), rng());
            const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng() % 3);
            const auto part = random_partition(w.n(), k, rng);
            CHECK(kazhdan_value(w, part) == expansion(w, part));
            std::vector<Colour> perm(k);
            std::iota(perm.begin(), perm.end(), 1u);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<Colour> relabelled(w.n());
            for (Vertex v = 0; v < w.n(); ++v) relabelled[v] = perm[part[v] - 1];
            CHECK(kazhdan_value(w, Colouring(relabelled, k)) == kazhdan_value(w, part));
        }
    }

    TEST_CASE("empty parts are flagged") {
        CHECK(has_empty_part(Colouring({1, 1, 1}, 2)));
        CHECK_FALSE(has_empty_part(Colouring({1, 2, 1}, 2)));
    }

    TEST_CASE("brute force examples") {
        const auto c8 = build_torus_window(1, 8);
        const auto r = brute_force_kazhdan(c8, problem(2, 0));
        CHECK(r.value == 0.5);
        CHECK(r.certified);
        CHECK(r.boundary_incidences == 4);
        CHECK(r.partition.values()[0] == 1);
        CHECK(brute_force_kazhdan(build_path(4), problem(2, 0)).value == 0.5);
        CHECK(brute_force_kazhdan(build_complete(5), problem(1, 0)).value == 0.0);
        CHECK(brute_force_kazhdan(build_complete(4), problem(2, 0)).value == 2.0);
    }

    TEST_CASE("brute force guard") {
        CHECK_THROWS_AS(brute_force_kazhdan(build_torus_window(1, 30), problem(2, 0)), ValidationError);
    }

    TEST_CASE("infeasible balance names the size window") {
        KazhdanProblem p = problem(2, 0);
        p.alpha = WeightVector({0.9, 0.1});
        p.eps = 0.01;
        CHECK_NOTHROW(admissible_sizes(8, p.alpha, p.eps));
        CHECK_THROWS_AS(admissible_sizes(0, p.alpha, p.eps), ValidationError);
        CHECK_FALSE(problem(2, 0.6).violations().empty());
        CHECK(problem(2, 0.1).violations().empty());
    }

    TEST_CASE("brute force optimum is nonincreasing in eps") {
        for (const auto& w : {build_torus_window(1, 9), build_path(10), build_torus_window(2, 3)}) {
            double prev = 1e9;
            for (double eps : {0.0, 0.1, 0.2, 0.3, 0.45}) {
                const double v = brute_force_kazhdan(w, problem(2, eps)).value;
                CHECK(v <= prev);
                prev = v;
            }
        }
    }

    TEST_CASE("annealing matches brute force on small cycles, paths and K4") {
        std::vector<WindowGraph> windows;
        for (std::uint32_t n = 4; n <= 12; ++n) {
            windows.push_back(build_torus_window(1, n));
            windows.push_back(build_path(n));
        }
        windows.push_back(build_complete(4));
        for (const auto& w : windows) {
            const auto exact = brute_force_kazhdan(w, problem(2, 0));
            const auto heur = anneal_kazhdan(w, problem(2, 0, 11));
            CHECK(heur.value == doctest::Approx(exact.value));
            CHECK_FALSE(heur.certified);
            CHECK(admissible_sizes(w.n(), WeightVector::uniform(2), 0).admits(heur.partition.class_sizes()));
        }
    }

    TEST_CASE("annealing stays feasible and above the optimum") {
        Rng rng(8);
        for (int t = 0; t < 12; ++t) {
            const auto w = build_random_regular(2, 9 + 2 * static_cast<std::uint32_t>(t % 3), rng());
            for (std::uint32_t k : {2u, 3u}) {
                const double eps = 0.05 * static_cast<double>(t % 4);
                const auto p = problem(k, eps, rng());
                if (std::pow(k, w.n()) > 1e7) continue;
                const auto exact = brute_force_kazhdan(w, p);
                const auto heur = anneal_kazhdan(w, p);
                CHECK(heur.value >= exact.value - 1e-12);
                CHECK(admissible_sizes(w.n(), p.alpha, p.eps).admits(heur.partition.class_sizes()));
                CHECK(heur.value == kazhdan_value(w, heur.partition));
            }
        }
    }

    TEST_CASE("annealing is deterministic and traced") {
        const auto w = build_torus_window(2, 6);
        auto p = problem(2, 0, 99);
        p.budget.restarts = 3;
        const auto a = anneal_kazhdan(w, p);
        const auto b = anneal_kazhdan(w, p);
        CHECK(a.partition == b.partition);
        CHECK(a.value == b.value);
        REQUIRE_FALSE(a.trace.empty());
        for (std::size_t i = 1; i < a.trace.size(); ++i) {
            if (a.trace[i].restart == a.trace[i - 1].restart) CHECK(a.trace[i].best <= a.trace[i - 1].best);
        }
    }

    TEST_CASE("merge move examples") {
        const auto c8 = build_torus_window(1, 8);
        const Colouring arcs({1, 1, 1, 1, 2, 2, 2, 2}, 2);
        const auto none = cluster_merge_move(c8, arcs, 1, 2, 0.0, 4);
        CHECK(none.partition == arcs);
        const auto all = cluster_merge_move(c8, arcs, 1, 2, 1.0, 4);
        CHECK(all.partition == Colouring(std::vector<Colour>(8, 2), 2));
        CHECK(all.decrement == 0.5);
        CHECK(kazhdan_value(c8, all.partition) == 0.0);
        const auto idle = cluster_merge_move(c8, Colouring(std::vector<Colour>(8, 1), 2), 1, 2, 1.0, 4);
        CHECK(idle.identity);
        CHECK_THROWS_AS(cluster_merge_move(c8, arcs, 1, 1, 0.5, 4), ValidationError);
    }

    TEST_CASE("merge decrement equals recomputation") {
        Rng rng(12);
        for (int t = 0; t < 300; ++t) {
            const auto w = t % 2 ? build_torus_window(2, 4 + static_cast<std::uint32_t>(rng() % 6))
                                 : build_random_regular(2, 20 + static_cast<std::uint32_t>(rng() % 30), rng());
            const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng() % 3);
            const auto part = random_partition(w.n(), k, rng);
            const Colour from = 1 + static_cast<Colour>(rng() % k);
            const Colour to = from % k + 1;
            const double eps = t % 3 == 0 ? 1.0 : uniform01(rng);
            const auto r = cluster_merge_move(w, part, from, to, eps, rng());
            const double before = kazhdan_value(w, part);
            const double after = kazhdan_value(w, r.partition);
            CHECK(before - after == doctest::Approx(r.decrement));
            std::vector<std::uint32_t> plain_before(part.values().begin(), part.values().end());
            std::vector<std::uint32_t> plain_after(r.partition.values().begin(), r.partition.values().end());
            const double recount = (static_cast<double>(oracle::boundary_count(w, plain_before)) -
                                    static_cast<double>(oracle::boundary_count(w, plain_after))) /
                                   w.n();
            CHECK(recount == doctest::Approx(r.decrement));
            if (k == 2 && eps == 1.0) CHECK(after <= before);
        }
    }

    TEST_CASE("profile on cycles follows the arc cut") {
        const WindowFamily cycles = [](std::uint32_t n, std::uint64_t) { return build_torus_window(1, n); };
        const auto rows = kazhdan_profile(cycles, {8, 16, 32}, problem(2, 0, 5));
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].value == doctest::Approx(0.5));
        CHECK(rows[1].value == doctest::Approx(0.25));
        CHECK(rows[2].value == doctest::Approx(0.125));
        for (const auto& r : kazhdan_profile(cycles, {8, 16}, problem(1, 0, 5))) CHECK(r.value == 0.0);
    }

    TEST_CASE("profile on random regular graphs stays positive") {
        const WindowFamily rr = [](std::uint32_t n, std::uint64_t seed) { return build_random_regular(2, n, seed); };
        auto p = problem(2, 0.05, 5);
        p.budget.restarts = 2;
        const auto rows = kazhdan_profile(rr, {64, 128}, p);
        for (const auto& r : rows) {
            MESSAGE("random 4-regular n=" << r.n << " best value " << r.value);
            CHECK(r.value > 0.0);
            CHECK(r.balance <= 0.05 + 1.0 / r.n);
        }
    }
}
