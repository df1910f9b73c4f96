#include <doctest.h>

#include <cmath>
#include <numeric>

#include "urglab/errors.hpp"
#include "urglab/palm.hpp"
#include "urglab/random.hpp"

using namespace urglab;

namespace {

Point pt(double a, double b = 0, double c = 0) { return Point{{a, b, c}}; }

}  // namespace

TEST_SUITE("palm") {
    TEST_CASE("torus metric") {
        const FlatTorus t(2, 10);
        CHECK(t.volume() == 100);
        CHECK(t.wrap(pt(-1, 23)) == pt(9, 3));
        CHECK(t.distance(pt(0.5, 0), pt(9.5, 0)) == doctest::Approx(1.0));
        Rng rng(4);
        for (int i = 0; i < 1000; ++i) {
            const Point a = t.uniform_point(rng), b = t.uniform_point(rng), s = t.uniform_point(rng);
            CHECK(t.squared_distance(a, b) == doctest::Approx(t.squared_distance(b, a)));
            CHECK(t.squared_distance(t.translate(a, s), t.translate(b, s)) ==
                  doctest::Approx(t.squared_distance(a, b)));
            CHECK(t.squared_distance(a, b) <= 50 + 1e-9);
        }
        CHECK_THROWS_AS(FlatTorus(4, 10), ValidationError);
        CHECK_THROWS_AS(FlatTorus(2, 0), ValidationError);
    }

    TEST_CASE("configurations") {
        const FlatTorus t(2, 10);
        CHECK_THROWS_AS(PointConfiguration(t, {pt(1, 1), pt(11, 1)}), ValidationError);
        CHECK_THROWS_AS(PointConfiguration(t, {pt(1, 1)}, true), ValidationError);
        const PointConfiguration c(t, {pt(1, 1), pt(0, 0)}, true);
        CHECK(c.root_index() == 1);
        CHECK(c.index_of(pt(1, 1)) == std::optional<std::size_t>(0));
        CHECK_FALSE(c.index_of(pt(2, 1)).has_value());
    }

    TEST_CASE("poisson counts") {
        const FlatTorus t(2, 10);
        RunningStats counts;
        for (std::uint64_t s = 0; s < 10000; ++s) counts.add(static_cast<double>(sample_poisson(1.0, t, s).size()));
        CHECK(std::abs(counts.mean() - 100) <= 3);
        CHECK(std::abs(counts.mean() - 100) <= 4 * std::sqrt(100.0 / 10000));
        CHECK(std::abs(counts.variance() / counts.mean() - 1) <= 0.1);
        CHECK(sample_poisson(1.0, t, 5).points().size() == sample_poisson(1.0, t, 5).size());
        CHECK_THROWS_AS(sample_poisson(0.0, t, 1), ValidationError);
        std::size_t empty = 0;
        for (std::uint64_t s = 0; s < 2000; ++s) empty += sample_poisson(0.01, FlatTorus(1, 10), s).empty();
        CHECK(std::abs(empty / 2000.0 - std::exp(-0.1)) <= 4 * std::sqrt(0.1 * 0.9 / 2000));
    }

    TEST_CASE("palm samples add the origin") {
        const FlatTorus t(2, 8);
        RunningStats plain, palm;
        for (std::uint64_t s = 0; s < 3000; ++s) {
            const auto c = palm_sample_poisson(0.5, t, s);
            CHECK(c.rooted());
            CHECK(c.points()[0] == Point{});
            palm.add(static_cast<double>(c.size() - 1));
            plain.add(static_cast<double>(sample_poisson(0.5, t, s + 100000).size()));
        }
        CHECK(std::abs(palm.mean() - plain.mean()) <= 4 * std::hypot(palm.std_error(), plain.std_error()));
    }

    TEST_CASE("nearest point and ties") {
        const FlatTorus t(2, 10);
        const PointConfiguration single(t, {pt(3, 4)});
        Rng rng(1);
        for (int i = 0; i < 50; ++i) CHECK(nearest_point(single, t.uniform_point(rng)) == pt(3, 4));
        const PointConfiguration tie(t, {pt(4, 5), pt(2, 5)});
        CHECK(nearest_point(tie, pt(3, 5)) == pt(2, 5));
        CHECK(nearest_point(tie, pt(3, 5)) == pt(2, 5));
        CHECK(nearest_point(tie, pt(4, 5)) == pt(4, 5));
        CHECK_THROWS_AS(nearest_point(PointConfiguration(t, {}), pt(1, 1)), ValidationError);
    }

    TEST_CASE("locator agrees with a linear scan") {
        const FlatTorus t(2, 15);
        Rng rng(9);
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto c = sample_poisson(s % 2 ? 0.05 : 2.0, t, s);
            if (c.empty()) continue;
            const VoronoiLocator loc(c);
            for (int q = 0; q < 200; ++q) {
                const Point g = t.uniform_point(rng);
                std::size_t best = 0;
                for (std::size_t i = 1; i < c.size(); ++i) {
                    if (t.squared_distance(g, c.points()[i]) < t.squared_distance(g, c.points()[best])) best = i;
                }
                CHECK(loc.nearest(g) == best);
            }
        }
    }

    TEST_CASE("translation invariance") {
        const FlatTorus t(2, 12);
        Rng rng(17);
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto c = sample_poisson(1.0, t, s);
            const Point shift = t.uniform_point(rng);
            std::vector<Point> moved;
            for (const auto& p : c.points()) moved.push_back(t.translate(p, shift));
            const PointConfiguration cm(t, moved);
            const VoronoiLocator a(c), b(cm);
            for (int q = 0; q < 200; ++q) {
                const Point g = t.uniform_point(rng);
                CHECK(a.nearest(g) == b.nearest(t.translate(g, shift)));
            }
        }
    }

    TEST_CASE("cell volumes") {
        const FlatTorus ring(1, 2);
        const PointConfiguration one(ring, {pt(0.3)});
        CHECK(cell_volume_mc(one, 0, 1000, 1).estimate == 2.0);
        const PointConfiguration two(ring, {pt(0), pt(1)});
        for (std::size_t i : {0u, 1u}) {
            const auto e = cell_volume_mc(two, i, 20000, 3);
            CHECK(std::abs(e.estimate - 1.0) <= 3 * e.std_error);
        }
        CHECK_THROWS_AS(cell_volume_mc(two, 2, 10, 1), ValidationError);

        const FlatTorus t(2, 10);
        const auto c = sample_poisson(0.5, t, 4);
        const auto vols = shared_cell_volumes(c, 5000, 2);
        CHECK(std::accumulate(vols.begin(), vols.end(), 0.0) == doctest::Approx(100.0));
    }

    TEST_CASE("mean cell volume guard and small run") {
        CHECK_THROWS_AS(verify_mean_cell_volume(1.0, FlatTorus(2, 4), 10, 10, 1), GuardError);
        const auto r = verify_mean_cell_volume(1.0, FlatTorus(2, 10), 300, 2000, 6);
        CHECK(r.target == 1.0);
        CHECK(r.abs_error <= 4 * r.estimate.std_error);
        CHECK(r.per_trial.size() == 300);
    }

    TEST_CASE("inversion on a small torus") {
        const FlatTorus t(2, 10);
        for (const auto& f : {functionals::constant_one(), functionals::capped_nearest_distance(),
                              functionals::occupied_unit_ball()}) {
            const auto r = verify_voronoi_inversion(f, 1.0, t, 300, 1000, 8);
            CHECK(std::abs(r.diff) <= 4 * r.combined_std_error + 1e-12);
        }
        const auto one = verify_voronoi_inversion(functionals::constant_one(), 1.0, t, 50, 500, 1);
        CHECK(one.lhs == 1.0);
        ConfigFunctional wild{"wild", std::numeric_limits<double>::infinity(), functionals::constant_one().eval};
        CHECK_THROWS_AS(verify_voronoi_inversion(wild, 1.0, t, 10, 10, 1), ValidationError);
    }

    TEST_CASE("local finiteness") {
        const FlatTorus t(2, 20);
        const auto single = check_local_finiteness(PointConfiguration(t, {pt(5, 5)}), pt(1, 1), 100, 1);
        CHECK(single.holds);
        CHECK(single.minimizers.size() == 1);

        const PointConfiguration built(t, {pt(9, 10), pt(11, 10), pt(10, 11.5)});
        const auto r = check_local_finiteness(built, pt(10, 10), 1000, 2);
        CHECK(r.nearest_distance == doctest::Approx(1.0));
        CHECK(r.minimizers.size() == 2);
        CHECK(r.eps == doctest::Approx(0.5));
        CHECK(r.holds);
        CHECK(r.violations == 0);

        Rng rng(3);
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto c = sample_poisson(1.0, t, s);
            const auto p = check_local_finiteness(c, t.uniform_point(rng), 1000, s);
            CHECK(p.holds);
            CHECK(p.samples == 1000);
        }
    }

    TEST_CASE("intensity estimates") {
        const FlatTorus t(2, 10);
        const Box whole{pt(0, 0), pt(10, 10)};
        const auto lattice = lattice_configuration(t, 1.0);
        CHECK(pp_intensity_estimate(std::span(&lattice, 1), whole).estimate == 1.0);
        std::vector<PointConfiguration> stream;
        for (std::uint64_t s = 0; s < 400; ++s) stream.push_back(sample_poisson(2.0, t, s));
        const auto e = pp_intensity_estimate(stream, Box{pt(2, 3), pt(5, 4)});
        CHECK(std::abs(e.estimate - 2.0) <= 3 * e.std_error);
        CHECK(pp_intensity_estimate({}, whole).estimate == 0.0);
        CHECK_THROWS_AS(pp_intensity_estimate(stream, Box{pt(0, 0), pt(0, 3)}), ValidationError);
        CHECK_THROWS_AS(lattice_configuration(t, 3.0), ValidationError);
    }

    TEST_CASE("point process cost bound") {
        CHECK(pp_cost_bound(1.0, 0.0) == 1.0);
        CHECK(pp_cost_bound(0.1, 0.5) == doctest::Approx(1.05));
        CHECK_THROWS_AS(pp_cost_bound(1.0, -0.1), ValidationError);
        const auto r = palm_factor_graph_cost(1.0, FlatTorus(2, 10), 3);
        CHECK(r.connected);
        CHECK(std::isfinite(r.cost_bound));
        CHECK(r.cost_bound >= 1.0);
        MESSAGE("gabriel pipeline cost bound " << r.cost_bound << " average degree " << r.average_degree);
    }

    TEST_CASE("gabriel graph drops the edge opposite an obtuse angle") {
        const FlatTorus t(2, 100);
        const PointConfiguration tri(t, {pt(10, 10), pt(14, 10), pt(12, 11)});
        const auto g = gabriel_graph(tri);
        CHECK(g.degree(0) == 1);
        CHECK(g.degree(1) == 1);
        CHECK(g.degree(2) == 2);
    }
}
