// palm.hpp: Poisson processes on flat tori, Palm sampling and Voronoi cells.
//
// The torus R^d / L Z^d (d <= 3) stands in for a unimodular lcsc group;
// Lebesgue measure is the Haar measure and the origin is the identity.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urglab/clusters.hpp"
#include "urglab/graph.hpp"
#include "urglab/stats.hpp"

namespace urglab {

inline constexpr std::uint32_t max_torus_dim = 3;

struct Point {
    std::array<double, max_torus_dim> x{};
    bool operator==(const Point&) const = default;
};

class FlatTorus {
public:
    FlatTorus(std::uint32_t dim, double side);

    std::uint32_t dim() const { return dim_; }
    double side() const { return side_; }
    double volume() const;

    // Coordinates reduced into [0, L).
    Point wrap(const Point& p) const;
    // Shortest displacement from a to b, each coordinate in [-L/2, L/2].
    Point displacement(const Point& a, const Point& b) const;
    double squared_distance(const Point& a, const Point& b) const;
    double distance(const Point& a, const Point& b) const;
    Point translate(const Point& p, const Point& by) const;
    Point uniform_point(Rng& rng) const;

private:
    std::uint32_t dim_;
    double side_;
};

// Squared distances closer than this count as ties.
inline constexpr double tie_tolerance = 1e-12;

// Lexicographic order on coordinates; the tie-break between equidistant points.
bool lex_less(const Point& a, const Point& b, std::uint32_t dim);

class PointConfiguration {
public:
    // Points are wrapped into [0, L)^d and must be pairwise distinct (within
    // 1e-12). A rooted configuration must list the origin.
    PointConfiguration(FlatTorus torus, std::vector<Point> points, bool rooted = false);

    const FlatTorus& torus() const { return torus_; }
    std::span<const Point> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    bool rooted() const { return rooted_; }
    // Index of the origin in a rooted configuration.
    std::size_t root_index() const;
    std::optional<std::size_t> index_of(const Point& p) const;

private:
    FlatTorus torus_;
    std::vector<Point> points_;
    bool rooted_;
};

// Uniform grid over the torus for repeated nearest-point queries.
class VoronoiLocator {
public:
    explicit VoronoiLocator(const PointConfiguration& config);

    // Index of the configuration point whose cell contains g: the wrapped
    // distance minimizer, ties to the lexicographically smaller point.
    std::size_t nearest(const Point& g) const;
    double nearest_squared_distance(const Point& g) const;
    const PointConfiguration& config() const { return config_; }

private:
    using Cell = std::array<std::int64_t, max_torus_dim>;
    Cell cell_of(const Point& p) const;
    std::size_t flat(const Cell& cell) const;

    const PointConfiguration& config_;
    std::uint32_t dim_;
    std::int64_t cells_per_axis_;
    double cell_width_;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

PointConfiguration sample_poisson(double t, const FlatTorus& torus, std::uint64_t seed);
// Poisson sample plus the origin, listed first; rooted.
PointConfiguration palm_sample_poisson(double t, const FlatTorus& torus, std::uint64_t seed);

Point nearest_point(const PointConfiguration& config, const Point& g);

// L^d times the fraction of m uniform locations falling in the cell of the
// given configuration point.
EstimateReport cell_volume_mc(const PointConfiguration& config, std::size_t point, std::size_t m,
                              std::uint64_t seed);
// Volumes of all cells from one shared set of m locations; sums to L^d.
std::vector<double> shared_cell_volumes(const PointConfiguration& config, std::size_t m, std::uint64_t seed);

struct CellVolumeReport {
    EstimateReport estimate;  // mean Palm origin-cell volume
    double target = 0.0;      // 1 / t
    double abs_error = 0.0;
    std::vector<double> per_trial;
};

// Throws GuardError unless t L^d >= 20.
CellVolumeReport verify_mean_cell_volume(double t, const FlatTorus& torus, std::size_t trials, std::size_t m,
                                         std::uint64_t seed);

// f(omega shifted so that location g sits at the origin), evaluated through a
// locator over omega. |f| <= bound.
struct ConfigFunctional {
    std::string name;
    double bound = 1.0;
    std::function<double(const VoronoiLocator&, const Point& g)> eval;
};

namespace functionals {
ConfigFunctional constant_one();
// min(1, distance from the origin to omega); 1 for the empty configuration.
ConfigFunctional capped_nearest_distance();
// [|omega within distance 1 of the origin| >= 1]
ConfigFunctional occupied_unit_ball();
}  // namespace functionals

struct InversionReport {
    std::string functional;
    double lhs = 0.0;
    double lhs_std_error = 0.0;
    double rhs = 0.0;
    double rhs_std_error = 0.0;
    double diff = 0.0;
    double combined_std_error = 0.0;
    std::size_t trials = 0;
    std::vector<double> lhs_per_trial;
    std::vector<double> rhs_per_trial;
};

// Compares E_mu[f] with t E_Palm[ integral over the origin cell of f(omega - g) dg ].
InversionReport verify_voronoi_inversion(const ConfigFunctional& f, double t, const FlatTorus& torus,
                                         std::size_t trials, std::size_t m, std::uint64_t seed);

struct LocalFinitenessReport {
    double nearest_distance = 0.0;      // R = d(h, omega)
    std::vector<std::size_t> minimizers;  // indices of points at distance R
    double eps = 0.0;                   // gap to the next distinct distance
    std::size_t samples = 0;
    std::size_t violations = 0;
    bool holds = false;
};

// Every location in B_{eps/2}(h) belongs to a cell of one of the minimizers.
LocalFinitenessReport check_local_finiteness(const PointConfiguration& config, const Point& h,
                                             std::size_t trials, std::uint64_t seed);

// Axis-aligned box [lo, lo + extent) on the torus.
struct Box {
    Point lo;
    Point extent;
    double volume(std::uint32_t dim) const;
    bool contains(const FlatTorus& torus, const Point& p) const;
};

EstimateReport pp_intensity_estimate(std::span<const PointConfiguration> configs, const Box& window);

// Regular lattice with the given spacing; L must be a multiple of it.
PointConfiguration lattice_configuration(const FlatTorus& torus, double spacing);

// 1 + t * bound: cost of a point process from a bound on cost - 1 of its
// Palm equivalence relation.
double pp_cost_bound(double t, double palm_cost_minus_one_bound);

// Gabriel graph of a configuration (a connected subgraph of the Voronoi
// adjacency graph): a ~ b iff no point lies strictly inside the disc with
// diameter ab.
WindowGraph gabriel_graph(const PointConfiguration& config);

struct PalmCostReport {
    double intensity = 0.0;
    std::uint32_t points = 0;
    double average_degree = 0.0;
    double palm_cost_minus_one = 0.0;  // (1/2) average degree - 1
    double cost_bound = 0.0;           // pp_cost_bound(t, palm_cost_minus_one)
    bool connected = false;
};

// Cost bound from the Gabriel factor graph of one Palm sample.
PalmCostReport palm_factor_graph_cost(double t, const FlatTorus& torus, std::uint64_t seed);

}  // namespace urglab
