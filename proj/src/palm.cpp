#include "urglab/palm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "urglab/errors.hpp"
#include "urglab/parallel.hpp"
#include "urglab/random.hpp"

namespace urglab {

FlatTorus::FlatTorus(std::uint32_t dim, double side) : dim_(dim), side_(side) {
    require(dim >= 1 && dim <= max_torus_dim, "torus dimension must lie in [1, 3]");
    require(std::isfinite(side) && side > 0.0, "torus side L must be > 0");
}

double FlatTorus::volume() const { return std::pow(side_, static_cast<double>(dim_)); }

Point FlatTorus::wrap(const Point& p) const {
    Point q;
    for (std::uint32_t i = 0; i < dim_; ++i) {
        double v = std::fmod(p.x[i], side_);
        if (v < 0.0) v += side_;
        if (v >= side_) v = 0.0;  // fmod of a tiny negative can round up to L
        q.x[i] = v;
    }
    return q;
}

Point FlatTorus::displacement(const Point& a, const Point& b) const {
    Point d;
    const double half = 0.5 * side_;
    for (std::uint32_t i = 0; i < dim_; ++i) {
        double v = std::fmod(b.x[i] - a.x[i], side_);
        if (v > half) v -= side_;
        else if (v < -half) v += side_;
        d.x[i] = v;
    }
    return d;
}

double FlatTorus::squared_distance(const Point& a, const Point& b) const {
    const Point d = displacement(a, b);
    double s = 0.0;
    for (std::uint32_t i = 0; i < dim_; ++i) s += d.x[i] * d.x[i];
    return s;
}

double FlatTorus::distance(const Point& a, const Point& b) const { return std::sqrt(squared_distance(a, b)); }

Point FlatTorus::translate(const Point& p, const Point& by) const {
    Point q;
    for (std::uint32_t i = 0; i < dim_; ++i) q.x[i] = p.x[i] + by.x[i];
    return wrap(q);
}

Point FlatTorus::uniform_point(Rng& rng) const {
    std::uniform_real_distribution<double> coord(0.0, side_);
    Point p;
    for (std::uint32_t i = 0; i < dim_; ++i) p.x[i] = coord(rng);
    return wrap(p);
}

bool lex_less(const Point& a, const Point& b, std::uint32_t dim) {
    for (std::uint32_t i = 0; i < dim; ++i) {
        if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
    }
    return false;
}

PointConfiguration::PointConfiguration(FlatTorus torus, std::vector<Point> points, bool rooted)
    : torus_(torus), points_(std::move(points)), rooted_(rooted) {
    for (auto& p : points_) {
        for (std::uint32_t i = 0; i < torus_.dim(); ++i) {
            require(std::isfinite(p.x[i]), "point coordinates must be finite");
        }
        for (std::uint32_t i = torus_.dim(); i < max_torus_dim; ++i) p.x[i] = 0.0;
        p = torus_.wrap(p);
    }
    // Distinctness: sort by the first coordinate and compare only neighbours
    // within the tolerance, including pairs across the wrap.
    constexpr double tol = 1e-12;
    const double side = torus_.side();
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points_[a].x[0] < points_[b].x[0]; });
    auto coincide = [&](const Point& a, const Point& b) {
        const Point d = torus_.displacement(a, b);
        for (std::uint32_t i = 0; i < torus_.dim(); ++i) {
            if (std::abs(d.x[i]) > tol) return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Point& a = points_[order[i]];
            const Point& b = points_[order[j]];
            if (b.x[0] - a.x[0] > tol) break;
            require(!coincide(a, b), "configuration points must be pairwise distinct");
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Point& low = points_[order[i]];
        if (low.x[0] > tol) break;
        for (std::size_t j = order.size(); j-- > i + 1;) {
            const Point& high = points_[order[j]];
            if (side - high.x[0] > tol) break;
            require(!coincide(low, high), "configuration points must be pairwise distinct");
        }
    }
    if (rooted_) require(index_of(Point{}).has_value(), "a rooted configuration must contain the origin");
}

std::size_t PointConfiguration::root_index() const {
    require(rooted_, "configuration is not rooted");
    return *index_of(Point{});
}

std::optional<std::size_t> PointConfiguration::index_of(const Point& p) const {
    const Point q = torus_.wrap(p);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (torus_.squared_distance(points_[i], q) <= 1e-24) return i;
    }
    return std::nullopt;
}

VoronoiLocator::VoronoiLocator(const PointConfiguration& config)
    : config_(config), dim_(config.torus().dim()) {
    const double side = config.torus().side();
    const double n = static_cast<double>(std::max<std::size_t>(config.size(), 1));
    // About one point per cell, at most ~2^20 cells.
    const double per_axis = std::pow(n, 1.0 / dim_);
    const double cap = std::pow(1048576.0, 1.0 / dim_);
    cells_per_axis_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::min(per_axis, cap)));
    cell_width_ = side / static_cast<double>(cells_per_axis_);
    std::size_t total = 1;
    for (std::uint32_t i = 0; i < dim_; ++i) total *= static_cast<std::size_t>(cells_per_axis_);
    buckets_.assign(total, {});
    const auto pts = config.points();
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[flat(cell_of(pts[i]))].push_back(static_cast<std::uint32_t>(i));
}

VoronoiLocator::Cell VoronoiLocator::cell_of(const Point& p) const {
    Cell c{};
    for (std::uint32_t i = 0; i < dim_; ++i) {
        auto k = static_cast<std::int64_t>(p.x[i] / cell_width_);
        c[i] = std::clamp<std::int64_t>(k, 0, cells_per_axis_ - 1);
    }
    return c;
}

std::size_t VoronoiLocator::flat(const Cell& cell) const {
    std::size_t index = 0;
    for (std::uint32_t i = dim_; i-- > 0;) {
        std::int64_t k = cell[i] % cells_per_axis_;
        if (k < 0) k += cells_per_axis_;
        index = index * static_cast<std::size_t>(cells_per_axis_) + static_cast<std::size_t>(k);
    }
    return index;
}

namespace {

struct Best {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    double d2 = std::numeric_limits<double>::infinity();
};

void consider(const PointConfiguration& config, const Point& g, std::size_t i, Best& best) {
    const auto pts = config.points();
    const double d2 = config.torus().squared_distance(pts[i], g);
    if (best.index == std::numeric_limits<std::size_t>::max() || d2 < best.d2 - tie_tolerance) {
        best = {i, d2};
    } else if (std::abs(d2 - best.d2) <= tie_tolerance && lex_less(pts[i], pts[best.index], config.torus().dim())) {
        best = {i, std::min(d2, best.d2)};
    }
}

}  // namespace

std::size_t VoronoiLocator::nearest(const Point& query) const {
    require(!config_.empty(), "nearest_point: empty configuration");
    const Point g = config_.torus().wrap(query);
    const Cell centre = cell_of(g);
    Best best;
    for (std::int64_t ring = 0;; ++ring) {
        if (2 * ring + 1 >= cells_per_axis_) {
            // The shell wraps onto itself; finish with a full scan.
            for (std::size_t i = 0; i < config_.size(); ++i) consider(config_, g, i, best);
            return best.index;
        }
        Cell offset{};
        const std::int64_t span = 2 * ring + 1;
        std::int64_t count = 1;
        for (std::uint32_t i = 0; i < dim_; ++i) count *= span;
        for (std::int64_t code = 0; code < count; ++code) {
            std::int64_t rest = code;
            bool on_shell = false;
            for (std::uint32_t i = 0; i < dim_; ++i) {
                offset[i] = rest % span - ring;
                rest /= span;
                on_shell = on_shell || std::abs(offset[i]) == ring;
            }
            if (!on_shell) continue;
            Cell cell{};
            for (std::uint32_t i = 0; i < dim_; ++i) cell[i] = centre[i] + offset[i];
            for (auto idx : buckets_[flat(cell)]) consider(config_, g, idx, best);
        }
        // Cells beyond this ring are at least ring * width away.
        const double reach = static_cast<double>(ring) * cell_width_;
        if (best.index != std::numeric_limits<std::size_t>::max() && best.d2 + tie_tolerance < reach * reach) {
            return best.index;
        }
    }
}

double VoronoiLocator::nearest_squared_distance(const Point& g) const {
    return config_.torus().squared_distance(config_.points()[nearest(g)], g);
}

PointConfiguration sample_poisson(double t, const FlatTorus& torus, std::uint64_t seed) {
    require(std::isfinite(t) && t > 0.0, "intensity t must be > 0");
    Rng rng = make_rng(seed, "poisson");
    const auto count = std::poisson_distribution<std::uint64_t>(t * torus.volume())(rng);
    std::vector<Point> points(count);
    for (auto& p : points) p = torus.uniform_point(rng);
    return {torus, std::move(points)};
}

PointConfiguration palm_sample_poisson(double t, const FlatTorus& torus, std::uint64_t seed) {
    const PointConfiguration base = sample_poisson(t, torus, seed);
    std::vector<Point> points;
    points.reserve(base.size() + 1);
    points.push_back(Point{});
    points.insert(points.end(), base.points().begin(), base.points().end());
    return {torus, std::move(points), true};
}

Point nearest_point(const PointConfiguration& config, const Point& g) {
    require(!config.empty(), "nearest_point: empty configuration");
    const VoronoiLocator locator(config);
    return config.points()[locator.nearest(g)];
}

EstimateReport cell_volume_mc(const PointConfiguration& config, std::size_t point, std::size_t m,
                              std::uint64_t seed) {
    require(point < config.size(), "cell_volume_mc: point is not in the configuration");
    require(m >= 1, "cell_volume_mc: m must be >= 1");
    const VoronoiLocator locator(config);
    Rng rng = make_rng(seed, "cell-volume");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < m; ++i) hits += locator.nearest(config.torus().uniform_point(rng)) == point;
    const double vol = config.torus().volume();
    EstimateReport r = binomial_estimate("cell_volume", hits, m, seed);
    r.estimate *= vol;
    r.std_error *= vol;
    return r;
}

std::vector<double> shared_cell_volumes(const PointConfiguration& config, std::size_t m, std::uint64_t seed) {
    require(!config.empty(), "shared_cell_volumes: empty configuration");
    require(m >= 1, "shared_cell_volumes: m must be >= 1");
    const VoronoiLocator locator(config);
    Rng rng = make_rng(seed, "cell-volume");
    std::vector<std::size_t> hits(config.size(), 0);
    for (std::size_t i = 0; i < m; ++i) ++hits[locator.nearest(config.torus().uniform_point(rng))];
    // Integer counts are exact; the volumes are an exact partition of L^d up to
    // one rounding per cell.
    const double vol = config.torus().volume();
    std::vector<double> out(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) out[i] = vol * static_cast<double>(hits[i]) / static_cast<double>(m);
    return out;
}

namespace {

void palm_guard(double t, const FlatTorus& torus) {
    require(std::isfinite(t) && t > 0.0, "intensity t must be > 0");
    if (t * torus.volume() < 20.0) {
        throw GuardError("expected point count t*L^d = " + std::to_string(t * torus.volume()) +
                         " is below the guard of 20");
    }
}

}  // namespace

CellVolumeReport verify_mean_cell_volume(double t, const FlatTorus& torus, std::size_t trials, std::size_t m,
                                         std::uint64_t seed) {
    palm_guard(t, torus);
    require(trials >= 1 && m >= 1, "trials and m must be >= 1");
    CellVolumeReport r;
    r.per_trial = parallel_map(trials, [&](std::size_t i) {
        const auto config = palm_sample_poisson(t, torus, derive_seed(seed, "palm-cellvol", i));
        return cell_volume_mc(config, config.root_index(), m, derive_seed(seed, "palm-cellvol-mc", i)).estimate;
    });
    r.estimate = summarize("palm_origin_cell_volume", r.per_trial, seed);
    r.target = 1.0 / t;
    r.abs_error = std::abs(r.estimate.estimate - r.target);
    return r;
}

namespace functionals {

ConfigFunctional constant_one() {
    return {"constant_one", 1.0, [](const VoronoiLocator&, const Point&) { return 1.0; }};
}

ConfigFunctional capped_nearest_distance() {
    return {"capped_nearest_distance", 1.0, [](const VoronoiLocator& loc, const Point& g) {
                if (loc.config().empty()) return 1.0;
                return std::min(1.0, std::sqrt(loc.nearest_squared_distance(g)));
            }};
}

ConfigFunctional occupied_unit_ball() {
    return {"occupied_unit_ball", 1.0, [](const VoronoiLocator& loc, const Point& g) {
                if (loc.config().empty()) return 0.0;
                return loc.nearest_squared_distance(g) <= 1.0 ? 1.0 : 0.0;
            }};
}

}  // namespace functionals

InversionReport verify_voronoi_inversion(const ConfigFunctional& f, double t, const FlatTorus& torus,
                                         std::size_t trials, std::size_t m, std::uint64_t seed) {
    palm_guard(t, torus);
    require(trials >= 1 && m >= 1, "trials and m must be >= 1");
    require(f.eval != nullptr, "test functional has no evaluator");
    require(std::isfinite(f.bound) && f.bound >= 0.0, "test functional must be bounded (finite bound required)");
    auto checked = [&](const VoronoiLocator& loc, const Point& g) {
        const double v = f.eval(loc, g);
        require(std::abs(v) <= f.bound + 1e-12, "test functional exceeded its stated bound " + std::to_string(f.bound));
        return v;
    };
    const Point origin{};
    InversionReport r;
    r.functional = f.name;
    r.trials = trials;
    r.lhs_per_trial = parallel_map(trials, [&](std::size_t i) {
        const auto config = sample_poisson(t, torus, derive_seed(seed, "inversion-lhs", i));
        const VoronoiLocator loc(config);
        return checked(loc, origin);
    });
    r.rhs_per_trial = parallel_map(trials, [&](std::size_t i) {
        const auto config = palm_sample_poisson(t, torus, derive_seed(seed, "inversion-rhs", i));
        const VoronoiLocator loc(config);
        const std::size_t root = config.root_index();
        Rng rng = make_rng(seed, "inversion-rhs-mc", i);
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const Point g = torus.uniform_point(rng);
            if (loc.nearest(g) == root) acc += checked(loc, g);
        }
        return t * acc * torus.volume() / static_cast<double>(m);
    });
    const auto lhs = summarize("lhs", r.lhs_per_trial, seed);
    const auto rhs = summarize("rhs", r.rhs_per_trial, seed);
    r.lhs = lhs.estimate;
    r.lhs_std_error = lhs.std_error;
    r.rhs = rhs.estimate;
    r.rhs_std_error = rhs.std_error;
    r.diff = r.lhs - r.rhs;
    r.combined_std_error = std::hypot(r.lhs_std_error, r.rhs_std_error);
    return r;
}

LocalFinitenessReport check_local_finiteness(const PointConfiguration& config, const Point& h,
                                             std::size_t trials, std::uint64_t seed) {
    require(!config.empty(), "check_local_finiteness: empty configuration");
    const FlatTorus& torus = config.torus();
    const auto pts = config.points();
    std::vector<double> d2(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = torus.squared_distance(pts[i], h);
    const double r2 = *std::min_element(d2.begin(), d2.end());
    LocalFinitenessReport r;
    r.nearest_distance = std::sqrt(r2);
    double next2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (d2[i] <= r2 + tie_tolerance) r.minimizers.push_back(i);
        else next2 = std::min(next2, d2[i]);
    }
    // With no other point the gap is unbounded; half the side keeps the ball
    // inside one fundamental domain.
    const double cap = 0.5 * torus.side();
    r.eps = std::isfinite(next2) ? std::min(std::sqrt(next2) - r.nearest_distance, cap) : cap;

    const VoronoiLocator loc(config);
    Rng rng = make_rng(seed, "local-finiteness");
    const double radius = 0.5 * r.eps;
    std::uniform_real_distribution<double> coord(-radius, radius);
    while (r.samples < trials) {
        Point offset;
        double s = 0.0;
        for (std::uint32_t i = 0; i < torus.dim(); ++i) {
            offset.x[i] = coord(rng);
            s += offset.x[i] * offset.x[i];
        }
        if (s >= radius * radius) continue;
        const std::size_t owner = loc.nearest(torus.translate(h, offset));
        ++r.samples;
        if (!std::binary_search(r.minimizers.begin(), r.minimizers.end(), owner)) ++r.violations;
    }
    r.holds = r.violations == 0;
    return r;
}

double Box::volume(std::uint32_t dim) const {
    double v = 1.0;
    for (std::uint32_t i = 0; i < dim; ++i) v *= extent.x[i];
    return v;
}

bool Box::contains(const FlatTorus& torus, const Point& p) const {
    for (std::uint32_t i = 0; i < torus.dim(); ++i) {
        double u = std::fmod(p.x[i] - lo.x[i], torus.side());
        if (u < 0.0) u += torus.side();
        if (u >= extent.x[i]) return false;
    }
    return true;
}

EstimateReport pp_intensity_estimate(std::span<const PointConfiguration> configs, const Box& window) {
    std::vector<double> per_config;
    per_config.reserve(configs.size());
    for (const auto& c : configs) {
        const FlatTorus& torus = c.torus();
        const double vol = window.volume(torus.dim());
        require(vol > 0.0, "intensity window U must have positive volume");
        for (std::uint32_t i = 0; i < torus.dim(); ++i) {
            require(window.extent.x[i] <= torus.side(), "intensity window U must fit inside the torus");
        }
        std::size_t count = 0;
        for (const auto& p : c.points()) count += window.contains(torus, p);
        per_config.push_back(static_cast<double>(count) / vol);
    }
    return summarize("intensity", per_config, 0);
}

PointConfiguration lattice_configuration(const FlatTorus& torus, double spacing) {
    require(spacing > 0.0, "lattice spacing must be > 0");
    const double steps = torus.side() / spacing;
    const auto per_axis = static_cast<std::size_t>(std::llround(steps));
    require(per_axis >= 1 && std::abs(steps - static_cast<double>(per_axis)) <= 1e-9 * steps,
            "torus side must be a multiple of the lattice spacing");
    std::size_t total = 1;
    for (std::uint32_t i = 0; i < torus.dim(); ++i) total *= per_axis;
    std::vector<Point> points(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        for (std::uint32_t i = 0; i < torus.dim(); ++i) {
            points[code].x[i] = spacing * static_cast<double>(rest % per_axis);
            rest /= per_axis;
        }
    }
    return {torus, std::move(points)};
}

double pp_cost_bound(double t, double palm_cost_minus_one_bound) {
    require(t >= 0.0, "intensity t must be >= 0");
    require(palm_cost_minus_one_bound >= 0.0, "pp_cost_bound: bound must be >= 0");
    return 1.0 + t * palm_cost_minus_one_bound;
}

WindowGraph gabriel_graph(const PointConfiguration& config) {
    require(!config.empty(), "gabriel_graph: empty configuration");
    const FlatTorus& torus = config.torus();
    const auto pts = config.points();
    const VoronoiLocator loc(config);
    const double limit2 = 0.25 * torus.side() * torus.side();
    std::vector<LabelledEdge> edges;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            const Point d = torus.displacement(pts[a], pts[b]);
            double len2 = 0.0;
            Point half;
            for (std::uint32_t i = 0; i < torus.dim(); ++i) {
                len2 += d.x[i] * d.x[i];
                half.x[i] = 0.5 * d.x[i];
            }
            // Pairs more than L/2 apart have no well-defined disc on the torus.
            if (len2 >= limit2) continue;
            const Point mid = torus.translate(pts[a], half);
            if (loc.nearest_squared_distance(mid) >= 0.25 * len2 * (1.0 - 1e-9)) {
                edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), 0});
            }
        }
    }
    return build_explicit(static_cast<std::uint32_t>(pts.size()), edges, GeneratorSet::plain(), "gabriel");
}

PalmCostReport palm_factor_graph_cost(double t, const FlatTorus& torus, std::uint64_t seed) {
    const auto config = palm_sample_poisson(t, torus, seed);
    const WindowGraph g = gabriel_graph(config);
    const ClusterDecomposition dec = decompose(g, std::vector<bool>(g.n(), true));
    PalmCostReport r;
    r.intensity = t;
    r.points = g.n();
    r.average_degree = static_cast<double>(g.directed_edge_count()) / g.n();
    r.connected = dec.count == 1;
    if (r.connected) {
        // With the whole configuration as the subset the empirical bound is
        // (1/2) average degree.
        const CostBound bound = cost_upper_bound(g, dec, FactorGraphEdges{});
        r.palm_cost_minus_one = std::max(0.0, bound.empirical_bound - 1.0);
    } else {
        r.palm_cost_minus_one = std::max(0.0, 0.5 * r.average_degree - 1.0);
    }
    r.cost_bound = pp_cost_bound(t, r.palm_cost_minus_one);
    return r;
}

}  // namespace urglab
