#include "urglab/runner.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "urglab/clusters.hpp"
#include "urglab/colouring.hpp"
#include "urglab/errors.hpp"
#include "urglab/gauss.hpp"
#include "urglab/kazhdan.hpp"
#include "urglab/palm.hpp"
#include "urglab/parallel.hpp"
#include "urglab/random.hpp"
#include "urglab/transport.hpp"

namespace urglab {

namespace {

constexpr double max_window_vertices = 1e7;

const std::set<std::string>& window_models(const std::string& kind) {
    static const std::set<std::string> graph_models = {"torus", "random-regular"};
    static const std::set<std::string> kazhdan_models = {"torus", "random-regular", "cycle", "path", "complete"};
    return kind == "kazhdan" ? kazhdan_models : graph_models;
}

bool uses_window(const ExperimentConfig& c) {
    const auto& kind = c.kind();
    if (kind == "mtp-check" || kind == "kazhdan" || kind == "percolation") return true;
    return kind == "cost-bound" && c.text("source") == "window";
}

bool needs_seed(const ExperimentConfig& c) {
    if (c.kind() == "kazhdan") return !c.flag("brute_force") || c.text("model") == "random-regular";
    if (c.kind() == "cost-bound") {
        const auto source = c.text("source");
        if (source == "induction") return false;
        if (source == "window") return c.text("subset") == "bernoulli" || c.text("model") == "random-regular";
    }
    return true;
}

std::uint64_t master_seed(const ExperimentConfig& c) {
    return c.lookup("seed") ? c.unsigned_integer("seed") : 0;
}

// Range checks on the window keys; the window itself is built afterwards.
void check_window_keys(const ExperimentConfig& c, std::vector<std::string>& out) {
    const auto model = c.text("model");
    if (!window_models(c.kind()).count(model)) {
        std::string allowed;
        for (const auto& m : window_models(c.kind())) allowed += (allowed.empty() ? "" : " | ") + m;
        out.push_back("model must be one of " + allowed);
        return;
    }
    if (model == "torus") {
        const auto d = c.integer("d");
        const auto side = c.integer("L");
        if (d < 1) out.push_back("torus dimension d must be >= 1");
        if (side < 3) out.push_back("torus side L must be >= 3");
        if (d >= 1 && side >= 3 && std::pow(static_cast<double>(side), static_cast<double>(d)) > max_window_vertices) {
            out.push_back("window too large: L^d must be <= 10^7");
        }
    } else if (model == "random-regular") {
        const auto k = c.integer("k");
        const auto n = c.integer("n");
        if (k < 1) out.push_back("random-regular rank k must be >= 1");
        else if (n < 2 * k + 1) out.push_back("random-regular needs n >= 2k+1");
        if (n > max_window_vertices) out.push_back("window too large: n must be <= 10^7");
    } else {
        const auto n = c.integer("n");
        const std::int64_t least = model == "cycle" ? 3 : 2;
        if (n < least) out.push_back(model + " needs n >= " + std::to_string(least));
        if (n > (model == "complete" ? 2000 : max_window_vertices)) out.push_back("window too large for model " + model);
    }
}

template <class Fn>
void collect(std::vector<std::string>& out, Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        out.emplace_back(e.what());
    }
}

KazhdanProblem kazhdan_problem(const ExperimentConfig& c) {
    KazhdanProblem p;
    const auto parts = c.integer("parts");
    require(parts >= 1 && parts <= 64, "parts must lie in [1, 64]");
    p.parts = static_cast<std::uint32_t>(parts);
    const auto alpha = c.numbers("alpha");
    p.alpha = alpha.empty() ? WeightVector::uniform(p.parts) : WeightVector(alpha);
    p.eps = c.number("eps");
    const auto iterations = c.integer("iterations");
    require(iterations >= 0, "iterations must be >= 0");
    p.budget.iterations = static_cast<std::uint64_t>(iterations);
    const auto restarts = c.integer("restarts");
    require(restarts >= 1 && restarts <= 10000, "restarts must lie in [1, 10000]");
    p.budget.restarts = static_cast<std::uint32_t>(restarts);
    p.budget.cooling = c.number("cooling");
    p.seed = derive_seed(master_seed(c), "kazhdan");
    return p;
}

std::int64_t positive(const ExperimentConfig& c, const std::string& key) {
    const auto v = c.integer(key);
    require(v >= 1, key + " must be >= 1");
    return v;
}

void check_kind(const ExperimentConfig& c, std::vector<std::string>& out) {
    const auto& kind = c.kind();
    if (kind == "mtp-check") {
        collect(out, [&] {
            const auto colours = c.integer("colours");
            require(colours >= 1 && colours <= 255, "colours must lie in [1, 255]");
            const auto colour = c.integer("colour");
            require(colour >= 1 && colour <= colours, "colour must lie in [1, colours]");
        });
        collect(out, [&] {
            static const std::set<std::string> names = {"bichromatic", "constant", "colour-indicator", "degree-weighted"};
            require(names.count(c.text("transport")) > 0,
                    "transport must be one of bichromatic | constant | colour-indicator | degree-weighted");
        });
        collect(out, [&] { positive(c, "trials"); });
    } else if (kind == "kazhdan") {
        collect(out, [&] {
            const auto p = kazhdan_problem(c);
            for (const auto& v : p.violations()) out.push_back(v);
        });
    } else if (kind == "percolation") {
        collect(out, [&] {
            const auto ps = c.numbers("p");
            require(!ps.empty(), "p must list at least one probability");
            for (double p : ps) require(p >= 0.0 && p <= 1.0, "p must lie in [0,1]");
        });
        collect(out, [&] { positive(c, "trials"); });
    } else if (kind == "palm") {
        collect(out, [&] { require(c.number("t") > 0.0, "intensity t must be > 0"); });
        collect(out, [&] { require(c.number("L") > 0.0, "torus side L must be > 0"); });
        collect(out, [&] {
            const auto d = c.integer("d");
            require(d >= 1 && d <= 3, "torus dimension d must lie in [1, 3]");
        });
        collect(out, [&] { positive(c, "trials"); });
        collect(out, [&] { positive(c, "m"); });
        collect(out, [&] {
            static const std::set<std::string> checks = {"cellvol", "inversion", "locfin"};
            require(checks.count(c.text("check")) > 0, "check must be one of cellvol | inversion | locfin");
        });
        collect(out, [&] {
            static const std::set<std::string> names = {"all", "constant_one", "capped_nearest_distance",
                                                        "occupied_unit_ball"};
            require(names.count(c.text("functional")) > 0,
                    "functional must be one of all | constant_one | capped_nearest_distance | occupied_unit_ball");
        });
    } else if (kind == "cost-bound") {
        const auto source = c.text("source");
        if (source == "window") {
            collect(out, [&] {
                const auto subset = c.text("subset");
                require(subset == "spaced" || subset == "bernoulli", "subset must be spaced or bernoulli");
                if (subset == "spaced") positive(c, "spacing");
                if (subset == "bernoulli") {
                    const double p = c.number("p");
                    require(p >= 0.0 && p <= 1.0, "p must lie in [0,1]");
                }
            });
        } else if (source == "palm") {
            collect(out, [&] { require(c.number("t") > 0.0, "intensity t must be > 0"); });
            collect(out, [&] {
                const auto d = c.integer("d");
                require(d >= 1 && d <= 3, "torus dimension d must lie in [1, 3]");
            });
            collect(out, [&] { require(c.number("L") > 0.0, "torus side L must be > 0"); });
        } else if (source == "induction") {
            collect(out, [&] { require(c.number("cost_restricted") >= 1.0, "cost_restricted must be >= 1"); });
            collect(out, [&] {
                const double mu = c.number("mu_a");
                require(mu > 0.0 && mu <= 1.0, "mu_a must lie in (0,1]");
            });
        } else {
            out.push_back("source must be one of window | palm | induction");
        }
    } else if (kind == "gauss-check") {
        collect(out, [&] {
            const auto rhos = c.numbers("rho");
            require(!rhos.empty(), "rho must list at least one correlation");
            for (double r : rhos) require(std::abs(r) <= 1.0, "correlation rho must satisfy |rho| <= 1");
        });
        collect(out, [&] { positive(c, "n"); });
    }
}

// Checks that need the window itself.
void check_window(const ExperimentConfig& c, const WindowGraph& w, std::vector<std::string>& out) {
    const auto& kind = c.kind();
    if (kind == "percolation" || kind == "cost-bound") {
        const auto comp = connected_components(w);
        const bool connected = std::all_of(comp.begin(), comp.end(), [](auto x) { return x == 0; });
        if (!connected) out.push_back("window is disconnected; clusters cannot be joined (try another seed or larger n)");
    }
    if (kind == "kazhdan") {
        collect(out, [&] {
            const auto p = kazhdan_problem(c);
            if (!p.violations().empty()) return;
            require(p.parts <= w.n(), "parts must be <= n");
            admissible_sizes(w.n(), p.alpha, p.eps);
            if (c.flag("brute_force")) {
                const double states = std::pow(static_cast<double>(p.parts), static_cast<double>(w.n()));
                require(states <= 1e7, "brute force instance too large: k^n > 10^7");
            }
        });
    }
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> out;
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.kind()) == kinds.end()) {
        return {"unknown experiment kind '" + c.kind() + "'"};
    }
    std::set<std::string> known;
    for (const auto& spec : parameter_table(c.kind())) known.insert(spec.key);
    for (const auto& [key, value] : c.values()) {
        if (!known.count(key)) out.push_back("unknown key '" + key + "' for kind '" + c.kind() + "'");
    }
    if (!out.empty()) return out;

    collect(out, [&] {
        if (c.lookup("seed")) c.unsigned_integer("seed");
        else if (needs_seed(c)) out.push_back("seed is required");
    });
    collect(out, [&] {
        const auto format = c.text("format");
        require(format == "json" || format == "csv", "format must be json or csv");
    });
    collect(out, [&] { require(!c.text("out").empty(), "out must name a directory"); });
    if (!out.empty()) return out;

    const std::size_t before = out.size();
    if (uses_window(c)) {
        if (c.kind() == "mtp-check" && !c.text("window_file").empty()) {
            collect(out, [&] {
                const std::filesystem::path p = c.text("window_file");
                require(std::filesystem::exists(p), "window_file not found: " + p.string());
            });
        } else {
            collect(out, [&] { check_window_keys(c, out); });
        }
    }
    collect(out, [&] { check_kind(c, out); });
    if (out.size() == before && uses_window(c)) {
        collect(out, [&] {
            const WindowGraph w = window_from_config(c);
            check_window(c, w, out);
        });
    }
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
    return hex.str();
}

WindowGraph window_from_config(const ExperimentConfig& c) {
    if (c.kind() == "mtp-check" && !c.text("window_file").empty()) return read_window(c.text("window_file"));
    const auto model = c.text("model");
    const auto as_u32 = [&](const std::string& key) { return static_cast<std::uint32_t>(c.integer(key)); };
    if (model == "torus") return build_torus_window(as_u32("d"), as_u32("L"));
    if (model == "random-regular") {
        return build_random_regular(as_u32("k"), as_u32("n"), derive_seed(master_seed(c), "window"));
    }
    if (model == "cycle") return build_torus_window(1, as_u32("n"));
    if (model == "path") return build_path(as_u32("n"));
    if (model == "complete") return build_complete(as_u32("n"));
    throw ValidationError("unknown window model '" + model + "'");
}

namespace {

struct Produced {
    std::vector<Json> rows;
    bool single = false;  // JSON output is one object rather than an array
    OutputSet extras;
};

TransportFunction transport_from(const ExperimentConfig& c) {
    const auto name = c.text("transport");
    const auto colour = static_cast<Colour>(c.integer("colour"));
    if (name == "constant") return transports::constant();
    if (name == "colour-indicator") return transports::colour_indicator(colour);
    if (name == "degree-weighted") return transports::degree_weighted(colour);
    return transports::bichromatic();
}

Produced run_mtp(const ExperimentConfig& c) {
    const WindowGraph w = window_from_config(c);
    const auto seed = master_seed(c);
    const auto model = ColouringModel::uniform(static_cast<std::uint32_t>(c.integer("colours")));
    const TransportFunction f = transport_from(c);
    const auto trials = static_cast<std::size_t>(c.integer("trials"));
    const auto reports = parallel_map(trials, [&](std::size_t i) {
        return mtp_check(w, sample(model, w, derive_seed(seed, "mtp-colouring", i)), f);
    });
    Produced out;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto& r = reports[i];
        out.rows.push_back(Json{{"trial", i},
                                {"window_id", w.id()},
                                {"transport", f.name},
                                {"lhs", r.lhs},
                                {"rhs", r.rhs},
                                {"diff", r.abs_diff},
                                {"exact", r.exact}});
    }
    return out;
}

Produced run_kazhdan(const ExperimentConfig& c) {
    const WindowGraph w = window_from_config(c);
    const KazhdanProblem problem = kazhdan_problem(c);
    const bool brute = c.flag("brute_force");
    const KazhdanResult r = brute ? brute_force_kazhdan(w, problem) : anneal_kazhdan(w, problem);
    Produced out;
    out.single = true;
    std::vector<Colour> partition(r.partition.values().begin(), r.partition.values().end());
    out.rows.push_back(Json{{"window_id", w.id()},
                            {"method", brute ? "brute-force" : "anneal"},
                            {"parts", problem.parts},
                            {"alpha", problem.alpha.values()},
                            {"eps", problem.eps},
                            {"value", r.value},
                            {"boundary_incidences", r.boundary_incidences},
                            {"weights", r.weights},
                            {"balance", d_infinity(r.weights, problem.alpha.values())},
                            {"certified", r.certified},
                            {"empty_part", r.empty_part},
                            {"partition", partition}});
    if (!brute) {
        std::vector<Json> trace;
        for (const auto& t : r.trace) {
            trace.push_back(Json{{"restart", t.restart},
                                 {"epoch", t.epoch},
                                 {"temperature", t.temperature},
                                 {"current", t.current},
                                 {"best", t.best}});
        }
        out.extras.emplace_back("kazhdan_trace.csv",
                                trace.empty() ? "restart,epoch,temperature,current,best\n" : to_csv(trace));
    }
    return out;
}

Produced run_percolation(const ExperimentConfig& c) {
    const WindowGraph w = window_from_config(c);
    const auto seed = master_seed(c);
    const auto ps = c.numbers("p");
    const auto trials = static_cast<std::size_t>(c.integer("trials"));
    const auto rows = parallel_map(ps.size() * trials, [&](std::size_t i) {
        return percolation_trial(w, ps[i / trials], derive_seed(seed, "percolation", i));
    });
    Produced out;
    for (const auto& r : rows) {
        out.rows.push_back(Json{{"p", r.p},
                                {"intensity", r.intensity},
                                {"cluster_count", r.cluster_count},
                                {"largest_cluster_fraction", r.largest_cluster_fraction},
                                {"cost_bound_generators", r.cost_bound_generators},
                                {"cost_bound_empirical", r.cost_bound_empirical}});
    }
    return out;
}

std::vector<ConfigFunctional> chosen_functionals(const std::string& name) {
    std::vector<ConfigFunctional> all = {functionals::constant_one(), functionals::capped_nearest_distance(),
                                         functionals::occupied_unit_ball()};
    if (name == "all") return all;
    std::vector<ConfigFunctional> one;
    for (auto& f : all) {
        if (f.name == name) one.push_back(f);
    }
    return one;
}

Produced run_palm(const ExperimentConfig& c) {
    const double t = c.number("t");
    const FlatTorus torus(static_cast<std::uint32_t>(c.integer("d")), c.number("L"));
    const auto trials = static_cast<std::size_t>(c.integer("trials"));
    const auto m = static_cast<std::size_t>(c.integer("m"));
    const auto seed = master_seed(c);
    const auto check = c.text("check");
    if (t * torus.volume() < 20.0) {
        throw GuardError("expected point count t*L^d = " + format_number(t * torus.volume()) +
                         " is below the guard of 20");
    }
    Json head{{"check", check}, {"t", t}, {"L", torus.side()}, {"d", torus.dim()}, {"trials", trials}, {"m", m}};
    Produced out;
    std::vector<Json> per_trial;
    if (check == "cellvol") {
        const auto r = verify_mean_cell_volume(t, torus, trials, m, seed);
        Json row = head;
        row["estimate"] = r.estimate.estimate;
        row["stderr"] = r.estimate.std_error;
        row["target"] = r.target;
        row["abs_error"] = r.abs_error;
        out.rows.push_back(row);
        out.single = true;
        for (std::size_t i = 0; i < r.per_trial.size(); ++i) per_trial.push_back(Json{{"trial", i}, {"volume", r.per_trial[i]}});
    } else if (check == "inversion") {
        for (const auto& f : chosen_functionals(c.text("functional"))) {
            const auto r = verify_voronoi_inversion(f, t, torus, trials, m, seed);
            Json row = head;
            row["functional"] = r.functional;
            row["lhs"] = r.lhs;
            row["lhs_stderr"] = r.lhs_std_error;
            row["rhs"] = r.rhs;
            row["rhs_stderr"] = r.rhs_std_error;
            row["diff"] = r.diff;
            row["combined_stderr"] = r.combined_std_error;
            out.rows.push_back(row);
            for (std::size_t i = 0; i < r.trials; ++i) {
                per_trial.push_back(
                    Json{{"functional", r.functional}, {"trial", i}, {"lhs", r.lhs_per_trial[i]}, {"rhs", r.rhs_per_trial[i]}});
            }
        }
    } else {
        const auto reports = parallel_map(trials, [&](std::size_t i) {
            const auto config = sample_poisson(t, torus, derive_seed(seed, "locfin-config", i));
            Rng rng = make_rng(seed, "locfin-location", i);
            const Point h = torus.uniform_point(rng);
            return std::make_pair(config.size(), config.empty() ? LocalFinitenessReport{0.0, {}, 0.0, 0, 0, true}
                                                               : check_local_finiteness(config, h, m, derive_seed(seed, "locfin", i)));
        });
        std::size_t samples = 0, violations = 0;
        for (std::size_t i = 0; i < trials; ++i) {
            const auto& [points, r] = reports[i];
            samples += r.samples;
            violations += r.violations;
            per_trial.push_back(Json{{"trial", i},
                                     {"points", points},
                                     {"nearest_distance", r.nearest_distance},
                                     {"minimizers", r.minimizers.size()},
                                     {"eps", r.eps},
                                     {"samples", r.samples},
                                     {"violations", r.violations},
                                     {"holds", r.holds}});
        }
        Json row = head;
        row["samples"] = samples;
        row["violations"] = violations;
        row["holds"] = violations == 0;
        out.rows.push_back(row);
        out.single = true;
    }
    out.extras.emplace_back("palm_trials.csv", to_csv(per_trial));
    return out;
}

Produced run_cost_bound(const ExperimentConfig& c) {
    const auto source = c.text("source");
    const auto seed = master_seed(c);
    Produced out;
    out.single = true;
    if (source == "induction") {
        const double restricted = c.number("cost_restricted");
        const double mu = c.number("mu_a");
        out.rows.push_back(Json{{"source", source},
                                {"cost_restricted", restricted},
                                {"mu_a", mu},
                                {"cost", gaboriau_induction(restricted, mu)}});
        return out;
    }
    if (source == "palm") {
        const double t = c.number("t");
        const FlatTorus torus(static_cast<std::uint32_t>(c.integer("d")), c.number("L"));
        const auto r = palm_factor_graph_cost(t, torus, derive_seed(seed, "palm-cost"));
        out.rows.push_back(Json{{"source", source},
                                {"t", t},
                                {"points", r.points},
                                {"average_degree", r.average_degree},
                                {"connected", r.connected},
                                {"palm_cost_minus_one", r.palm_cost_minus_one},
                                {"cost_bound", r.cost_bound}});
        return out;
    }
    const WindowGraph w = window_from_config(c);
    const auto subset_kind = c.text("subset");
    std::vector<bool> subset(w.n(), false);
    if (subset_kind == "spaced") {
        const auto spacing = static_cast<std::uint32_t>(c.integer("spacing"));
        for (Vertex v = 0; v < w.n(); v += spacing) subset[v] = true;
    } else {
        subset = sample(ColouringModel::bernoulli({c.number("p"), 1.0 - c.number("p")}), w,
                        derive_seed(seed, "cost-subset"))
                     .mask(in_colour);
    }
    const ClusterDecomposition dec = decompose(w, subset);
    const FactorGraphEdges extra = connect_clusters(w, dec);
    const CostBound b = cost_upper_bound(w, dec, extra);
    out.rows.push_back(Json{{"source", source},
                            {"window_id", w.id()},
                            {"subset", subset_kind},
                            {"intensity", b.intensity},
                            {"generators", b.generators},
                            {"cluster_count", dec.count},
                            {"extra_edges", extra.pairs.size()},
                            {"extra_total_distance", extra.total_distance()},
                            {"induced_average_degree", b.induced_average_degree},
                            {"extra_half_degree", b.extra_half_degree},
                            {"generator_bound", b.generator_bound},
                            {"empirical_bound", b.empirical_bound},
                            {"slack", b.slack()}});
    return out;
}

Produced run_gauss(const ExperimentConfig& c) {
    const auto rhos = c.numbers("rho");
    const auto n = c.unsigned_integer("n");
    const auto seed = master_seed(c);
    const auto reports = parallel_map(rhos.size(), [&](std::size_t i) {
        return orthant_probability_mc(rhos[i], n, derive_seed(seed, "gauss-check", i));
    });
    Produced out;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const double closed = orthant_probability(rhos[i]);
        const auto& mc = reports[i];
        const double gap = std::abs(closed - mc.estimate);
        const bool ok = mc.std_error > 0.0 ? gap < 4.0 * mc.std_error : gap <= 1.0 / static_cast<double>(n);
        out.rows.push_back(Json{{"rho", rhos[i]},
                                {"closed_form", closed},
                                {"mc", mc.estimate},
                                {"stderr", mc.std_error},
                                {"ok", ok}});
    }
    return out;
}

std::string primary_name(const std::string& kind) {
    if (kind == "mtp-check") return "mtp";
    if (kind == "cost-bound") return "cost_bound";
    if (kind == "gauss-check") return "gauss";
    return kind;
}

}  // namespace

OutputSet compute_outputs(const ExperimentConfig& c) {
    const auto violations = validate(c);
    if (!violations.empty()) {
        std::string joined;
        for (const auto& v : violations) joined += (joined.empty() ? "" : "; ") + v;
        throw ValidationError(joined);
    }
    const auto& kind = c.kind();
    Produced p;
    if (kind == "mtp-check") p = run_mtp(c);
    else if (kind == "kazhdan") p = run_kazhdan(c);
    else if (kind == "percolation") p = run_percolation(c);
    else if (kind == "palm") p = run_palm(c);
    else if (kind == "cost-bound") p = run_cost_bound(c);
    else p = run_gauss(c);

    OutputSet files;
    const auto format = c.text("format");
    const auto name = primary_name(kind) + "." + format;
    if (format == "csv") {
        files.emplace_back(name, to_csv(p.rows));
    } else {
        const Json body = p.single && p.rows.size() == 1 ? p.rows.front() : Json(p.rows);
        files.emplace_back(name, body.dump(2) + "\n");
    }
    files.insert(files.end(), p.extras.begin(), p.extras.end());
    return files;
}

Json RunManifest::to_json() const {
    Json outs = Json::array();
    for (const auto& o : outputs) outs.push_back(Json{{"path", o.path}, {"bytes", o.bytes}, {"sha256", o.sha256}});
    return Json{{"config", config}, {"version", version}, {"wall_seconds", wall_seconds}, {"outputs", outs}};
}

RunManifest run(const ExperimentConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    const OutputSet files = compute_outputs(c);
    const std::filesystem::path dir = c.text("out");
    RunManifest m;
    m.config = Json::object();
    m.config["kind"] = c.kind();
    for (const auto& [key, value] : c.resolved()) m.config[key] = value;
    m.version = urglab_version;
    for (const auto& [name, contents] : files) {
        write_text(dir / name, contents);
        m.outputs.push_back({name, contents.size(), sha256_hex(contents)});
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(dir / manifest_name, m.to_json().dump(2) + "\n");
    return m;
}

int run_with_exit_code(const ExperimentConfig& c, std::ostream& log) {
    try {
        const RunManifest m = run(c);
        for (const auto& o : m.outputs) log << "wrote " << (std::filesystem::path(c.text("out")) / o.path).string() << "\n";
        return 0;
    } catch (const ValidationError& e) {
        log << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        log << "guard violated: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace urglab
