#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "urglab/ball.hpp"
#include "urglab/clusters.hpp"
#include "urglab/colouring.hpp"
#include "urglab/config.hpp"
#include "urglab/errors.hpp"
#include "urglab/gauss.hpp"
#include "urglab/graph.hpp"
#include "urglab/io.hpp"
#include "urglab/kazhdan.hpp"
#include "urglab/palm.hpp"
#include "urglab/runner.hpp"
#include "urglab/transport.hpp"

namespace py = pybind11;
using namespace urglab;

namespace {

Colouring to_colouring(const std::vector<Colour>& colours, std::uint32_t d) { return {colours, d}; }

py::dict estimate_dict(const EstimateReport& r) {
    py::dict out;
    out["quantity"] = r.quantity;
    out["estimate"] = r.estimate;
    out["stderr"] = r.std_error;
    out["trials"] = r.trials;
    out["master_seed"] = r.master_seed;
    return out;
}

TransportFunction transport_named(const std::string& name, Colour colour) {
    if (name == "bichromatic") return transports::bichromatic();
    if (name == "constant") return transports::constant();
    if (name == "colour-indicator") return transports::colour_indicator(colour);
    if (name == "degree-weighted") return transports::degree_weighted(colour);
    throw ValidationError("unknown transport '" + name + "'");
}

KazhdanProblem problem_from(std::uint32_t parts, std::vector<double> alpha, double eps, std::uint64_t seed,
                            std::uint32_t restarts, std::uint64_t iterations) {
    KazhdanProblem p;
    p.parts = parts;
    p.alpha = alpha.empty() ? WeightVector::uniform(parts) : WeightVector(std::move(alpha));
    p.eps = eps;
    p.seed = seed;
    p.budget.restarts = restarts;
    p.budget.iterations = iterations;
    return p;
}

py::dict kazhdan_dict(const KazhdanResult& r) {
    py::dict out;
    out["partition"] = std::vector<Colour>(r.partition.values().begin(), r.partition.values().end());
    out["value"] = r.value;
    out["boundary_incidences"] = r.boundary_incidences;
    out["weights"] = r.weights;
    out["certified"] = r.certified;
    out["empty_part"] = r.empty_part;
    return out;
}

ExperimentConfig config_from(const std::string& kind, const std::map<std::string, std::string>& values) {
    ExperimentConfig c(kind);
    for (const auto& [k, v] : values) c.set(k, v);
    return c;
}

}  // namespace

PYBIND11_MODULE(_urglab, m) {
    m.doc() = "Unimodular random graph and Palm calculus laboratory";

    auto validation_error = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<GuardError>(m, "GuardError", PyExc_ArithmeticError);
    (void)validation_error;

    py::class_<WindowGraph>(m, "WindowGraph")
        .def_property_readonly("n", &WindowGraph::n)
        .def_property_readonly("degree_bound", &WindowGraph::degree_bound)
        .def_property_readonly("id", &WindowGraph::id)
        .def("degree", &WindowGraph::degree)
        .def("neighbours",
             [](const WindowGraph& w, Vertex v) {
                 std::vector<std::pair<Vertex, std::string>> out;
                 for (const auto& e : w.neighbours(v)) out.emplace_back(e.to, w.generators().name(e.label));
                 return out;
             })
        .def("to_json", [](const WindowGraph& w) { return window_to_json(w).dump(); })
        .def_static("from_json", [](const std::string& text) { return window_from_json(Json::parse(text)); })
        .def("__eq__", [](const WindowGraph& a, const WindowGraph& b) { return a == b; })
        .def("__repr__", [](const WindowGraph& w) { return "<WindowGraph " + w.id() + ">"; });

    m.def("build_torus_window", &build_torus_window, py::arg("d"), py::arg("L"));
    m.def("build_random_regular", &build_random_regular, py::arg("k"), py::arg("n"), py::arg("seed"));
    m.def("build_path", &build_path, py::arg("n"));
    m.def("build_complete", &build_complete, py::arg("n"));
    m.def("connected_components", &connected_components, py::arg("window"));

    m.def(
        "sample_colouring",
        [](const WindowGraph& w, std::vector<double> p, std::uint64_t seed) {
            const auto c = sample(ColouringModel::bernoulli(std::move(p)), w, seed);
            return std::vector<Colour>(c.values().begin(), c.values().end());
        },
        py::arg("window"), py::arg("probabilities"), py::arg("seed"));
    m.def(
        "expansion",
        [](const WindowGraph& w, const std::vector<Colour>& c, std::uint32_t d) { return expansion(w, to_colouring(c, d)); },
        py::arg("window"), py::arg("colours"), py::arg("d"));
    m.def(
        "intensity", [](const std::vector<Colour>& c, std::uint32_t d, Colour k) { return intensity(to_colouring(c, d), k); },
        py::arg("colours"), py::arg("d"), py::arg("colour"));
    m.def(
        "is_delta_balanced",
        [](const std::vector<Colour>& c, std::uint32_t d, double delta) { return is_delta_balanced(to_colouring(c, d), delta); },
        py::arg("colours"), py::arg("d"), py::arg("delta"));

    m.def(
        "balls_isomorphic",
        [](const WindowGraph& g, const std::vector<Colour>& gc, Vertex u, const WindowGraph& h,
           const std::vector<Colour>& hc, Vertex v, std::uint32_t r) {
            return balls_isomorphic(ball(g, std::span<const Colour>(gc), u, r), ball(h, std::span<const Colour>(hc), v, r));
        },
        py::arg("g"), py::arg("g_colours"), py::arg("u"), py::arg("h"), py::arg("h_colours"), py::arg("v"), py::arg("r"));
    m.def(
        "local_distance",
        [](const WindowGraph& g, const std::vector<Colour>& gc, Vertex u, const WindowGraph& h,
           const std::vector<Colour>& hc, Vertex v, std::uint32_t r_max) {
            return local_distance(g, std::span<const Colour>(gc), u, h, std::span<const Colour>(hc), v, r_max).value;
        },
        py::arg("g"), py::arg("g_colours"), py::arg("u"), py::arg("h"), py::arg("h_colours"), py::arg("v"),
        py::arg("r_max"));

    m.def(
        "mtp_check",
        [](const WindowGraph& w, const std::vector<Colour>& c, std::uint32_t d, const std::string& transport,
           Colour colour) {
            const auto r = mtp_check(w, to_colouring(c, d), transport_named(transport, colour));
            py::dict out;
            out["lhs"] = r.lhs;
            out["rhs"] = r.rhs;
            out["abs_diff"] = r.abs_diff;
            out["exact"] = r.exact;
            return out;
        },
        py::arg("window"), py::arg("colours"), py::arg("d"), py::arg("transport") = "bichromatic",
        py::arg("colour") = 1);

    m.def(
        "decompose",
        [](const WindowGraph& w, const std::vector<bool>& subset) {
            const auto dec = decompose(w, subset);
            py::dict out;
            out["count"] = dec.count;
            out["sizes"] = dec.sizes;
            out["cluster_of"] = dec.cluster_of;
            return out;
        },
        py::arg("window"), py::arg("subset"));
    m.def(
        "cost_upper_bound",
        [](const WindowGraph& w, const std::vector<bool>& subset) {
            const auto dec = decompose(w, subset);
            const auto extra = connect_clusters(w, dec);
            const auto b = cost_upper_bound(w, dec, extra);
            py::dict out;
            out["intensity"] = b.intensity;
            out["cluster_count"] = dec.count;
            out["extra_edges"] = extra.pairs.size();
            out["induced_average_degree"] = b.induced_average_degree;
            out["generator_bound"] = b.generator_bound;
            out["empirical_bound"] = b.empirical_bound;
            return out;
        },
        py::arg("window"), py::arg("subset"));
    m.def("gaboriau_induction", &gaboriau_induction, py::arg("cost_restricted"), py::arg("mu_a"));
    m.def(
        "percolation_trial",
        [](const WindowGraph& w, double p, std::uint64_t seed) {
            const auto r = percolation_trial(w, p, seed);
            py::dict out;
            out["p"] = r.p;
            out["intensity"] = r.intensity;
            out["cluster_count"] = r.cluster_count;
            out["largest_cluster_fraction"] = r.largest_cluster_fraction;
            out["cost_bound_generators"] = r.cost_bound_generators;
            out["cost_bound_empirical"] = r.cost_bound_empirical;
            return out;
        },
        py::arg("window"), py::arg("p"), py::arg("seed"));

    m.def(
        "kazhdan_value",
        [](const WindowGraph& w, const std::vector<Colour>& partition, std::uint32_t parts) {
            return kazhdan_value(w, to_colouring(partition, parts));
        },
        py::arg("window"), py::arg("partition"), py::arg("parts"));
    m.def(
        "brute_force_kazhdan",
        [](const WindowGraph& w, std::uint32_t parts, std::vector<double> alpha, double eps) {
            return kazhdan_dict(brute_force_kazhdan(w, problem_from(parts, std::move(alpha), eps, 0, 1, 0)));
        },
        py::arg("window"), py::arg("parts") = 2, py::arg("alpha") = std::vector<double>{}, py::arg("eps") = 0.0);
    m.def(
        "anneal_kazhdan",
        [](const WindowGraph& w, std::uint32_t parts, std::vector<double> alpha, double eps, std::uint64_t seed,
           std::uint32_t restarts, std::uint64_t iterations) {
            py::gil_scoped_release release;
            auto r = anneal_kazhdan(w, problem_from(parts, std::move(alpha), eps, seed, restarts, iterations));
            py::gil_scoped_acquire acquire;
            return kazhdan_dict(r);
        },
        py::arg("window"), py::arg("parts") = 2, py::arg("alpha") = std::vector<double>{}, py::arg("eps") = 0.0,
        py::arg("seed") = 0, py::arg("restarts") = 10, py::arg("iterations") = 0);

    m.def(
        "sample_poisson",
        [](double t, std::uint32_t d, double side, std::uint64_t seed) {
            const auto c = sample_poisson(t, FlatTorus(d, side), seed);
            std::vector<std::vector<double>> out;
            for (const auto& p : c.points()) out.emplace_back(p.x.begin(), p.x.begin() + d);
            return out;
        },
        py::arg("t"), py::arg("d"), py::arg("L"), py::arg("seed"));
    m.def(
        "verify_mean_cell_volume",
        [](double t, std::uint32_t d, double side, std::size_t trials, std::size_t m_samples, std::uint64_t seed) {
            const auto r = verify_mean_cell_volume(t, FlatTorus(d, side), trials, m_samples, seed);
            py::dict out = estimate_dict(r.estimate);
            out["target"] = r.target;
            out["abs_error"] = r.abs_error;
            return out;
        },
        py::arg("t"), py::arg("d"), py::arg("L"), py::arg("trials"), py::arg("m"), py::arg("seed"));
    m.def(
        "verify_voronoi_inversion",
        [](const std::string& functional, double t, std::uint32_t d, double side, std::size_t trials,
           std::size_t m_samples, std::uint64_t seed) {
            ConfigFunctional f;
            if (functional == "constant_one") f = functionals::constant_one();
            else if (functional == "capped_nearest_distance") f = functionals::capped_nearest_distance();
            else if (functional == "occupied_unit_ball") f = functionals::occupied_unit_ball();
            else throw ValidationError("unknown functional '" + functional + "'");
            const auto r = verify_voronoi_inversion(f, t, FlatTorus(d, side), trials, m_samples, seed);
            py::dict out;
            out["lhs"] = r.lhs;
            out["rhs"] = r.rhs;
            out["diff"] = r.diff;
            out["stderr"] = r.combined_std_error;
            return out;
        },
        py::arg("functional"), py::arg("t"), py::arg("d"), py::arg("L"), py::arg("trials"), py::arg("m"),
        py::arg("seed"));
    m.def("pp_cost_bound", &pp_cost_bound, py::arg("t"), py::arg("palm_cost_minus_one_bound"));

    m.def("orthant_probability", &orthant_probability, py::arg("rho"));
    m.def(
        "orthant_probability_mc",
        [](double rho, std::uint64_t n, std::uint64_t seed) { return estimate_dict(orthant_probability_mc(rho, n, seed)); },
        py::arg("rho"), py::arg("n"), py::arg("seed"));
    m.def("symmetric_difference_probability", &symmetric_difference_probability, py::arg("rho"));

    m.def(
        "validate",
        [](const std::string& kind, const std::map<std::string, std::string>& values) {
            return validate(config_from(kind, values));
        },
        py::arg("kind"), py::arg("values") = std::map<std::string, std::string>{});
    m.def(
        "run",
        [](const std::string& kind, const std::map<std::string, std::string>& values) {
            const auto manifest = run(config_from(kind, values));
            return manifest.to_json().dump();
        },
        py::arg("kind"), py::arg("values") = std::map<std::string, std::string>{},
        "Run an experiment; returns the manifest as a JSON string.");
    m.attr("__version__") = urglab_version;
}
