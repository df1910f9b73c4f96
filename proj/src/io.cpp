#include "urglab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "urglab/errors.hpp"

namespace urglab {

namespace {

WindowModel::Kind kind_from_name(const std::string& name) {
    if (name == "torus") return WindowModel::Kind::torus;
    if (name == "random-regular") return WindowModel::Kind::random_regular;
    if (name == "explicit") return WindowModel::Kind::explicit_graph;
    throw ValidationError("unknown window model '" + name + "'");
}

}  // namespace

Json window_to_json(const WindowGraph& w) {
    const GeneratorSet& gens = w.generators();
    const WindowModel& model = w.model();
    Json j;
    j["model"] = model.kind_name();
    Json params = Json::object();
    switch (model.kind) {
        case WindowModel::Kind::torus:
            params["d"] = model.dim;
            params["L"] = model.side;
            break;
        case WindowModel::Kind::random_regular:
            params["k"] = model.rank;
            break;
        case WindowModel::Kind::explicit_graph:
            params["name"] = model.name;
            break;
    }
    j["params"] = params;
    j["seed"] = model.seed ? Json(*model.seed) : Json(nullptr);
    j["n"] = w.n();
    j["degree_bound"] = w.degree_bound();
    Json generators = Json::array();
    for (Label s = 0; s < gens.size(); ++s) {
        generators.push_back(Json{{"name", gens.name(s)}, {"inverse", gens.name(gens.inverse(s))}});
    }
    j["generators"] = generators;

    Json edges = Json::array();
    for (Vertex u = 0; u < w.n(); ++u) {
        // Partners (u, v, s) and (v, u, s^-1) of a self-paired half-edge are
        // identical; they are stored twice, so emit every second copy.
        bool skip_self = false;
        for (const HalfEdge& e : w.neighbours(u)) {
            const Label inv = gens.inverse(e.label);
            const std::string& name = gens.name(e.label);
            const std::string& inv_name = gens.name(inv);
            const bool self_paired = e.to == u && inv == e.label;
            if (self_paired) {
                skip_self = !skip_self;
                if (!skip_self) continue;
            } else if (name > inv_name || (name == inv_name && u > e.to)) {
                continue;
            }
            edges.push_back(Json::array({u, e.to, name}));
        }
    }
    j["edges"] = edges;
    return j;
}

WindowGraph window_from_json(const Json& j) {
    try {
        const std::uint32_t n = j.at("n").get<std::uint32_t>();
        require(n >= 1, "window must have at least one vertex");
        std::vector<std::string> names;
        for (const auto& g : j.at("generators")) names.push_back(g.at("name").get<std::string>());
        std::vector<Label> inverse;
        std::map<std::string, Label> index;
        for (Label s = 0; s < names.size(); ++s) {
            require(index.emplace(names[s], s).second, "duplicate generator name '" + names[s] + "'");
        }
        for (const auto& g : j.at("generators")) {
            const auto it = index.find(g.at("inverse").get<std::string>());
            require(it != index.end(), "generator inverse names an unknown generator");
            inverse.push_back(it->second);
        }
        GeneratorSet gens(names, inverse);
        std::vector<std::vector<HalfEdge>> adj(n);
        for (const auto& e : j.at("edges")) {
            require(e.is_array() && e.size() == 3, "edges must be [u, v, label] triples");
            const auto u = e[0].get<Vertex>();
            const auto v = e[1].get<Vertex>();
            const auto it = index.find(e[2].get<std::string>());
            require(u < n && v < n, "edge endpoint out of range");
            require(it != index.end(), "edge label names an unknown generator");
            adj[u].push_back({v, it->second});
            adj[v].push_back({u, gens.inverse(it->second)});
        }
        WindowModel model;
        model.kind = kind_from_name(j.at("model").get<std::string>());
        const Json& params = j.at("params");
        if (model.kind == WindowModel::Kind::torus) {
            model.dim = params.at("d").get<std::uint32_t>();
            model.side = params.at("L").get<std::uint32_t>();
        } else if (model.kind == WindowModel::Kind::random_regular) {
            model.rank = params.at("k").get<std::uint32_t>();
        } else {
            model.name = params.value("name", std::string{});
        }
        if (j.contains("seed") && !j.at("seed").is_null()) model.seed = j.at("seed").get<std::uint64_t>();
        std::uint32_t bound = 0;
        if (j.contains("degree_bound")) {
            bound = j.at("degree_bound").get<std::uint32_t>();
        } else {
            for (const auto& list : adj) bound = std::max(bound, static_cast<std::uint32_t>(list.size()));
        }
        return {std::move(adj), std::move(gens), std::move(model), bound};
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed window JSON: ") + e.what());
    }
}

void write_window(const WindowGraph& w, const std::filesystem::path& path) {
    write_text(path, window_to_json(w).dump(2) + "\n");
}

WindowGraph read_window(const std::filesystem::path& path) {
    try {
        return window_from_json(Json::parse(read_text(path)));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("cannot parse window file " + path.string() + ": " + e.what());
    }
}

Json colouring_to_json(const Colouring& c, const std::string& window_id) {
    Json runs = Json::array();
    const auto values = c.values();
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        runs.push_back(Json::array({values[i], j - i}));
        i = j;
    }
    return Json{{"window_id", window_id}, {"d", c.d()}, {"colours", runs}};
}

Colouring colouring_from_json(const Json& j) {
    try {
        std::vector<Colour> colours;
        for (const auto& run : j.at("colours")) {
            require(run.is_array() && run.size() == 2, "colour runs must be [colour, length] pairs");
            colours.insert(colours.end(), run[1].get<std::size_t>(), run[0].get<Colour>());
        }
        return {std::move(colours), j.at("d").get<std::uint32_t>()};
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed colouring JSON: ") + e.what());
    }
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

namespace {

std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_array()) {
        std::string out;
        for (const auto& x : v) out += (out.empty() ? "" : " ") + csv_cell(x);
        return out;
    }
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

}  // namespace

std::string to_csv(const std::vector<Json>& rows) {
    if (rows.empty()) return {};
    std::string out;
    std::vector<std::string> header;
    for (const auto& item : rows.front().items()) header.push_back(item.key());
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            out += (i ? "," : "") + (row.contains(header[i]) ? csv_cell(row.at(header[i])) : std::string{});
        }
        out += "\n";
    }
    return out;
}

Json estimate_to_json(const EstimateReport& r) {
    return Json{{"quantity", r.quantity},
                {"estimate", r.estimate},
                {"stderr", r.std_error},
                {"trials", r.trials},
                {"master_seed", r.master_seed}};
}

std::string estimates_to_csv(const std::vector<EstimateReport>& reports) {
    std::vector<Json> rows;
    for (const auto& r : reports) rows.push_back(estimate_to_json(r));
    if (rows.empty()) return "quantity,estimate,stderr,trials,master_seed\n";
    return to_csv(rows);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot open " + path.string() + " for writing");
    out << text;
    require(static_cast<bool>(out), "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace urglab
