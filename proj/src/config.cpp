#include "urglab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "urglab/errors.hpp"
#include "urglab/io.hpp"

namespace urglab {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<ParamSpec> with_shared(std::vector<ParamSpec> own, const std::string& format) {
    std::vector<ParamSpec> all = {
        {"seed", "", "master seed; every random stream derives from it"},
        {"out", ".", "output directory"},
        {"format", format, "primary report format: json or csv"},
    };
    all.insert(all.end(), own.begin(), own.end());
    return all;
}

std::vector<ParamSpec> window_keys(const std::string& model, const std::string& d, const std::string& side,
                                   const std::string& n) {
    return {
        {"model", model, "window model"},
        {"d", d, "torus dimension"},
        {"L", side, "torus side, >= 3"},
        {"k", "2", "random-regular rank (degree 2k)"},
        {"n", n, "vertex count for random-regular, cycle, path and complete windows"},
    };
}

std::vector<ParamSpec> join(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

const std::vector<ParamSpec>& parameter_table(const std::string& kind) {
    static const std::map<std::string, std::vector<ParamSpec>> tables = {
        {"mtp-check",
         with_shared(join(window_keys("torus", "2", "8", "100"),
                          {{"window_file", "", "window JSON to use instead of a model"},
                           {"colours", "2", "number of colours of the uniform Bernoulli colouring"},
                           {"transport", "bichromatic", "bichromatic | constant | colour-indicator | degree-weighted"},
                           {"colour", "1", "colour for colour-indicator and degree-weighted"},
                           {"trials", "100", "independent colourings"}}),
                     "json")},
        {"kazhdan",
         with_shared(join(window_keys("cycle", "2", "4", "8"),
                          {{"parts", "2", "number of parts"},
                           {"alpha", "", "target weights, comma separated; uniform if empty"},
                           {"eps", "0", "balance tolerance, < min(alpha)"},
                           {"brute_force", "false", "exhaustive search with a certificate"},
                           {"iterations", "0", "annealing moves per restart; 0 means 1500 epochs"},
                           {"restarts", "10", "annealing restarts"},
                           {"cooling", "0.995", "temperature factor per epoch"}}),
                     "json")},
        {"percolation",
         with_shared(join(window_keys("torus", "2", "64", "1000"),
                          {{"p", "0.5", "site probability; comma separated for a sweep"},
                           {"trials", "10", "samples per p"}}),
                     "csv")},
        {"palm",
         with_shared({{"t", "1", "intensity"},
                      {"L", "20", "torus side"},
                      {"d", "2", "torus dimension, 1..3"},
                      {"trials", "100", "Palm trials"},
                      {"m", "1000", "uniform locations per trial"},
                      {"check", "cellvol", "cellvol | inversion | locfin"},
                      {"functional", "all", "inversion functional: all | constant_one | capped_nearest_distance | occupied_unit_ball"}},
                     "json")},
        {"cost-bound",
         with_shared(join(window_keys("torus", "1", "64", "1000"),
                          {{"source", "window", "window | palm | induction"},
                           {"subset", "spaced", "spaced | bernoulli"},
                           {"spacing", "2", "spaced subset: every spacing-th vertex"},
                           {"p", "0.5", "bernoulli subset probability"},
                           {"t", "1", "palm source: intensity"},
                           {"cost_restricted", "1", "induction source: cost of the restriction"},
                           {"mu_a", "1", "induction source: measure of the restricting set"}}),
                     "json")},
        {"gauss-check",
         with_shared({{"rho", "-0.9,-0.5,0,0.5,0.9", "correlations, comma separated"},
                      {"n", "1000000", "Monte Carlo draws per rho"}},
                     "csv")},
    };
    const auto it = tables.find(kind);
    if (it == tables.end()) throw ValidationError("unknown experiment kind '" + kind + "'");
    return it->second;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    ExperimentConfig c;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        if (body.find('=') == std::string::npos) {
            throw ValidationError("config line " + std::to_string(number) + ": expected key = value");
        }
        c.assign(body);
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    return parse(read_text(path));
}

void ExperimentConfig::assign(std::string_view assignment) {
    const auto eq = assignment.find('=');
    require(eq != std::string_view::npos, "override '" + std::string(assignment) + "' must be key=value");
    const std::string key = trim(assignment.substr(0, eq));
    require(!key.empty(), "override '" + std::string(assignment) + "' has an empty key");
    set(key, trim(assignment.substr(eq + 1)));
}

void ExperimentConfig::set(const std::string& key, std::string value) {
    if (key == "kind") {
        kind_ = std::move(value);
    } else {
        values_[key] = std::move(value);
    }
}

std::optional<std::string> ExperimentConfig::lookup(const std::string& key) const {
    if (const auto it = values_.find(key); it != values_.end()) return it->second;
    for (const auto& spec : parameter_table(kind_)) {
        if (spec.key == key && !spec.fallback.empty()) return spec.fallback;
    }
    return std::nullopt;
}

std::string ExperimentConfig::text(const std::string& key) const {
    return lookup(key).value_or(std::string{});
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
    const auto v = lookup(key);
    require(v.has_value(), "field '" + key + "' is required");
    std::int64_t out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    require(res.ec == std::errc{} && res.ptr == v->data() + v->size(), "field '" + key + "' must be an integer");
    return out;
}

std::uint64_t ExperimentConfig::unsigned_integer(const std::string& key) const {
    const auto v = lookup(key);
    require(v.has_value(), "field '" + key + "' is required");
    std::uint64_t out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    require(res.ec == std::errc{} && res.ptr == v->data() + v->size(),
            "field '" + key + "' must be a nonnegative integer");
    return out;
}

namespace {

double parse_number(const std::string& key, const std::string& s) {
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    require(res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(out),
            "field '" + key + "' must be a number");
    return out;
}

}  // namespace

double ExperimentConfig::number(const std::string& key) const {
    const auto v = lookup(key);
    require(v.has_value(), "field '" + key + "' is required");
    return parse_number(key, *v);
}

bool ExperimentConfig::flag(const std::string& key) const {
    const auto v = lookup(key).value_or("false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError("field '" + key + "' must be true or false");
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(text(key));
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_number(key, trim(item)));
    return out;
}

std::map<std::string, std::string> ExperimentConfig::resolved() const {
    std::map<std::string, std::string> out;
    for (const auto& spec : parameter_table(kind_)) {
        if (auto v = lookup(spec.key)) out[spec.key] = *v;
    }
    return out;
}

}  // namespace urglab
