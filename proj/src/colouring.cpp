#include "urglab/colouring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "urglab/errors.hpp"
#include "urglab/parallel.hpp"

namespace urglab {

Colouring::Colouring(std::vector<Colour> colours, std::uint32_t d) : colours_(std::move(colours)), d_(d) {
    require(d_ >= 1, "colouring needs d >= 1");
    for (Colour c : colours_) require(c >= 1 && c <= d_, "colour out of range 1..d");
}

Colouring Colouring::from_mask(const std::vector<bool>& mask) {
    std::vector<Colour> colours(mask.size());
    for (std::size_t v = 0; v < mask.size(); ++v) colours[v] = mask[v] ? in_colour : out_colour;
    return {std::move(colours), 2};
}

std::size_t Colouring::count(Colour k) const {
    return static_cast<std::size_t>(std::count(colours_.begin(), colours_.end(), k));
}

std::vector<std::size_t> Colouring::class_sizes() const {
    std::vector<std::size_t> sizes(d_, 0);
    for (Colour c : colours_) ++sizes[c - 1];
    return sizes;
}

std::vector<bool> Colouring::mask(Colour k) const {
    std::vector<bool> out(colours_.size());
    for (std::size_t v = 0; v < colours_.size(); ++v) out[v] = colours_[v] == k;
    return out;
}

ColouringModel ColouringModel::bernoulli(std::vector<double> p) {
    require(!p.empty(), "bernoulli model needs a probability vector");
    double total = 0.0;
    for (double x : p) {
        require(x >= 0.0 && x <= 1.0, "bernoulli probabilities must lie in [0,1]");
        total += x;
    }
    require(std::abs(total - 1.0) <= 1e-12, "bernoulli probabilities must sum to 1");
    ColouringModel m;
    m.kind = Kind::bernoulli;
    m.colours = static_cast<std::uint32_t>(p.size());
    m.probabilities = std::move(p);
    return m;
}

ColouringModel ColouringModel::uniform(std::uint32_t d) {
    require(d >= 1, "uniform model needs d >= 1");
    return bernoulli(std::vector<double>(d, 1.0 / d));
}

ColouringModel ColouringModel::constant(std::uint32_t d) {
    require(d >= 1, "constant model needs d >= 1");
    ColouringModel m;
    m.kind = Kind::constant;
    m.colours = d;
    return m;
}

ColouringModel ColouringModel::fixed_block(const Colouring& partition) {
    ColouringModel m;
    m.kind = Kind::block;
    m.colours = partition.d();
    m.block.assign(partition.values().begin(), partition.values().end());
    return m;
}

ColouringModel ColouringModel::custom(std::string id, std::uint32_t d, Sampler sampler) {
    require(static_cast<bool>(sampler), "custom model needs a sampler");
    ColouringModel m;
    m.kind = Kind::custom;
    m.colours = d;
    m.custom_id = std::move(id);
    m.sampler = std::move(sampler);
    return m;
}

ColouringModel ColouringModel::parse(const std::string& kind, std::uint32_t d, std::vector<double> p) {
    if (kind == "bernoulli") return p.empty() ? uniform(d) : bernoulli(std::move(p));
    if (kind == "uniform") return uniform(d);
    if (kind == "constant") return constant(d);
    throw ValidationError("unknown colouring model kind '" + kind + "'");
}

Colouring sample(const ColouringModel& model, const WindowGraph& w, std::uint64_t seed) {
    Rng rng = make_rng(seed, "colouring");
    const std::uint32_t n = w.n();
    switch (model.kind) {
        case ColouringModel::Kind::bernoulli: {
            std::discrete_distribution<Colour> pick(model.probabilities.begin(), model.probabilities.end());
            std::vector<Colour> colours(n);
            for (auto& c : colours) c = pick(rng) + 1;
            return {std::move(colours), model.colours};
        }
        case ColouringModel::Kind::constant: {
            const Colour c = std::uniform_int_distribution<Colour>(1, model.colours)(rng);
            return {std::vector<Colour>(n, c), model.colours};
        }
        case ColouringModel::Kind::block:
            require(model.block.size() == n, "block model size does not match the window");
            return {model.block, model.colours};
        case ColouringModel::Kind::custom: {
            require(static_cast<bool>(model.sampler), "custom model '" + model.custom_id + "' has no sampler");
            Colouring c = model.sampler(w, rng);
            require(c.size() == n, "custom sampler returned a colouring of the wrong size");
            return c;
        }
    }
    throw ValidationError("unknown colouring model kind");
}

double intensity(const Colouring& c, Colour k) {
    require(k >= 1 && k <= c.d(), "intensity: colour out of range");
    if (c.size() == 0) return 0.0;
    return static_cast<double>(c.count(k)) / static_cast<double>(c.size());
}

bool is_delta_balanced(const Colouring& c, double delta) {
    require(delta >= 0.0, "delta must be nonnegative");
    const std::size_t n = c.size();
    const std::size_t d = c.d();
    const std::size_t lo = n / d;
    const std::size_t hi = (n + d - 1) / d;
    const double target = 1.0 / static_cast<double>(d);
    const auto sizes = c.class_sizes();
    return std::all_of(sizes.begin(), sizes.end(), [&](std::size_t s) {
        if (s == lo || s == hi) return true;
        return std::abs(static_cast<double>(s) / static_cast<double>(n) - target) <= delta + 1e-12;
    });
}

std::size_t bichromatic_incidences(const WindowGraph& w, const Colouring& c) {
    require(c.size() == w.n(), "colouring size does not match the window");
    std::size_t count = 0;
    for (Vertex u = 0; u < w.n(); ++u) {
        for (const HalfEdge& e : w.neighbours(u)) count += c[u] != c[e.to];
    }
    return count;
}

double expansion(const WindowGraph& w, const Colouring& c) {
    return static_cast<double>(bichromatic_incidences(w, c)) / static_cast<double>(w.n());
}

Colouring permute_colours(const Colouring& c, std::span<const Colour> permutation) {
    require(permutation.size() == c.d(), "permutation length must equal d");
    std::vector<Colour> out(c.size());
    for (std::size_t v = 0; v < c.size(); ++v) out[v] = permutation[c[static_cast<Vertex>(v)] - 1];
    return {std::move(out), c.d()};
}

namespace {

Vertex resolve(const WindowGraph& w, Vertex root, const std::vector<Label>& word) {
    Vertex v = root;
    for (Label s : word) {
        auto next = w.follow(v, s);
        require(next.has_value(), "pattern offset not resolvable from vertex " + std::to_string(root));
        v = *next;
    }
    return v;
}

}  // namespace

EstimateReport marginal_estimate(const ColouringModel& model, const WindowGraph& w,
                                 const MarginalPattern& pattern, std::size_t trials,
                                 std::uint64_t seed) {
    require(trials >= 1, "marginal_estimate needs at least one trial");
    require(pattern.entries.size() <= w.n(), "pattern larger than window");
    auto hits = parallel_map(trials, [&](std::size_t i) -> int {
        const std::uint64_t trial_seed = derive_seed(seed, "marginal", i);
        const Colouring c = sample(model, w, trial_seed);
        Rng rng = make_rng(trial_seed, "marginal-root");
        const Vertex root = std::uniform_int_distribution<Vertex>(0, w.n() - 1)(rng);
        std::vector<Vertex> seen;
        bool match = true;
        for (const PatternEntry& entry : pattern.entries) {
            const Vertex v = resolve(w, root, entry.word);
            require(std::find(seen.begin(), seen.end(), v) == seen.end(),
                    "pattern offsets must resolve to distinct vertices");
            seen.push_back(v);
            match = match && c[v] == entry.colour;
        }
        return match ? 1 : 0;
    });
    const auto total = static_cast<std::size_t>(std::accumulate(hits.begin(), hits.end(), 0));
    return binomial_estimate("marginal", total, trials, seed);
}

}  // namespace urglab
