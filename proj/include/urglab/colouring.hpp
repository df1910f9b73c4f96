// colouring.hpp: random d-colourings of windows and their statistics.
//
// Colours are 1..d. A subset is the d = 2 case with colour 1 meaning "in".
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "urglab/graph.hpp"
#include "urglab/random.hpp"
#include "urglab/stats.hpp"

namespace urglab {

using Colour = std::uint32_t;

inline constexpr Colour in_colour = 1;
inline constexpr Colour out_colour = 2;

class Colouring {
public:
    Colouring(std::vector<Colour> colours, std::uint32_t d);

    // Subset colouring from a membership mask.
    static Colouring from_mask(const std::vector<bool>& mask);

    std::uint32_t d() const { return d_; }
    std::size_t size() const { return colours_.size(); }
    Colour operator[](Vertex v) const { return colours_[v]; }
    std::span<const Colour> values() const { return colours_; }
    std::size_t count(Colour k) const;
    std::vector<std::size_t> class_sizes() const;  // index k-1 holds the size of colour k
    std::vector<bool> mask(Colour k = in_colour) const;

    bool operator==(const Colouring&) const = default;

private:
    std::vector<Colour> colours_;
    std::uint32_t d_;
};

struct ColouringModel {
    enum class Kind { bernoulli, constant, block, custom };
    using Sampler = std::function<Colouring(const WindowGraph&, Rng&)>;

    Kind kind = Kind::bernoulli;
    std::uint32_t colours = 2;
    std::vector<double> probabilities;  // bernoulli only
    std::vector<Colour> block;          // block only
    std::string custom_id;              // custom only
    Sampler sampler;                    // custom only

    static ColouringModel bernoulli(std::vector<double> p);
    static ColouringModel uniform(std::uint32_t d);
    static ColouringModel constant(std::uint32_t d);
    static ColouringModel fixed_block(const Colouring& partition);
    static ColouringModel custom(std::string id, std::uint32_t d, Sampler sampler);

    // Parses "bernoulli", "uniform", "constant"; anything else is an unknown kind.
    static ColouringModel parse(const std::string& kind, std::uint32_t d, std::vector<double> p);
};

Colouring sample(const ColouringModel& model, const WindowGraph& w, std::uint64_t seed);

// Fraction of vertices coloured k: the root probability under a uniform root.
double intensity(const Colouring& c, Colour k);

// Every colour's intensity within delta of 1/d. Class sizes in
// {floor(n/d), ceil(n/d)} always count as balanced.
bool is_delta_balanced(const Colouring& c, double delta);

// Directed incidences (u, v) with c(u) != c(v). Loops never count.
std::size_t bichromatic_incidences(const WindowGraph& w, const Colouring& c);

// Average number of differently coloured neighbours per vertex.
double expansion(const WindowGraph& w, const Colouring& c);

Colouring permute_colours(const Colouring& c, std::span<const Colour> permutation);

// A pattern entry pins the colour of the vertex reached from the root by a
// word in the generators (the empty word is the root).
struct PatternEntry {
    std::vector<Label> word;
    Colour colour;
};

struct MarginalPattern {
    std::vector<PatternEntry> entries;
};

// Monte Carlo estimate of P[colouring matches the pattern at a uniform root].
EstimateReport marginal_estimate(const ColouringModel& model, const WindowGraph& w,
                                 const MarginalPattern& pattern, std::size_t trials,
                                 std::uint64_t seed);

}  // namespace urglab
