// io.hpp: JSON and CSV encodings of windows, colourings and estimates.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "urglab/colouring.hpp"
#include "urglab/graph.hpp"
#include "urglab/stats.hpp"

namespace urglab {

using Json = nlohmann::ordered_json;

// {model, params, seed, n, degree_bound, generators, edges}. Each edge is
// listed once, as [u, v, label] with the lexicographically smaller of the two
// label names (u <= v when the label is its own inverse).
Json window_to_json(const WindowGraph& w);
WindowGraph window_from_json(const Json& j);
void write_window(const WindowGraph& w, const std::filesystem::path& path);
WindowGraph read_window(const std::filesystem::path& path);

// {window_id, d, colours}, colours as [colour, run length] pairs.
Json colouring_to_json(const Colouring& c, const std::string& window_id);
Colouring colouring_from_json(const Json& j);

// Shortest round-trip decimal form; identical bits give identical text.
std::string format_number(double x);

// Rows of flat objects. The header comes from the first row's keys; arrays
// are written space separated, strings with commas or quotes are quoted.
std::string to_csv(const std::vector<Json>& rows);

Json estimate_to_json(const EstimateReport& r);
// Columns: quantity, estimate, stderr, trials, master_seed.
std::string estimates_to_csv(const std::vector<EstimateReport>& reports);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace urglab
