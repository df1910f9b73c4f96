// runner.hpp: dispatches an experiment configuration to its pipeline and
// writes the outputs plus run.manifest.json.
#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "urglab/config.hpp"
#include "urglab/graph.hpp"
#include "urglab/io.hpp"

namespace urglab {

inline constexpr const char* urglab_version = "0.1.0";
inline constexpr const char* manifest_name = "run.manifest.json";

struct OutputFile {
    std::string path;  // relative to the output directory
    std::uintmax_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    Json config;
    std::string version;
    double wall_seconds = 0.0;
    std::vector<OutputFile> outputs;
    Json to_json() const;
};

std::string sha256_hex(const std::string& bytes);

// The window described by model/d/L/k/n (or window_file) of a configuration.
WindowGraph window_from_config(const ExperimentConfig& config);

// Data outputs of an experiment as (file name, contents), in write order.
using OutputSet = std::vector<std::pair<std::string, std::string>>;
OutputSet compute_outputs(const ExperimentConfig& config);

// Validates, computes, writes outputs and the manifest. Throws
// ValidationError for bad configurations and GuardError for guard failures.
RunManifest run(const ExperimentConfig& config);

// run() with errors mapped to exit codes: 0 success, 2 validation, 3 guard.
int run_with_exit_code(const ExperimentConfig& config, std::ostream& log);

}  // namespace urglab
