// config.hpp: experiment configurations for the runner.
//
// A configuration is a flat "key = value" text file ('#' starts a comment)
// plus command-line overrides. Every key has a documented default.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urglab {

struct ParamSpec {
    std::string key;
    std::string fallback;  // empty: no default
    std::string doc;
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = {"mtp-check", "kazhdan", "percolation",
                                                   "palm",      "cost-bound", "gauss-check"};
    return kinds;
}

// Keys accepted by a kind, shared keys first. Throws ValidationError for an
// unknown kind.
const std::vector<ParamSpec>& parameter_table(const std::string& kind);

class ExperimentConfig {
public:
    ExperimentConfig() = default;
    explicit ExperimentConfig(std::string kind) : kind_(std::move(kind)) {}

    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::filesystem::path& path);

    const std::string& kind() const { return kind_; }
    void set_kind(std::string kind) { kind_ = std::move(kind); }
    // "key=value"; the key "kind" sets the experiment kind.
    void assign(std::string_view assignment);
    void set(const std::string& key, std::string value);
    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    // Explicit value, else the table default; nullopt if neither.
    std::optional<std::string> lookup(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::uint64_t unsigned_integer(const std::string& key) const;
    double number(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;

    // All keys of the kind with defaults filled in, sorted by key.
    std::map<std::string, std::string> resolved() const;

private:
    std::string kind_;
    std::map<std::string, std::string> values_;
};

// Stable messages; empty iff run() passes its validation paths.
std::vector<std::string> validate(const ExperimentConfig& config);

}  // namespace urglab
