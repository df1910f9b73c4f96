// urglab: command-line runner for the experiment pipelines.
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "urglab/config.hpp"
#include "urglab/errors.hpp"
#include "urglab/graph.hpp"
#include "urglab/io.hpp"
#include "urglab/random.hpp"
#include "urglab/runner.hpp"

using namespace urglab;

namespace {

struct KindCommand {
    std::string kind;
    CLI::App* app = nullptr;
    std::string config_file;
    std::vector<std::string> overrides;
    std::map<std::string, std::string> values;
    bool brute_force = false;
    bool validate_only = false;
};

ExperimentConfig assemble(const std::string& kind, const std::string& file, const std::vector<std::string>& overrides) {
    ExperimentConfig c = file.empty() ? ExperimentConfig{} : ExperimentConfig::load(file);
    if (!kind.empty()) c.set_kind(kind);
    for (const auto& o : overrides) c.assign(o);
    return c;
}

int report_violations(const ExperimentConfig& c) {
    const auto violations = validate(c);
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    if (violations.empty()) std::cout << "ok\n";
    return violations.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"urglab: unimodular random graph and Palm calculus laboratory"};
    app.require_subcommand(1);

    std::string run_config;
    std::vector<std::string> run_overrides;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a config file");
    run_cmd->add_option("--config", run_config, "key = value config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--set", run_overrides, "override, key=value (repeatable)");

    std::string validate_config;
    std::vector<std::string> validate_overrides;
    auto* validate_cmd = app.add_subcommand("validate", "List the violations of a config");
    validate_cmd->add_option("--config", validate_config, "key = value config file")->check(CLI::ExistingFile);
    validate_cmd->add_option("--set", validate_overrides, "override, key=value (repeatable)");

    std::string params_kind;
    auto* params_cmd = app.add_subcommand("params", "Print the keys and defaults of an experiment kind");
    params_cmd->add_option("kind", params_kind, "experiment kind")->required();

    std::string window_model = "torus", window_out;
    std::uint32_t window_d = 2, window_l = 8, window_k = 2, window_n = 100;
    std::uint64_t window_seed = 0;
    auto* window_cmd = app.add_subcommand("window", "Write a window as JSON");
    window_cmd->add_option("--model", window_model, "torus | random-regular | cycle | path | complete");
    window_cmd->add_option("--d", window_d, "torus dimension");
    window_cmd->add_option("--L", window_l, "torus side");
    window_cmd->add_option("--k", window_k, "random-regular rank");
    window_cmd->add_option("--n", window_n, "vertex count");
    window_cmd->add_option("--seed", window_seed, "random-regular seed");
    window_cmd->add_option("--output,-o", window_out, "output file")->required();

    std::vector<KindCommand> kinds;
    kinds.reserve(experiment_kinds().size());
    for (const auto& kind : experiment_kinds()) {
        KindCommand& k = kinds.emplace_back();
        k.kind = kind;
        k.app = app.add_subcommand(kind, "Run the " + kind + " experiment");
        k.app->add_option("--config", k.config_file, "key = value config file")->check(CLI::ExistingFile);
        k.app->add_option("--set", k.overrides, "override, key=value (repeatable)");
        k.app->add_flag("--validate-only", k.validate_only, "only list violations");
        for (const auto& spec : parameter_table(kind)) {
            if (spec.key == "brute_force") {
                k.app->add_flag("--brute-force", k.brute_force, spec.doc);
                continue;
            }
            std::string names = "--" + spec.key;
            if (spec.key.find('_') != std::string::npos) {
                std::string dashed = spec.key;
                std::replace(dashed.begin(), dashed.end(), '_', '-');
                names += ",--" + dashed;
            }
            std::string doc = spec.doc + (spec.fallback.empty() ? "" : " (default " + spec.fallback + ")");
            k.app->add_option(names, k.values[spec.key], doc);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) {
            return run_with_exit_code(assemble("", run_config, run_overrides), std::cerr);
        }
        if (validate_cmd->parsed()) {
            return report_violations(assemble("", validate_config, validate_overrides));
        }
        if (params_cmd->parsed()) {
            for (const auto& spec : parameter_table(params_kind)) {
                std::cout << spec.key << " = " << spec.fallback << "  # " << spec.doc << "\n";
            }
            return 0;
        }
        if (window_cmd->parsed()) {
            WindowGraph w = [&] {
                if (window_model == "torus") return build_torus_window(window_d, window_l);
                if (window_model == "random-regular") return build_random_regular(window_k, window_n, window_seed);
                if (window_model == "cycle") return build_torus_window(1, window_n);
                if (window_model == "path") return build_path(window_n);
                if (window_model == "complete") return build_complete(window_n);
                throw ValidationError("unknown window model '" + window_model + "'");
            }();
            write_window(w, window_out);
            std::cerr << "wrote " << window_out << " (" << w.id() << ")\n";
            return 0;
        }
        for (auto& k : kinds) {
            if (!k.app->parsed()) continue;
            ExperimentConfig c = assemble(k.kind, k.config_file, {});
            for (const auto& [key, value] : k.values) {
                if (!value.empty()) c.set(key, value);
            }
            if (k.brute_force) c.set("brute_force", "true");
            for (const auto& o : k.overrides) c.assign(o);
            c.set_kind(k.kind);
            if (k.validate_only) return report_violations(c);
            return run_with_exit_code(c, std::cerr);
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "guard violated: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
