#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rabilab/cli/config.hpp"
#include "rabilab/cli/output.hpp"
#include "rabilab/cli/run.hpp"

int main(int argc, char** argv) {
    namespace rc = rabilab::cli;
    CLI::App app{"Numerical lab for the quantum and semiclassical Rabi Hamiltonians", "rabilab"};
    app.set_version_flag("--version", rc::version());

    const std::vector<std::string> commands{"check-identities", "sweep", "fock-limit", "transform-limit",
                                            "evolve",           "compare", "diagram"};
    std::string command;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance_scale;
    app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(commands));
    app.add_option("--config", config_path, "Configuration file (dotted key = value lines)")->required();
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
    app.add_option("--seed", seed, "Seed for randomized sampling (overrides run.seed)");
    app.add_option("--tolerance-scale", tolerance_scale, "Multiplier on every check tolerance")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? rc::exit_ok : rc::exit_config_error;
    }

    rc::Overrides overrides;
    if (out_dir) overrides.emplace_back("output.dir", *out_dir);
    if (seed) overrides.emplace_back("run.seed", std::to_string(*seed));
    if (tolerance_scale) overrides.emplace_back("run.tolerance_scale", rabilab::csv::format_real(*tolerance_scale));
    return rc::run_from_file(command, config_path, overrides, std::cout, std::cerr);
}
