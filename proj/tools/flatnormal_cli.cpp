#include "flatnormal/catalog.hpp"
#include "flatnormal/config.hpp"
#include "flatnormal/error.hpp"
#include "flatnormal/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace flatnormal;

namespace {

struct Overrides {
    std::string config_path;
    std::string out;
    std::string engine;
    std::optional<std::uint64_t> seed;
    bool strict = false;
};

RunConfig load(const Overrides& o) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw Error(ErrorKind::argument, "cannot read config '" + o.config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    std::vector<std::string> warnings;
    RunConfig config = parse_config(text.str(), o.strict, &warnings);
    for (const auto& w : warnings) std::cerr << "WARN " << w << "\n";
    if (!o.out.empty()) config.directory = o.out;
    if (o.engine == "ad") config.engine = Engine::ad;
    if (o.engine == "fd") config.engine = Engine::fd;
    if (o.seed) config.seed = *o.seed;
    validate_config(config);
    return config;
}

int run(const Overrides& o, int (*runner)(const RunConfig&, std::ostream&)) {
    try {
        return runner(load(o), std::cout);
    } catch (const Error& e) {
        std::cerr << "ERROR " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e);
    }
}

void add_run_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "run configuration file")->required();
    cmd->add_option("--out", o.out, "output directory (overrides [output] directory)");
    cmd->add_option("--engine", o.engine, "differentiation engine")->check(CLI::IsMember({"ad", "fd"}));
    cmd->add_option("--seed", o.seed, "seed for generic weights and random sampling");
    cmd->add_flag("--strict", o.strict, "unknown config keys are errors instead of warnings");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for immersions with flat normal bundle"};
    app.require_subcommand(1);

    Overrides verify_opts;
    Overrides growth_opts;
    Overrides coords_opts;
    auto* verify = app.add_subcommand("verify", "Gauss, Codazzi, connection, g0 flatness and curvature checks");
    auto* growth = app.add_subcommand("growth", "distance balls, volume bound chain and growth fit");
    auto* coords = app.add_subcommand("coords", "principal coordinates by commuting flows");
    add_run_options(verify, verify_opts);
    add_run_options(growth, growth_opts);
    add_run_options(coords, coords_opts);
    auto* catalog = app.add_subcommand("catalog", "built-in example immersions");
    catalog->require_subcommand(1);
    auto* list = catalog->add_subcommand("list", "list catalog entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (*verify) return run(verify_opts, run_verify);
    if (*growth) return run(growth_opts, run_growth);
    if (*coords) return run(coords_opts, run_coords);
    if (*list) {
        for (const auto& entry : catalog_listing())
            std::cout << entry.name << "\t" << entry.parameters << "\t" << entry.description << "\n";
        return exit_success;
    }
    return exit_usage;
}
