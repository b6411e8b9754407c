#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "linrep/problems.hpp"
#include "linrep/runner.hpp"

namespace {

int run_from_config(const std::string& path, const std::string& expected_subcommand,
                    const std::string& output_override,
                    const std::string& problem_override, long long seed_override) {
    using linrep::cli::json;
    json config = linrep::cli::load_config(path);
    if (!expected_subcommand.empty()) {
        if (config.contains("subcommand") &&
            config["subcommand"] != expected_subcommand)
            throw linrep::ValidationError("config subcommand '" +
                                          config.value("subcommand", std::string()) +
                                          "' does not match the invoked subcommand");
        config["subcommand"] = expected_subcommand;
    }
    if (!output_override.empty()) config["output_dir"] = output_override;
    if (!problem_override.empty()) config["problem"] = problem_override;
    if (seed_override >= 0) config["seed"] = seed_override;

    linrep::cli::RunArtifacts artifacts = linrep::cli::run(config);
    std::cout << "wrote " << artifacts.result_path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linrep: linear-representation solvers for nonlinear ODEs and "
                 "Hamilton-Jacobi equations, with quantum-algorithm cost accounting"};
    app.require_subcommand(1);

    std::string config_path, output_dir, problem_name;
    long long seed = -1;

    auto add_run_subcommand = [&](const std::string& name, const std::string& what) {
        CLI::App* sub = app.add_subcommand(name, what);
        sub->add_option("-c,--config", config_path, "JSON config file")->required();
        sub->add_option("-o,--output", output_dir, "override output directory");
        sub->add_option("-p,--problem", problem_name, "override problem name");
        sub->add_option("-s,--seed", seed, "override seed");
        sub->callback([&, name] {
            std::exit(run_from_config(config_path, name == "run" ? "" : name,
                                      output_dir, problem_name, seed));
        });
        return sub;
    };

    add_run_subcommand("run", "execute a run described entirely by the config file");
    add_run_subcommand("ode-liouville", "transport representation of a nonlinear ODE");
    add_run_subcommand("ode-kvn", "unitary square-root representation of a nonlinear ODE");
    add_run_subcommand("hje", "phase-space level-set run for a Hamilton-Jacobi equation");
    add_run_subcommand("schrodinger", "semiclassical split-step wave run");

    CLI::App* res = app.add_subcommand("resources", "evaluate the complexity registry");
    std::string res_config;
    res->add_option("-c,--config", res_config, "JSON config file (optional)");
    res->add_option("-o,--output", output_dir, "override output directory");
    res->callback([&] {
        linrep::cli::json config;
        if (!res_config.empty()) config = linrep::cli::load_config(res_config);
        config["subcommand"] = "resources";
        if (!output_dir.empty()) config["output_dir"] = output_dir;
        linrep::cli::RunArtifacts artifacts = linrep::cli::run(config);
        std::cout << "wrote " << artifacts.result_path.string() << "\n";
        std::exit(0);
    });

    CLI::App* list = app.add_subcommand("list-problems", "print the problem registry");
    list->callback([] {
        std::cout << linrep::list_problems_text();
        std::exit(0);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return linrep::cli::exit_code_for(e);
    }
    return 0;
}
