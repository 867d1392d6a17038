#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "lifeins_cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace lifeins;
    CLI::App app{"Optimal consumption, investment and life insurance: closed form, verification, simulation"};
    app.require_subcommand(1);

    cli::RunManifest m;
    std::string scenario, mode = "fixed", variant = "with_insurance";
    std::size_t grid_steps = 0;

    const std::map<std::string, EvaluationMode> modes{{"fixed", EvaluationMode::FixedHorizonWeighted},
                                                      {"random", EvaluationMode::RandomHorizon}};
    const std::map<std::string, Variant> variants{{"with_insurance", Variant::WithInsurance},
                                                  {"no_insurance", Variant::NoInsurance}};

    auto common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("--scenario", scenario, "Scenario JSON file");
        if (needs_scenario) opt->required();
        sub->add_option("--out", m.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--override", m.overrides, "Set a scenario value, KEY=VALUE with a dotted key (repeatable)")
            ->take_all();
        sub->add_option("--grid-steps", grid_steps, "Steps of the coefficient ODE grid");
        sub->add_option("--threads", m.threads, "Worker threads (0 = all cores)")->capture_default_str();
    };
    auto grid = [&](CLI::App* sub) {
        sub->add_option("--t-points", m.t_points, "Time points of the output grid")->capture_default_str();
        sub->add_option("--x-points", m.x_points, "Wealth points of the output grid")->capture_default_str();
        sub->add_option("--x-min", m.x_min, "Smallest wealth on the grid, $")->capture_default_str();
        sub->add_option("--x-max", m.x_max, "Largest wealth on the grid, $")->capture_default_str();
    };
    auto monte_carlo = [&](CLI::App* sub) {
        sub->add_option("--seed", m.seed, "Random seed")->capture_default_str();
        sub->add_option("--paths", m.paths, "Monte Carlo paths")->capture_default_str();
        sub->add_option("--dt", m.dt, "Euler step, years")->capture_default_str();
        sub->add_option("--mode", mode, "Estimator: fixed (survival-weighted) or random (sampled death)")
            ->check(CLI::IsMember({"fixed", "random"}))
            ->capture_default_str();
    };
    auto with_variant = [&](CLI::App* sub) {
        sub->add_option("--variant", variant, "with_insurance or no_insurance")
            ->check(CLI::IsMember({"with_insurance", "no_insurance"}))
            ->capture_default_str();
    };

    auto* solve = app.add_subcommand("solve", "Write coefficient curves and the optimal strategy grid");
    common(solve, true);
    grid(solve);
    with_variant(solve);
    auto* verify = app.add_subcommand("verify", "Check the HJB equation, first- and second-order conditions");
    common(verify, true);
    grid(verify);
    with_variant(verify);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of expected utility");
    common(simulate, true);
    monte_carlo(simulate);
    with_variant(simulate);
    simulate->add_option("--dump-paths", m.dump_paths, "Write the first N paths to paths.csv");
    auto* compare = app.add_subcommand("compare", "Insured vs uninsured portfolios and utilities");
    common(compare, true);
    grid(compare);
    monte_carlo(compare);
    auto* figure = app.add_subcommand("figure1", "Optimal premium surface over time and full wealth");
    common(figure, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kSuccess : cli::kInputError;
    }

    for (auto* sub : {solve, verify, simulate, compare, figure})
        if (sub->parsed()) m.command = cli::parse_command(sub->get_name());
    if (!scenario.empty()) m.scenario = scenario;
    if (grid_steps > 0) m.grid_steps = grid_steps;
    m.mode = modes.at(mode);
    m.variant = variants.at(variant);

    const cli::RunResult r = cli::run(m, std::cerr);
    if (r.exit_code != cli::kInputError) std::cout << r.summary << "\n";
    return r.exit_code;
}
