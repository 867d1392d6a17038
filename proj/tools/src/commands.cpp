#include "lifeins_cli/commands.hpp"

#include <cmath>
#include <memory>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lifeins/errors.hpp"
#include "lifeins/hjb_verifier.hpp"
#include "lifeins/io/csv.hpp"
#include "lifeins/io/scenario_json.hpp"

namespace lifeins::cli {

namespace {

namespace fs = std::filesystem;
using io::CsvWriter;

struct Context {
    const RunManifest& manifest;
    std::ostream& log;
    io::ScenarioDocument doc;
    RunResult result;

    fs::path output(const std::string& name) const { return manifest.out_dir / name; }

    void save(const CsvWriter& csv, const std::string& name) {
        const fs::path path = output(name);
        csv.save(path);
        result.files.push_back(path);
        log << "wrote " << path.string() << " (" << csv.rows() << " rows)\n";
    }
};

std::string asset_column(const char* stem, Eigen::Index i) { return std::string(stem) + "_" + std::to_string(i + 1); }

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n < 2) throw InputError("grid needs at least 2 points per axis");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = b;
    return v;
}

void check_wealth_range(const RunManifest& m) {
    if (!(m.x_min > 0.0 && m.x_max > m.x_min)) throw InputError("wealth range must satisfy 0 < x-min < x-max");
}

SimulationConfig simulation_config(const RunManifest& m, Objective objective) {
    SimulationConfig cfg;
    cfg.n_paths = m.paths;
    cfg.dt = m.dt;
    cfg.seed = m.seed;
    cfg.evaluation_mode = m.mode;
    cfg.objective = objective;
    cfg.threads = m.threads;
    cfg.validate();
    return cfg;
}

Objective objective_for(Variant v) { return v == Variant::WithInsurance ? Objective::WithBequest : Objective::NoBequest; }

void write_manifest(Context& ctx) {
    const RunManifest& m = ctx.manifest;
    nlohmann::ordered_json j;
    j["command"] = to_string(m.command);
    j["scenario"] = m.scenario ? m.scenario->string() : std::string("<built-in figure1>");
    j["overrides"] = m.overrides;
    j["seed"] = m.seed;
    j["paths"] = m.paths;
    j["dt"] = m.dt;
    j["mode"] = to_string(m.mode);
    j["variant"] = to_string(m.variant);
    j["grid"] = {{"t_points", m.t_points}, {"x_points", m.x_points}, {"x_min", m.x_min}, {"x_max", m.x_max}};
    j["resolved_scenario"] = nlohmann::ordered_json::parse(ctx.doc.resolved_json);
    const fs::path path = ctx.output("run_manifest.json");
    io::write_file_atomic(path, j.dump(2) + "\n");
    ctx.result.files.push_back(path);
}

void run_solve(Context& ctx) {
    const RunManifest& m = ctx.manifest;
    check_wealth_range(m);
    const StrategyCoefficients coef(ctx.doc.scenario, m.variant);
    const auto N = static_cast<Eigen::Index>(coef.scenario().market.assets());

    CsvWriter curves({"t", "b", "e", "D", "a", "Sigma", "H", "K"});
    for (double t : coef.grid()) {
        const CoefficientsAt c = coef.at(t);
        curves.add_row({t, c.b, c.e, c.D, c.a, c.Sigma, c.H, c.K});
    }
    ctx.save(curves, "coefficients.csv");

    std::vector<std::string> header{"t", "x", "c", "p"};
    for (Eigen::Index i = 0; i < N; ++i) header.push_back(asset_column("theta", i));
    header.push_back("theta_0");
    CsvWriter grid(header);
    for (double t : linspace(0.0, coef.horizon(), m.t_points))
        for (double x : linspace(m.x_min, m.x_max, m.x_points)) {
            const ControlAction a = optimal_control(coef, t, x);
            std::vector<CsvWriter::Cell> row{t, x, a.c, a.p};
            for (Eigen::Index i = 0; i < N; ++i) row.emplace_back(a.theta[i]);
            row.emplace_back(a.theta0);
            grid.add_row(row);
        }
    ctx.save(grid, "strategy_grid.csv");
    ctx.result.summary = "solved " + std::string(to_string(m.variant)) + " closed form on " +
                         std::to_string(coef.grid().size()) + " knots";
}

void run_verify(Context& ctx) {
    const RunManifest& m = ctx.manifest;
    check_wealth_range(m);
    const StrategyCoefficients coef(ctx.doc.scenario, m.variant);
    hjb::VerificationOptions opt;
    opt.time_points = m.t_points;
    opt.wealth_points = m.x_points;
    opt.x_min = m.x_min;
    opt.x_max = m.x_max;
    opt.threads = m.threads;
    const hjb::VerificationReport report = hjb::verify(coef, opt);

    CsvWriter csv({"t", "x", "residual", "foc_c", "foc_p", "foc_theta_norm", "hessian_ok", "relative_residual",
                   "lambda_v_residual", "fd_relative_residual"});
    for (const auto& p : report.points)
        csv.add_row({p.t, p.x, p.residual, p.foc.consumption, p.foc.premium, p.foc.portfolio,
                     static_cast<long long>(p.hessian_ok), p.relative_residual, p.lambda_v_residual,
                     p.fd_relative_residual});
    ctx.save(csv, "verification.csv");
    ctx.result.summary = report.summary();
    if (!report.passed) ctx.result.exit_code = kVerificationFailed;
}

void add_estimate_columns(std::vector<std::string>& header) {
    for (const char* h : {"mean_utility", "std_error", "n_paths", "bankruptcy_fraction", "mean_terminal_wealth",
                          "mean_insurance_spend"})
        header.emplace_back(h);
}

void add_estimate_cells(std::vector<CsvWriter::Cell>& row, const UtilityEstimate& e) {
    row.emplace_back(e.mean);
    row.emplace_back(e.std_error);
    row.emplace_back(static_cast<long long>(e.n_paths));
    row.emplace_back(e.bankruptcy_fraction);
    row.emplace_back(e.mean_terminal_wealth);
    row.emplace_back(e.mean_insurance_spend);
}

void warn_bankruptcies(Context& ctx, const std::string& name, const UtilityEstimate& e) {
    if (e.bankrupt_paths == 0) return;
    ctx.log << "warning: " << name << ": " << e.bankrupt_paths << " of " << e.n_paths
            << " paths went bankrupt and are excluded from the estimate\n";
}

void run_simulate(Context& ctx) {
    const RunManifest& m = ctx.manifest;
    const Scenario& s = ctx.doc.scenario;
    auto coef = std::make_shared<const StrategyCoefficients>(s, m.variant);
    const ClosedFormStrategy strategy(coef);
    const SimulationConfig cfg = simulation_config(m, objective_for(m.variant));
    const UtilityEstimate est = estimate_expected_utility(s, strategy, 0.0, s.x0, cfg);
    const double V = value_function(*coef, 0.0, s.x0);
    warn_bankruptcies(ctx, strategy.name(), est);

    std::vector<std::string> header{"strategy", "mode", "dt", "seed"};
    add_estimate_columns(header);
    header.emplace_back("value_function");
    CsvWriter csv(header);
    std::vector<CsvWriter::Cell> row{strategy.name(), std::string(to_string(m.mode)), m.dt,
                                     static_cast<long long>(m.seed)};
    add_estimate_cells(row, est);
    row.emplace_back(V);
    csv.add_row(row);
    ctx.save(csv, "simulation.csv");

    if (m.dump_paths > 0) {
        const auto N = static_cast<Eigen::Index>(s.market.assets());
        std::vector<std::string> ph{"path", "t", "wealth", "c", "p"};
        for (Eigen::Index i = 0; i < N; ++i) ph.push_back(asset_column("risky", i));
        ph.emplace_back("event");
        CsvWriter paths(ph);
        for (std::size_t k = 0; k < std::min(m.dump_paths, m.paths); ++k) {
            const WealthPath path = simulate_path(s, strategy, cfg, k);
            for (std::size_t i = 0; i < path.times.size(); ++i) {
                const bool has_control = i < path.consumption.size();
                std::vector<CsvWriter::Cell> r{static_cast<long long>(k), path.times[i], path.wealth[i]};
                r.emplace_back(has_control ? path.consumption[i] : std::nan(""));
                r.emplace_back(has_control ? path.premium[i] : std::nan(""));
                for (Eigen::Index a = 0; a < N; ++a) r.emplace_back(has_control ? path.risky[i][a] : std::nan(""));
                r.emplace_back(i + 1 == path.times.size() ? std::string(to_string(path.terminated_by)) : std::string());
                paths.add_row(r);
            }
        }
        ctx.save(paths, "paths.csv");
    }
    std::ostringstream os;
    os.precision(6);
    os << strategy.name() << ": J = " << est.mean << " +/- " << est.std_error << " (V = " << V
       << ", z = " << (est.mean - V) / est.std_error << ", bankrupt " << est.bankruptcy_fraction << ")";
    ctx.result.summary = os.str();
}

void run_compare(Context& ctx) {
    const RunManifest& m = ctx.manifest;
    check_wealth_range(m);
    const Scenario& s = ctx.doc.scenario;
    auto with = std::make_shared<const StrategyCoefficients>(s, Variant::WithInsurance);
    auto without = std::make_shared<const StrategyCoefficients>(s, Variant::NoInsurance);
    const auto N = static_cast<Eigen::Index>(s.market.assets());

    std::vector<std::string> header{"t", "x", "b", "b_no_insurance"};
    for (const char* stem : {"xi_alpha", "theta", "theta_no_insurance", "risky", "risky_no_insurance"})
        for (Eigen::Index i = 0; i < N; ++i) header.push_back(asset_column(stem, i));
    header.emplace_back("theta_0");
    header.emplace_back("theta_0_no_insurance");
    header.emplace_back("sign_agrees");
    CsvWriter grid(header);
    std::size_t disagreements = 0;
    for (double t : linspace(0.0, s.prefs.T, m.t_points)) {
        const Eigen::VectorXd xa = with->xi_alpha(t);
        for (double x : linspace(m.x_min, m.x_max, m.x_points)) {
            const ControlAction a = optimal_control(*with, t, x);
            const ControlAction a0 = optimal_control(*without, t, x);
            bool agrees = true;
            if (t < s.prefs.T)
                for (Eigen::Index i = 0; i < N; ++i) {
                    const double d = a0.theta[i] - a.theta[i];
                    agrees = agrees && ((d > 0.0) == (xa[i] > 0.0)) && ((d < 0.0) == (xa[i] < 0.0));
                }
            if (!agrees) ++disagreements;
            std::vector<CsvWriter::Cell> row{t, x, with->human_capital(t), without->human_capital(t)};
            for (Eigen::Index i = 0; i < N; ++i) row.emplace_back(xa[i]);
            for (Eigen::Index i = 0; i < N; ++i) row.emplace_back(a.theta[i]);
            for (Eigen::Index i = 0; i < N; ++i) row.emplace_back(a0.theta[i]);
            for (Eigen::Index i = 0; i < N; ++i) row.emplace_back(a.theta[i] * x);
            for (Eigen::Index i = 0; i < N; ++i) row.emplace_back(a0.theta[i] * x);
            row.emplace_back(a.theta0);
            row.emplace_back(a0.theta0);
            row.emplace_back(static_cast<long long>(agrees));
            grid.add_row(row);
        }
    }
    ctx.save(grid, "comparison.csv");

    // Each strategy is scored under its own problem's objective; the seed is
    // shared, so both see the same Brownian paths and death times.
    const ClosedFormStrategy insured(with), uninsured(without);
    struct Entry {
        const ClosedFormStrategy* strategy;
        Objective objective;
        const char* label;
        double value;
    };
    const Entry entries[] = {
        {&insured, Objective::WithBequest, "with_bequest", value_function(*with, 0.0, s.x0)},
        {&uninsured, Objective::NoBequest, "no_bequest", value_function(*without, 0.0, s.x0)},
    };
    std::vector<ComparisonRow> rows;
    for (const Entry& e : entries) {
        const Strategy* one[] = {e.strategy};
        rows.push_back(compare_strategies(s, one, 0.0, s.x0, simulation_config(m, e.objective)).front());
        warn_bankruptcies(ctx, rows.back().name, rows.back().estimate);
    }
    std::vector<std::string> mh{"strategy", "objective", "mode"};
    add_estimate_columns(mh);
    mh.emplace_back("value_function");
    CsvWriter mc(mh);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<CsvWriter::Cell> row{rows[i].name, std::string(entries[i].label), std::string(to_string(m.mode))};
        add_estimate_cells(row, rows[i].estimate);
        row.emplace_back(entries[i].value);
        mc.add_row(row);
    }
    ctx.save(mc, "comparison_mc.csv");

    std::ostringstream os;
    os.precision(6);
    os << "portfolio comparison: " << disagreements << " sign disagreements; J(with) = " << rows[0].estimate.mean
       << " +/- " << rows[0].estimate.std_error << ", J(without) = " << rows[1].estimate.mean << " +/- "
       << rows[1].estimate.std_error;
    ctx.result.summary = os.str();
}

void run_figure1(Context& ctx) {
    const StrategyCoefficients coef(ctx.doc.scenario, Variant::WithInsurance);
    const double T = coef.horizon();
    CsvWriter csv({"t", "full_wealth", "x", "p"});
    const auto nt = static_cast<std::size_t>(std::llround(T / 0.5));
    for (std::size_t i = 0; i <= nt; ++i) {
        const double t = i == nt ? T : 0.5 * static_cast<double>(i);
        const CoefficientsAt c = coef.at(t);
        for (int j = 0; j <= 300; ++j) {
            const double y = 1e4 * j;
            const double x = y - c.b;
            csv.add_row({t, y, x, c.eta * (c.D * y - x)});
        }
    }
    ctx.save(csv, "surface.csv");
    ctx.result.summary = "optimal premium surface in $/yr (the reference figure plots thousands)";
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "solve") return Command::Solve;
    if (name == "verify") return Command::Verify;
    if (name == "simulate") return Command::Simulate;
    if (name == "compare") return Command::Compare;
    if (name == "figure1") return Command::Figure1;
    throw InputError("unknown command '" + name + "'");
}

const char* to_string(Command c) noexcept {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Verify: return "verify";
        case Command::Simulate: return "simulate";
        case Command::Compare: return "compare";
        case Command::Figure1: return "figure1";
    }
    return "unknown";
}

RunResult run(const RunManifest& manifest, std::ostream& log) {
    auto fail = [&](int code, const std::string& what) {
        RunResult r;
        r.exit_code = code;
        r.summary = what;
        log << "error: " << what << "\n";
        return r;
    };
    try {
        std::vector<std::string> overrides = manifest.overrides;
        if (manifest.grid_steps) overrides.push_back("grid_steps=" + std::to_string(*manifest.grid_steps));
        if (!manifest.scenario && manifest.command != Command::Figure1)
            throw InputError("--scenario is required for " + std::string(to_string(manifest.command)));
        io::ScenarioDocument doc =
            manifest.scenario ? io::load_scenario(*manifest.scenario, overrides)
                              : io::parse_scenario(io::figure1_json(), overrides, "<built-in figure1>");

        std::error_code ec;
        fs::create_directories(manifest.out_dir, ec);
        if (ec) throw IoError("cannot create output directory " + manifest.out_dir.string() + ": " + ec.message());

        Context ctx{manifest, log, std::move(doc), {}};
        switch (manifest.command) {
            case Command::Solve: run_solve(ctx); break;
            case Command::Verify: run_verify(ctx); break;
            case Command::Simulate: run_simulate(ctx); break;
            case Command::Compare: run_compare(ctx); break;
            case Command::Figure1: run_figure1(ctx); break;
        }
        write_manifest(ctx);
        return ctx.result;
    } catch (const InputError& e) {
        return fail(kInputError, e.what());
    } catch (const IoError& e) {
        return fail(kInputError, e.what());
    } catch (const SingularMatrixError& e) {
        return fail(kInputError, e.what());
    } catch (const std::exception& e) {
        return fail(kNumericalError, e.what());
    }
}

}  // namespace lifeins::cli
