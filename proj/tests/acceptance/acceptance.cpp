// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "integral_oracles.hpp"
#include "lifeins/hjb_verifier.hpp"
#include "lifeins/io/csv.hpp"
#include "lifeins/lifecycle/controls.hpp"
#include "lifeins/simulator.hpp"
#include "lifeins_cli/commands.hpp"
#include "market_oracles.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace lifeins;
namespace fs = std::filesystem;
using testing_support::figure1;
using testing_support::figure1_coefficients;
using testing_support::rel_err;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Accumulates failed checks; the first few are reported.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures_++ < 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    Outcome outcome(std::string detail) const {
        if (failures_ == 0) return {true, std::move(detail)};
        return {false, std::to_string(failures_) + " failed: " + notes_ + " | " + detail};
    }

private:
    int failures_ = 0;
    std::string notes_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("lifeins_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SimulationConfig mc_config(EvaluationMode mode) {
    SimulationConfig c;
    c.n_paths = 100000;
    c.dt = 0.01;
    c.seed = 20240101;
    c.evaluation_mode = mode;
    return c;
}

// Shared by criteria 4 and 5.
const UtilityEstimate& optimum_run(EvaluationMode mode) {
    static std::map<EvaluationMode, UtilityEstimate> cache;
    auto it = cache.find(mode);
    if (it == cache.end())
        it = cache.emplace(mode, estimate_expected_utility(figure1(), ClosedFormStrategy(figure1_coefficients()), 0.0,
                                                           1e5, mc_config(mode)))
                 .first;
    return it->second;
}

Outcome hjb_certification() {
    hjb::VerificationOptions opt;
    opt.threads = 1;
    const auto start = std::chrono::steady_clock::now();
    const auto report = hjb::verify(*figure1_coefficients(), opt);
    const double secs = seconds_since(start);
    Checks c;
    c.expect(report.points.size() == 51u * 51u, "grid is not 51x51");
    c.expect(report.max_relative_residual < 1e-8, "analytic residual");
    c.expect(report.max_fd_relative_residual < 1e-4, "finite-difference residual");
    c.expect(secs < 10.0, "runtime");
    return c.outcome(fmt("analytic %.2e, FD %.2e, single thread %.2f s", report.max_relative_residual,
                         report.max_fd_relative_residual, secs));
}

Outcome argmax_oracle() {
    std::mt19937_64 gen(31415);
    std::uniform_real_distribution<double> tdist(0.0, 40.0), ldist(std::log(1e3), std::log(3e6));
    const auto& coef = *figure1_coefficients();
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double t = tdist(gen), x = std::exp(ldist(gen));
        const ControlAction num = hjb::numeric_hamiltonian_argmax(coef, t, x);
        const ControlAction cf = optimal_control(coef, t, x);
        worst = std::max({worst, rel_err(num.c, cf.c), rel_err(num.p, cf.p)});
        for (Eigen::Index n = 0; n < cf.theta.size(); ++n) worst = std::max(worst, rel_err(num.theta[n], cf.theta[n]));
    }
    const double secs = seconds_since(start);
    Checks c;
    c.expect(worst < 1e-6, "relative gap");
    c.expect(secs < 30.0, "runtime");
    return c.outcome(fmt("worst relative gap %.2e over 100 points, %.2f s", worst, secs));
}

Outcome ode_quadrature_cross_check() {
    double worst = 0.0;
    for (bool insured : {true, false}) {
        const oracle::Figure1Integrals integrals(insured);
        const auto& coef = *figure1_coefficients(insured ? Variant::WithInsurance : Variant::NoInsurance);
        for (int k = 0; k < 20; ++k) {
            const double t = 2.0 * k + 0.5;
            worst = std::max({worst, rel_err(coef.e(t), integrals.e(t)), rel_err(coef.human_capital(t), integrals.b(t))});
        }
    }
    Checks c;
    c.expect(worst < 1e-8, "relative gap");
    return c.outcome(fmt("worst relative gap %.2e (e and b, 20 times, both variants)", worst));
}

Outcome monte_carlo_consistency() {
    const auto start = std::chrono::steady_clock::now();
    const UtilityEstimate& opt = optimum_run(EvaluationMode::FixedHorizonWeighted);
    Perturbation more;
    more.consumption = 1.2;
    const UtilityEstimate over = estimate_expected_utility(
        figure1(), ClosedFormStrategy(figure1_coefficients(), more), 0.0, 1e5, mc_config(EvaluationMode::FixedHorizonWeighted));
    const double secs = seconds_since(start);
    const double V = value_function(*figure1_coefficients(), 0.0, 1e5);
    const double z_opt = (opt.mean - V) / opt.std_error, z_over = (over.mean - V) / over.std_error;
    Checks c;
    c.expect(std::abs(z_opt) < 3.0, "optimum not within 3 SE of V");
    c.expect(z_over < -3.0, "c*1.2 not 3 SE below V");
    c.expect(opt.bankrupt_paths == 0 && over.bankrupt_paths == 0, "bankrupt paths");
    c.expect(secs < 120.0, "runtime");
    return c.outcome(fmt("z(optimum) = %.2f, z(c*1.2) = %.2f, %.1f s", z_opt, z_over, secs) + " for 2 x 1e5 paths, hardware threads: " +
                     std::to_string(std::max(1u, std::thread::hardware_concurrency())));
}

Outcome estimator_equivalence() {
    const UtilityEstimate& fixed = optimum_run(EvaluationMode::FixedHorizonWeighted);
    const UtilityEstimate& random = optimum_run(EvaluationMode::RandomHorizon);
    const double z = (fixed.mean - random.mean) / std::hypot(fixed.std_error, random.std_error);
    Checks c;
    c.expect(std::abs(z) < 3.0, "estimators differ");
    return c.outcome(fmt("difference %.2f combined SE (fixed SE %.2e, random SE %.2e)", z, fixed.std_error,
                         random.std_error));
}

Outcome figure1_shape() {
    const auto out = scratch("figure1");
    cli::RunManifest m;
    m.command = cli::Command::Figure1;
    m.out_dir = out;
    std::ostringstream log;
    const auto r = cli::run(m, log);
    Checks c;
    c.expect(r.exit_code == cli::kSuccess, "figure1 command failed: " + log.str());
    if (r.exit_code != cli::kSuccess) return c.outcome("");

    const auto table = io::read_csv(out / "surface.csv");
    const auto ct = table.column("t"), cy = table.column("full_wealth"), cp = table.column("p");
    std::map<double, std::vector<std::pair<double, double>>> rows;
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        rows[table.number(i, ct)].emplace_back(table.number(i, cy), table.number(i, cp));
    c.expect(rows.size() == 81 && rows.begin()->first == 0.0 && rows.rbegin()->first == 40.0, "time axis");

    int non_decreasing = 0;
    for (const auto& [t, row] : rows) {
        c.expect(row.size() == 301 && row.front().first == 0.0 && row.back().first == 3e6, "wealth axis");
        for (std::size_t j = 1; j < row.size(); ++j) non_decreasing += !(row[j].second < row[j - 1].second);
    }
    c.expect(non_decreasing == 0, "p not strictly decreasing in wealth");

    int unimodal = 0;
    const std::size_t low = 21;  // full wealth 0, 1e4, ..., 2e5
    for (std::size_t j = 0; j < low; ++j) {
        std::vector<double> series;
        for (const auto& [t, row] : rows) series.push_back(row[j].second);
        const auto peak = static_cast<std::size_t>(std::max_element(series.begin(), series.end()) - series.begin());
        bool ok = peak > 0 && peak + 1 < series.size();
        for (std::size_t k = 1; k < series.size(); ++k) ok = ok && (k <= peak ? series[k] > series[k - 1] : series[k] < series[k - 1]);
        unimodal += ok;
    }
    c.expect(unimodal == static_cast<int>(low), "not unimodal in t at low full wealth");

    std::size_t negative = 0;
    for (const auto& [t, row] : rows)
        if (t >= 35.0)
            for (const auto& [y, p] : row) negative += (y >= 1.5e6 && p < 0.0);
    c.expect(negative > 0, "no negative region near retirement");
    return c.outcome("strictly decreasing in wealth at 81 times; unimodal in t at full wealth 0..2e5; " +
                     std::to_string(negative) + " negative cells with t >= 35, x+b >= 1.5e6");
}

Outcome portfolio_comparison() {
    const auto& with = *figure1_coefficients();
    const auto& without = *figure1_coefficients(Variant::NoInsurance);
    const Eigen::VectorXd xa = with.xi_alpha(0.0);
    Checks c;
    c.expect(std::abs(xa[0] + 10.98) < 5e-3 && std::abs(xa[1] - 10.55) < 5e-3, "xi alpha");
    c.expect(rel_err(xa[0], oracle::xi_alpha_1) < 1e-12 && rel_err(xa[1], oracle::xi_alpha_2) < 1e-12, "xi alpha oracle");
    int points = 0, sign_errors = 0, direction_errors = 0;
    for (int i = 0; i < 51; ++i)
        for (int j = 0; j < 51; ++j) {
            const double t = 40.0 * i / 50, x = 1e3 + (3e6 - 1e3) * j / 50;
            if (t >= 40.0) continue;
            ++points;
            const Eigen::VectorXd d = optimal_portfolio(without, t, x) - optimal_portfolio(with, t, x);
            const Eigen::VectorXd xt = with.xi_alpha(t);
            for (int n = 0; n < 2; ++n) sign_errors += !((d[n] > 0.0 && xt[n] > 0.0) || (d[n] < 0.0 && xt[n] < 0.0));
            direction_errors += !(d[1] > 0.0 && d[0] < 0.0);
        }
    c.expect(sign_errors == 0, "sign mismatches");
    c.expect(direction_errors == 0, "no-insurance portfolio not larger in asset 2 and smaller in asset 1");
    return c.outcome(fmt("xi alpha = (%.4f, %.4f); signs agree at ", xa[0], xa[1]) + std::to_string(points) +
                     " grid points with t < T");
}

Outcome comparative_statics() {
    const auto& coef = *figure1_coefficients();
    Scenario impatient_s = figure1();
    impatient_s.prefs.rho = 0.05;
    const StrategyCoefficients impatient(impatient_s, Variant::WithInsurance);
    const Eigen::VectorXd merton = coef.xi_alpha(0.0) / (1.0 - coef.scenario().prefs.gamma);
    Checks c;

    c.expect(coef.premium_bound_hypotheses(), "bound hypotheses do not hold on the reference scenario");
    double maxD = 0.0;
    for (double t : coef.grid()) maxD = std::max(maxD, coef.D(t));
    c.expect(maxD < 1.0, "D >= 1");

    double worst_ratio = 0.0;
    int order_errors = 0;
    for (int i = 0; i < 51; ++i) {
        const double t = 40.0 * i / 50;
        double prev = optimal_premium(coef, t, 1e3);
        for (int j = 0; j < 51; ++j) {
            const double x = 1e3 + (3e6 - 1e3) * j / 50;
            const double p = optimal_premium(coef, t, x);
            if (j > 0) order_errors += !(p < prev);
            prev = p;
            if (t < 40.0) order_errors += !(optimal_premium(impatient, t, x) > p);
            const Eigen::VectorXd th = optimal_portfolio(coef, t, x);
            const Eigen::VectorXd xa = coef.xi_alpha(t);
            worst_ratio = std::max(worst_ratio, rel_err(th[0] / th[1], xa[0] / xa[1]));
        }
    }
    c.expect(order_errors == 0, "p* not decreasing in x or not increasing in rho");
    c.expect(worst_ratio < 1e-12, "mutual-fund ratio");

    double worst_limit = 0.0;
    for (double t : {0.0, 20.0, 39.0})
        worst_limit = std::max(worst_limit, (optimal_portfolio(coef, t, 1e18) - merton).norm() / merton.norm());
    for (double x : {1e3, 1e5, 3e6})
        worst_limit = std::max(worst_limit, (optimal_portfolio(coef, 40.0, x) - merton).norm() / merton.norm());
    c.expect(worst_limit < 1e-10, "theta limits");
    return c.outcome(fmt("max D = %.6f, mutual-fund ratio %.1e, theta limits %.1e", maxD, worst_ratio, worst_limit));
}

Outcome sigma_identity() {
    std::mt19937_64 gen(20240917);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 4;
        const int m = n + (trial / 4) % 3;
        const MarketModel market = oracle::random_market(gen, n, m);
        worst = std::max(worst, rel_err(market.sigma_quadratic(1.0), oracle::half_alpha_xi_alpha(market, 1.0)));
    }
    Checks c;
    c.expect(worst < 1e-12, "relative gap");
    return c.outcome(fmt("worst relative gap %.2e over 100 random markets", worst));
}

Outcome determinism() {
    struct Job {
        cli::Command command;
        std::vector<std::string> files;
    };
    const std::vector<Job> jobs = {
        {cli::Command::Solve, {"coefficients.csv", "strategy_grid.csv"}},
        {cli::Command::Simulate, {"simulation.csv", "paths.csv"}},
        {cli::Command::Compare, {"comparison.csv", "comparison_mc.csv"}},
        {cli::Command::Figure1, {"surface.csv"}},
    };
    Checks c;
    std::size_t compared = 0;
    for (const Job& job : jobs) {
        std::string text[2][2];
        for (int k = 0; k < 2; ++k) {
            const auto out = scratch(std::string(cli::to_string(job.command)) + std::to_string(k));
            cli::RunManifest m;
            m.command = job.command;
            if (job.command != cli::Command::Figure1) m.scenario = fs::path(LIFEINS_SCENARIO_DIR) / "fig1.json";
            m.out_dir = out;
            m.paths = 2000;
            m.dt = 0.05;
            m.seed = 7;
            m.dump_paths = 4;
            m.threads = k == 0 ? 1 : 4;
            std::ostringstream log;
            c.expect(cli::run(m, log).exit_code == cli::kSuccess, std::string(cli::to_string(job.command)) + " failed");
            for (std::size_t f = 0; f < job.files.size(); ++f) text[k][f] = slurp(out / job.files[f]);
        }
        for (std::size_t f = 0; f < job.files.size(); ++f) {
            c.expect(!text[0][f].empty() && text[0][f] == text[1][f], job.files[f] + " differs");
            ++compared;
        }
    }
    return c.outcome(std::to_string(compared) + " CSV files bit-identical across repeated runs (1 vs 4 threads)");
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"HJB certification", hjb_certification},
        {"argmax oracle", argmax_oracle},
        {"ODE/quadrature cross-check", ode_quadrature_cross_check},
        {"Monte Carlo consistency", monte_carlo_consistency},
        {"estimator equivalence", estimator_equivalence},
        {"figure-1 shape", figure1_shape},
        {"portfolio comparison", portfolio_comparison},
        {"comparative statics", comparative_statics},
        {"sigma identity", sigma_identity},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                    seconds_since(start));
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
