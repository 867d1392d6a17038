#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lifeins/lifecycle/controls.hpp"

namespace lifeins {

/// A strategy bound to one simulation grid. Implementations may tabulate
/// time-dependent inputs once per grid; allocate(k, ...) must agree with the
/// owning Strategy's allocate(times[k], ...).
class GridPolicy {
public:
    virtual ~GridPolicy() = default;
    virtual void allocate(std::size_t step, double t, double x, Allocation& out) const = 0;
    virtual double wealth_floor(std::size_t step, double t) const = 0;
};

/// Feedback policy (t, x) -> (c, p, dollar holdings). Must be safe to call
/// concurrently.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::string name() const = 0;
    virtual void allocate(double t, double x, Allocation& out) const = 0;
    /// Paths whose wealth falls to or below this level end in bankruptcy.
    virtual double wealth_floor(double t) const;
    /// Default: forwards to allocate(t, x) and wealth_floor(t).
    virtual std::unique_ptr<GridPolicy> on_grid(std::span<const double> times) const;
};

/// Multiplicative distortion of a closed-form strategy.
struct Perturbation {
    double consumption = 1.0;
    double premium = 1.0;
    Eigen::VectorXd risky;  ///< per-asset factors; empty means all ones
};

/// Closed-form optimal controls of one variant, optionally perturbed.
/// Bankruptcy is declared at the natural borrowing limit X <= -b(t), where
/// full wealth is exhausted.
class ClosedFormStrategy final : public Strategy {
public:
    explicit ClosedFormStrategy(std::shared_ptr<const StrategyCoefficients> coef, Perturbation perturbation = {},
                                std::string name = {});

    std::string name() const override { return name_; }
    void allocate(double t, double x, Allocation& out) const override;
    double wealth_floor(double t) const override;
    std::unique_ptr<GridPolicy> on_grid(std::span<const double> times) const override;

    const StrategyCoefficients& coefficients() const noexcept { return *coef_; }

private:
    std::shared_ptr<const StrategyCoefficients> coef_;
    Perturbation perturbation_;
    Eigen::VectorXd risky_factor_;
    std::string name_;
};

/// Strategy from arbitrary callables; the floor defaults to 0.
class FunctionStrategy final : public Strategy {
public:
    using AllocationFn = std::function<void(double t, double x, Allocation& out)>;
    using FloorFn = std::function<double(double t)>;

    FunctionStrategy(std::string name, AllocationFn allocate, FloorFn floor = {});

    std::string name() const override { return name_; }
    void allocate(double t, double x, Allocation& out) const override { fn_(t, x, out); }
    double wealth_floor(double t) const override { return floor_ ? floor_(t) : 0.0; }

private:
    std::string name_;
    AllocationFn fn_;
    FloorFn floor_;
};

/// Wraps a policy expressed in wealth fractions; dollar holdings are theta * x.
FunctionStrategy fraction_strategy(std::string name, std::function<ControlAction(double t, double x)> policy);

enum class EvaluationMode {
    RandomHorizon,         ///< sample the death time and stop there
    FixedHorizonWeighted,  ///< run to T and weight flows by survival and death density
};

enum class Objective {
    WithBequest,  ///< utility of consumption, bequest on death, terminal wealth at T
    NoBequest,    ///< the no-insurance problem: nothing is received on death
};

enum class Termination { Death, Retirement, Bankruptcy };

const char* to_string(EvaluationMode m) noexcept;
const char* to_string(Termination t) noexcept;

struct SimulationConfig {
    std::size_t n_paths = 100000;
    double dt = 0.01;                   ///< yr; rounded down so the horizon splits evenly
    std::uint64_t seed = 0;
    bool antithetic = true;             ///< paths 2k and 2k+1 use opposite Brownian increments
    EvaluationMode evaluation_mode = EvaluationMode::FixedHorizonWeighted;
    Objective objective = Objective::WithBequest;
    /// Each step's increment is the sum of this many finer increments, so
    /// runs with dt and dt / n share one Brownian path when refinements match.
    std::size_t brownian_refinement = 1;
    unsigned threads = 0;               ///< 0 = hardware concurrency

    /// Throws InputError on dt <= 0, n_paths == 0 or refinement == 0.
    void validate() const;
};

/// One simulated trajectory with the controls applied at each knot.
struct WealthPath {
    std::vector<double> times;
    std::vector<double> wealth;       ///< wealth[0] = x0; last entry is the wealth at termination
    std::vector<double> consumption;  ///< one per step taken
    std::vector<double> premium;
    std::vector<Eigen::VectorXd> risky;
    std::optional<double> death_time;
    /// RandomHorizon: int U ds + B(Z(tau), tau) or W(X(T)).
    /// FixedHorizonWeighted: the survival-weighted integrand of the same expectation.
    double realized_utility = 0.0;
    Termination terminated_by = Termination::Retirement;
};

struct UtilityEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_units = 0;            ///< independent samples behind std_error (pairs when antithetic)
    std::size_t bankrupt_paths = 0;     ///< excluded from mean and std_error
    double bankruptcy_fraction = 0.0;
    double mean_terminal_wealth = 0.0;  ///< E[X(T ^ tau)]
    double mean_insurance_spend = 0.0;  ///< E[int_{t0}^{T ^ tau} p ds]
};

/// Simulates one path from (0, scenario.x0), or from (t0, x0).
WealthPath simulate_path(const Scenario& scenario, const Strategy& strategy, const SimulationConfig& config,
                         std::size_t path_index);
WealthPath simulate_path(const Scenario& scenario, const Strategy& strategy, const SimulationConfig& config,
                         std::size_t path_index, double t0, double x0);

/// Monte Carlo estimate of J(t0, x0; strategy).
UtilityEstimate estimate_expected_utility(const Scenario& scenario, const Strategy& strategy, double t0, double x0,
                                          const SimulationConfig& config);

struct ComparisonRow {
    std::string name;
    UtilityEstimate estimate;
    /// Common-random-numbers difference from the first row, J - J_first,
    /// and its standard error over paired units (0 for the first row).
    double difference_from_first = 0.0;
    double difference_std_error = 0.0;
};

/// Evaluates every strategy on the same random numbers.
std::vector<ComparisonRow> compare_strategies(const Scenario& scenario,
                                              std::span<const Strategy* const> strategies, double t0, double x0,
                                              const SimulationConfig& config);

}  // namespace lifeins
