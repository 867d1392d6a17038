#include "lifeins/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "lifeins/errors.hpp"
#include "lifeins/numerics/random.hpp"
#include "lifeins/numerics/summation.hpp"
#include "lifeins/parallel.hpp"

namespace lifeins {

namespace {

constexpr std::uint32_t kBrownianStream = 0;
constexpr std::uint32_t kDeathStream = 1;

class ForwardingPolicy final : public GridPolicy {
public:
    explicit ForwardingPolicy(const Strategy& s) : strategy_(s) {}
    void allocate(std::size_t, double t, double x, Allocation& out) const override { strategy_.allocate(t, x, out); }
    double wealth_floor(std::size_t, double t) const override { return strategy_.wealth_floor(t); }

private:
    const Strategy& strategy_;
};

class ClosedFormTable final : public GridPolicy {
public:
    ClosedFormTable(const StrategyCoefficients& coef, const Perturbation& pert, const Eigen::VectorXd& risky_factor,
                    std::span<const double> times)
        : assets_(static_cast<std::size_t>(risky_factor.size())) {
        const double g = coef.scenario().prefs.gamma;
        const bool insured = coef.variant() == Variant::WithInsurance;
        const std::size_t n = times.size();
        b_.resize(n);
        inv_e_.resize(n);
        eta_.resize(n);
        eta_d_.resize(n);
        weight_.resize(n * assets_);
        for (std::size_t k = 0; k < n; ++k) {
            const CoefficientsAt c = coef.at(times[k]);
            b_[k] = c.b;
            inv_e_[k] = pert.consumption / c.e;
            eta_[k] = insured ? pert.premium * c.eta : 0.0;
            eta_d_[k] = insured ? pert.premium * c.eta * c.D : 0.0;
            for (std::size_t i = 0; i < assets_; ++i)
                weight_[k * assets_ + i] = c.xi_alpha[static_cast<Eigen::Index>(i)] / (1.0 - g) *
                                           risky_factor[static_cast<Eigen::Index>(i)];
        }
    }

    void allocate(std::size_t k, double, double x, Allocation& out) const override {
        const double y = x + b_[k];
        out.c = y * inv_e_[k];
        out.p = eta_d_[k] * y - eta_[k] * x;
        out.risky.resize(static_cast<Eigen::Index>(assets_));
        const double* w = &weight_[k * assets_];
        for (std::size_t i = 0; i < assets_; ++i) out.risky[static_cast<Eigen::Index>(i)] = y * w[i];
    }

    double wealth_floor(std::size_t k, double) const override { return -b_[k]; }

private:
    std::size_t assets_;
    std::vector<double> b_, inv_e_, eta_, eta_d_, weight_;
};

std::string describe(const StrategyCoefficients& coef, const Perturbation& p) {
    std::ostringstream os;
    os << "closed_form_" << to_string(coef.variant());
    std::vector<std::string> parts;
    auto tag = [&](const std::string& what, double f) {
        if (f == 1.0) return;
        std::ostringstream t;
        t << what << "*" << f;
        parts.push_back(t.str());
    };
    tag("c", p.consumption);
    tag("p", p.premium);
    for (Eigen::Index i = 0; i < p.risky.size(); ++i) tag("u" + std::to_string(i + 1), p.risky[i]);
    if (!parts.empty()) {
        os << "[";
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
        os << "]";
    }
    return os.str();
}

/// CRRA flow utility discount * arg^gamma / gamma; -inf for a non-positive
/// argument when gamma < 0. Small integer exponents use repeated
/// multiplication, which is several times cheaper than pow.
class Crra {
public:
    explicit Crra(double gamma) : gamma_(gamma) {
        if (gamma == std::round(gamma) && std::abs(gamma) <= 8.0) integer_ = static_cast<int>(gamma);
    }

    double operator()(double discount, double arg) const {
        if (arg > 0.0) return discount * power(arg) / gamma_;
        if (gamma_ < 0.0) return -std::numeric_limits<double>::infinity();
        if (arg == 0.0) return 0.0;
        throw DomainError("utility of a negative amount");
    }

private:
    double power(double v) const {
        if (integer_ == 0) return std::pow(v, gamma_);
        double acc = v;
        for (int k = std::abs(integer_); k > 1; --k) acc *= v;
        return integer_ < 0 ? 1.0 / acc : acc;
    }

    double gamma_;
    int integer_ = 0;
};

/// Time grid and per-step model inputs (left endpoints).
struct SimGrid {
    std::vector<double> times;
    double h = 0.0;
    std::size_t refinement = 1;
    double fine_sqrt_dt = 0.0;
    std::size_t assets = 0, drivers = 0;
    std::vector<double> rate, income, discount, survival, density, eta;
    std::vector<double> alpha;  // [step][asset]
    std::vector<double> sigma;  // [step][asset][driver]
    double terminal_survival = 1.0;
    double terminal_discount = 1.0;

    std::size_t steps() const noexcept { return times.size() - 1; }
};

SimGrid build_grid(const Scenario& s, const SimulationConfig& cfg, double t0) {
    const double T = s.prefs.T;
    if (!(t0 >= 0.0 && t0 < T)) throw DomainError("start time must lie in [0, T)");
    SimGrid g;
    const double span = T - t0;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / cfg.dt - 1e-9)));
    g.h = span / static_cast<double>(n);
    g.refinement = cfg.brownian_refinement;
    g.fine_sqrt_dt = std::sqrt(g.h / static_cast<double>(g.refinement));
    g.times.resize(n + 1);
    for (std::size_t k = 0; k < n; ++k) g.times[k] = t0 + g.h * static_cast<double>(k);
    g.times[n] = T;

    g.assets = static_cast<std::size_t>(s.market.assets());
    g.drivers = static_cast<std::size_t>(s.market.drivers());
    g.rate.resize(n);
    g.income.resize(n);
    g.discount.resize(n);
    g.survival.resize(n);
    g.density.resize(n);
    g.eta.resize(n);
    g.alpha.resize(n * g.assets);
    g.sigma.resize(n * g.assets * g.drivers);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = g.times[k];
        g.rate[k] = s.market.rate(t);
        g.income[k] = s.income.rate(t);
        g.discount[k] = std::exp(-s.prefs.rho * t);
        g.survival[k] = s.mortality.conditional_survival(t, t0);
        g.density[k] = s.mortality.conditional_density(t, t0);
        g.eta[k] = s.insurance.ratio(t);
        const Eigen::VectorXd a = s.market.risk_premium(t);
        const Eigen::MatrixXd v = s.market.volatility(t);
        for (std::size_t i = 0; i < g.assets; ++i) {
            g.alpha[k * g.assets + i] = a[static_cast<Eigen::Index>(i)];
            for (std::size_t m = 0; m < g.drivers; ++m)
                g.sigma[(k * g.assets + i) * g.drivers + m] =
                    v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
        }
    }
    g.terminal_survival = s.mortality.conditional_survival(T, t0);
    g.terminal_discount = std::exp(-s.prefs.rho * T);
    return g;
}

struct UnitResult {
    double utility = 0.0;
    double terminal_wealth = 0.0;
    double spend = 0.0;
    std::size_t completed = 0;
    std::size_t bankrupt = 0;
};

class Engine {
public:
    Engine(const Scenario& s, const SimGrid& g, const GridPolicy& policy, const SimulationConfig& cfg, double x0)
        : scenario_(s), grid_(g), policy_(policy), cfg_(cfg), rng_(cfg.seed), x0_(x0),
          crra_(s.prefs.gamma), rho_(s.prefs.rho),
          fixed_(cfg.evaluation_mode == EvaluationMode::FixedHorizonWeighted),
          bequest_(cfg.objective == Objective::WithBequest) {}

    std::size_t width() const noexcept { return cfg_.antithetic ? 2 : 1; }

    /// Runs members [first, last) of one unit. Member 1 of an antithetic pair
    /// sees the negated Brownian increments and the complementary death uniform.
    UnitResult run(std::size_t unit, std::size_t first, std::size_t last, WealthPath* record) const {
        const std::size_t members = last - first;
        const std::size_t n = grid_.steps();
        const std::size_t N = grid_.assets, M = grid_.drivers;
        const auto unit32 = static_cast<std::uint32_t>(unit);

        double x[2], util[2], spend[2], wealth_end[2], tau[2], sign[2];
        bool alive[2], bankrupt[2];
        double u_death = 0.5;
        if (!fixed_) u_death = numerics::uniform_pair(rng_({0u, 0u, unit32, kDeathStream})).first;
        for (std::size_t j = 0; j < members; ++j) {
            const std::size_t member = first + j;
            x[j] = x0_;
            util[j] = spend[j] = wealth_end[j] = 0.0;
            sign[j] = member == 1 ? -1.0 : 1.0;
            alive[j] = true;
            bankrupt[j] = false;
            tau[j] = std::numeric_limits<double>::infinity();
            if (!fixed_)
                tau[j] = scenario_.mortality.death_time_from_uniform(grid_.times[0],
                                                                     member == 1 ? 1.0 - u_death : u_death);
        }
        if (record) {
            *record = WealthPath{};
            record->times.push_back(grid_.times[0]);
            record->wealth.push_back(x0_);
        }

        Allocation alloc;
        std::vector<double> dW(M), shock(N);
        std::size_t alive_count = members;
        for (std::size_t k = 0; k < n && alive_count > 0; ++k) {
            draw_increments(unit32, k, dW);
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (std::size_t m = 0; m < M; ++m) acc += grid_.sigma[(k * N + i) * M + m] * dW[m];
                shock[i] = acc;
            }
            const double t = grid_.times[k], t_next = grid_.times[k + 1];
            for (std::size_t j = 0; j < members; ++j) {
                if (!alive[j]) continue;
                policy_.allocate(k, t, x[j], alloc);
                check_action(alloc, N);
                const double U = crra_(grid_.discount[k], alloc.c);
                if (record) {
                    record->consumption.push_back(alloc.c);
                    record->premium.push_back(alloc.p);
                    record->risky.push_back(alloc.risky);
                }

                if (!fixed_ && tau[j] < t_next) {
                    const double lived = tau[j] - t;
                    util[j] += U * lived;
                    spend[j] += alloc.p * lived;
                    if (bequest_)
                        util[j] += crra_(std::exp(-rho_ * tau[j]),
                                        legacy_value(x[j], alloc.p, grid_.eta[k]));
                    wealth_end[j] = x[j];
                    alive[j] = false;
                    --alive_count;
                    if (record) {
                        record->times.push_back(tau[j]);
                        record->wealth.push_back(x[j]);
                        record->death_time = tau[j];
                        record->terminated_by = Termination::Death;
                    }
                    continue;
                }

                const double weight = fixed_ ? grid_.survival[k] : 1.0;
                util[j] += weight * U * grid_.h;
                spend[j] += weight * alloc.p * grid_.h;
                if (fixed_) {
                    const double death_mass = grid_.density[k] * grid_.h;
                    if (bequest_)
                        util[j] += death_mass *
                                   crra_(grid_.discount[k], legacy_value(x[j], alloc.p, grid_.eta[k]));
                    wealth_end[j] += death_mass * x[j];
                }

                double drift = grid_.income[k] - alloc.c - alloc.p + grid_.rate[k] * x[j];
                double diffusion = 0.0;
                const double* a = &grid_.alpha[k * N];
                for (std::size_t i = 0; i < N; ++i) {
                    const double u = alloc.risky[static_cast<Eigen::Index>(i)];
                    drift += u * a[i];
                    diffusion += u * shock[i];
                }
                const double next = x[j] + drift * grid_.h + sign[j] * diffusion;
                x[j] = next;
                if (record) {
                    record->times.push_back(t_next);
                    record->wealth.push_back(next);
                }
                if (!(next > policy_.wealth_floor(k + 1, t_next))) {
                    alive[j] = false;
                    bankrupt[j] = true;
                    --alive_count;
                    if (record) record->terminated_by = Termination::Bankruptcy;
                }
            }
        }

        UnitResult out;
        for (std::size_t j = 0; j < members; ++j) {
            if (alive[j]) {
                const double weight = fixed_ ? grid_.terminal_survival : 1.0;
                util[j] += weight * crra_(grid_.terminal_discount, x[j]);
                wealth_end[j] += weight * x[j];
                if (record) record->terminated_by = Termination::Retirement;
            }
            if (bankrupt[j]) {
                ++out.bankrupt;
                continue;
            }
            ++out.completed;
            out.utility += util[j];
            out.terminal_wealth += wealth_end[j];
            out.spend += spend[j];
        }
        if (record) record->realized_utility = util[0];
        return out;
    }

private:
    void draw_increments(std::uint32_t unit, std::size_t step, std::vector<double>& dW) const {
        const std::size_t M = dW.size();
        std::fill(dW.begin(), dW.end(), 0.0);
        for (std::size_t r = 0; r < grid_.refinement; ++r) {
            const auto fine = static_cast<std::uint32_t>(step * grid_.refinement + r);
            for (std::size_t m = 0; m < M; m += 2) {
                const auto block = static_cast<std::uint32_t>(m / 2);
                const auto [z0, z1] = numerics::normal_pair(rng_({fine, block, unit, kBrownianStream}));
                dW[m] += z0;
                if (m + 1 < M) dW[m + 1] += z1;
            }
        }
        for (double& v : dW) v *= grid_.fine_sqrt_dt;
    }

    static void check_action(const Allocation& a, std::size_t assets) {
        bool finite = std::isfinite(a.c) && std::isfinite(a.p) && a.risky.size() == static_cast<Eigen::Index>(assets);
        for (Eigen::Index i = 0; finite && i < a.risky.size(); ++i) finite = std::isfinite(a.risky[i]);
        if (!finite) throw PathError("strategy returned a non-finite or mis-sized action");
        if (a.c < 0.0) throw DomainError("strategy returned negative consumption");
    }

    const Scenario& scenario_;
    const SimGrid& grid_;
    const GridPolicy& policy_;
    const SimulationConfig& cfg_;
    numerics::Philox4x32 rng_;
    double x0_;
    Crra crra_;
    double rho_;
    bool fixed_, bequest_;
};

void check_start(const GridPolicy& policy, const SimGrid& g, double x0) {
    if (!std::isfinite(x0)) throw DomainError("initial wealth must be finite");
    if (!(x0 > policy.wealth_floor(0, g.times[0])))
        throw DomainError("initial wealth is at or below the strategy's bankruptcy floor");
}

}  // namespace

double Strategy::wealth_floor(double) const { return 0.0; }

std::unique_ptr<GridPolicy> Strategy::on_grid(std::span<const double>) const {
    return std::make_unique<ForwardingPolicy>(*this);
}

ClosedFormStrategy::ClosedFormStrategy(std::shared_ptr<const StrategyCoefficients> coef, Perturbation perturbation,
                                       std::string name)
    : coef_(std::move(coef)), perturbation_(std::move(perturbation)) {
    if (!coef_) throw InputError("ClosedFormStrategy needs coefficients");
    const auto N = static_cast<Eigen::Index>(coef_->scenario().market.assets());
    if (perturbation_.risky.size() == 0) {
        risky_factor_ = Eigen::VectorXd::Ones(N);
    } else if (perturbation_.risky.size() != N) {
        throw InputError("risky perturbation must have one factor per asset");
    } else {
        risky_factor_ = perturbation_.risky;
    }
    name_ = name.empty() ? describe(*coef_, perturbation_) : std::move(name);
}

void ClosedFormStrategy::allocate(double t, double x, Allocation& out) const {
    out = optimal_allocation(*coef_, t, x);
    out.c *= perturbation_.consumption;
    out.p *= perturbation_.premium;
    out.risky = out.risky.cwiseProduct(risky_factor_);
}

double ClosedFormStrategy::wealth_floor(double t) const { return -coef_->human_capital(t); }

std::unique_ptr<GridPolicy> ClosedFormStrategy::on_grid(std::span<const double> times) const {
    return std::make_unique<ClosedFormTable>(*coef_, perturbation_, risky_factor_, times);
}

FunctionStrategy::FunctionStrategy(std::string name, AllocationFn allocate, FloorFn floor)
    : name_(std::move(name)), fn_(std::move(allocate)), floor_(std::move(floor)) {
    if (!fn_) throw InputError("FunctionStrategy needs a policy");
}

FunctionStrategy fraction_strategy(std::string name, std::function<ControlAction(double, double)> policy) {
    if (!policy) throw InputError("fraction_strategy needs a policy");
    return FunctionStrategy(std::move(name), [policy = std::move(policy)](double t, double x, Allocation& out) {
        const ControlAction a = policy(t, x);
        out.c = a.c;
        out.p = a.p;
        out.risky = a.theta * x;
    });
}

const char* to_string(EvaluationMode m) noexcept {
    return m == EvaluationMode::RandomHorizon ? "random_horizon" : "fixed_horizon_weighted";
}

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::Death: return "death";
        case Termination::Retirement: return "retirement";
        case Termination::Bankruptcy: return "bankruptcy";
    }
    return "unknown";
}

void SimulationConfig::validate() const {
    if (n_paths == 0) throw InputError("n_paths must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be > 0");
    if (brownian_refinement == 0) throw InputError("brownian_refinement must be >= 1");
    if (n_paths / (antithetic ? 2 : 1) >= (std::size_t{1} << 32)) throw InputError("too many paths");
}

WealthPath simulate_path(const Scenario& scenario, const Strategy& strategy, const SimulationConfig& config,
                         std::size_t path_index) {
    return simulate_path(scenario, strategy, config, path_index, 0.0, scenario.x0);
}

WealthPath simulate_path(const Scenario& scenario, const Strategy& strategy, const SimulationConfig& config,
                         std::size_t path_index, double t0, double x0) {
    config.validate();
    const SimGrid grid = build_grid(scenario, config, t0);
    const auto policy = strategy.on_grid(grid.times);
    check_start(*policy, grid, x0);
    const Engine engine(scenario, grid, *policy, config, x0);
    const std::size_t w = engine.width();
    WealthPath path;
    engine.run(path_index / w, path_index % w, path_index % w + 1, &path);
    return path;
}

namespace {

std::vector<UnitResult> run_units(const Scenario& scenario, const Strategy& strategy, double t0, double x0,
                                  const SimulationConfig& config) {
    config.validate();
    const SimGrid grid = build_grid(scenario, config, t0);
    const auto policy = strategy.on_grid(grid.times);
    check_start(*policy, grid, x0);
    const Engine engine(scenario, grid, *policy, config, x0);
    const std::size_t w = engine.width();
    const std::size_t units = (config.n_paths + w - 1) / w;

    std::vector<UnitResult> results(units);
    parallel_for(units, config.threads, [&](std::size_t u) {
        results[u] = engine.run(u, 0, std::min(w, config.n_paths - u * w), nullptr);
    });
    return results;
}

double unit_mean(const UnitResult& r) { return r.utility / static_cast<double>(r.completed); }

UtilityEstimate summarize(const std::vector<UnitResult>& results, std::size_t n_paths) {
    numerics::CompensatedSum utility, wealth, spend;
    std::size_t used = 0, bankrupt = 0;
    for (const auto& r : results) {
        bankrupt += r.bankrupt;
        if (r.completed == 0) continue;
        const double inv = 1.0 / static_cast<double>(r.completed);
        utility.add(r.utility * inv);
        wealth.add(r.terminal_wealth * inv);
        spend.add(r.spend * inv);
        ++used;
    }
    UtilityEstimate est;
    est.n_paths = n_paths;
    est.n_units = used;
    est.bankrupt_paths = bankrupt;
    est.bankruptcy_fraction = static_cast<double>(bankrupt) / static_cast<double>(n_paths);
    if (used == 0) {
        est.mean = est.mean_terminal_wealth = est.mean_insurance_spend = std::numeric_limits<double>::quiet_NaN();
        est.std_error = std::numeric_limits<double>::infinity();
        return est;
    }
    const double m = static_cast<double>(used);
    est.mean = utility.value() / m;
    est.mean_terminal_wealth = wealth.value() / m;
    est.mean_insurance_spend = spend.value() / m;
    if (used < 2) {
        est.std_error = std::numeric_limits<double>::infinity();
        return est;
    }
    numerics::CompensatedSum sq;
    for (const auto& r : results) {
        if (r.completed == 0) continue;
        const double d = unit_mean(r) - est.mean;
        sq.add(d * d);
    }
    est.std_error = std::sqrt(sq.value() / (m - 1.0) / m);
    return est;
}

// Mean and standard error of the unit-wise difference a - b over units
// where both strategies kept at least one path.
std::pair<double, double> paired_difference(const std::vector<UnitResult>& a, const std::vector<UnitResult>& b) {
    numerics::CompensatedSum sum;
    std::size_t n = 0;
    for (std::size_t u = 0; u < a.size(); ++u) {
        if (a[u].completed == 0 || b[u].completed == 0) continue;
        sum.add(unit_mean(a[u]) - unit_mean(b[u]));
        ++n;
    }
    if (n == 0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
    const double m = static_cast<double>(n);
    const double mean = sum.value() / m;
    if (n < 2) return {mean, std::numeric_limits<double>::infinity()};
    numerics::CompensatedSum sq;
    for (std::size_t u = 0; u < a.size(); ++u) {
        if (a[u].completed == 0 || b[u].completed == 0) continue;
        const double d = unit_mean(a[u]) - unit_mean(b[u]) - mean;
        sq.add(d * d);
    }
    return {mean, std::sqrt(sq.value() / (m - 1.0) / m)};
}

}  // namespace

UtilityEstimate estimate_expected_utility(const Scenario& scenario, const Strategy& strategy, double t0, double x0,
                                          const SimulationConfig& config) {
    return summarize(run_units(scenario, strategy, t0, x0, config), config.n_paths);
}

std::vector<ComparisonRow> compare_strategies(const Scenario& scenario,
                                              std::span<const Strategy* const> strategies, double t0, double x0,
                                              const SimulationConfig& config) {
    std::vector<ComparisonRow> rows;
    rows.reserve(strategies.size());
    std::vector<UnitResult> first;
    for (const Strategy* s : strategies) {
        if (!s) throw InputError("null strategy in comparison");
        auto units = run_units(scenario, *s, t0, x0, config);
        ComparisonRow row{s->name(), summarize(units, config.n_paths)};
        if (rows.empty()) {
            first = std::move(units);
        } else {
            std::tie(row.difference_from_first, row.difference_std_error) = paired_difference(units, first);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace lifeins
