#include <memory>

#include <benchmark/benchmark.h>

#include "lifeins/hjb_verifier.hpp"
#include "lifeins/lifecycle/coefficients.hpp"
#include "lifeins/lifecycle/controls.hpp"
#include "lifeins/simulator.hpp"

using namespace lifeins;

namespace {

const Scenario& reference() {
    static const Scenario s = figure1_scenario();
    return s;
}

std::shared_ptr<const StrategyCoefficients> reference_coefficients() {
    static const auto c = std::make_shared<const StrategyCoefficients>(reference(), Variant::WithInsurance);
    return c;
}

void BM_Coefficients(benchmark::State& state) {
    Scenario s = reference();
    s.grid_steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(StrategyCoefficients(s, Variant::WithInsurance).e(0.0));
}
BENCHMARK(BM_Coefficients)->Arg(1000)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_OptimalControl(benchmark::State& state) {
    const auto coef = reference_coefficients();
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_control(*coef, t, 2e5));
        t = t < 39.0 ? t + 0.37 : 0.0;
    }
}
BENCHMARK(BM_OptimalControl);

void BM_NumericArgmax(benchmark::State& state) {
    const auto coef = reference_coefficients();
    for (auto _ : state) benchmark::DoNotOptimize(hjb::numeric_hamiltonian_argmax(*coef, 17.0, 2e5));
}
BENCHMARK(BM_NumericArgmax)->Unit(benchmark::kMicrosecond);

void BM_VerifyGrid(benchmark::State& state) {
    const auto coef = reference_coefficients();
    hjb::VerificationOptions opt;
    opt.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(hjb::verify(*coef, opt).passed);
}
BENCHMARK(BM_VerifyGrid)->Unit(benchmark::kMillisecond);

void BM_MonteCarloPaths(benchmark::State& state) {
    const ClosedFormStrategy strategy(reference_coefficients());
    SimulationConfig cfg;
    cfg.n_paths = static_cast<std::size_t>(state.range(0));
    cfg.dt = 0.01;
    cfg.seed = 3;
    cfg.threads = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_expected_utility(reference(), strategy, 0.0, 1e5, cfg).mean);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloPaths)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
