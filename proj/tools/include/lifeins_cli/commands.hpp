#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lifeins/lifecycle/coefficients.hpp"
#include "lifeins/simulator.hpp"

namespace lifeins::cli {

enum class Command { Solve, Verify, Simulate, Compare, Figure1 };

/// Stable process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kInputError = 2,
    kNumericalError = 3,
};

/// Everything one invocation needs. Unset optionals fall back to the
/// scenario file or the library defaults.
struct RunManifest {
    Command command = Command::Solve;
    std::optional<std::filesystem::path> scenario;  ///< figure1 uses built-in parameters when absent
    std::filesystem::path out_dir = ".";
    std::vector<std::string> overrides;             ///< "dotted.key=value"

    std::optional<std::size_t> grid_steps;
    std::uint64_t seed = 1;
    std::size_t paths = 100000;
    double dt = 0.01;
    EvaluationMode mode = EvaluationMode::FixedHorizonWeighted;
    Variant variant = Variant::WithInsurance;
    std::size_t dump_paths = 0;  ///< simulate: per-path CSV for the first N paths
    unsigned threads = 0;

    // (t, x) grid for solve, verify and compare
    std::size_t t_points = 51;
    std::size_t x_points = 51;
    double x_min = 1e3;
    double x_max = 3e6;
};

struct RunResult {
    int exit_code = kSuccess;
    std::vector<std::filesystem::path> files;  ///< outputs written, in order
    std::string summary;                       ///< one-line outcome
};

Command parse_command(const std::string& name);
const char* to_string(Command c) noexcept;

/// Runs one command and maps failures to exit codes; never throws for
/// model, input or numerical errors. Progress lines go to log.
RunResult run(const RunManifest& manifest, std::ostream& log);

}  // namespace lifeins::cli
