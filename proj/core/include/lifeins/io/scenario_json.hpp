#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "lifeins/lifecycle/scenario.hpp"

namespace lifeins::io {

/// A validated scenario plus the JSON it was built from (after overrides).
struct ScenarioDocument {
    Scenario scenario;
    std::string resolved_json;  ///< pretty-printed, overrides applied
};

/// Parses a scenario in strict mode: unknown keys, wrong types and missing
/// required sections throw InputError naming the offending JSON path; syntax
/// errors report line and column.
///
/// Each override is "dotted.path=value", where value is JSON (a bare word
/// that is not valid JSON is taken as a string) and numeric path segments
/// index arrays, e.g. "preferences.rho=0.05" or "market.mu.1=0.12".
ScenarioDocument parse_scenario(std::string_view text, std::span<const std::string> overrides = {},
                                std::string_view source = "<scenario>");

/// Reads and parses a scenario file.
ScenarioDocument load_scenario(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// The reference-figure parameter set as scenario JSON.
std::string_view figure1_json() noexcept;

}  // namespace lifeins::io
