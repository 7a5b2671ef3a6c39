#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbm/contraction.hpp"

namespace pbm {

struct SolverConfig {
    std::vector<double> v0 = {0.0};
    double tol = kDefaultTol;
    std::size_t max_iters = 10000;
    std::size_t streak = 5;
};

struct VerificationConfig {
    GridSpec grid;
    std::vector<double> breakpoints;
    std::size_t random_samples = 32;
    std::optional<GridSpec> coincidence_grid;
    std::optional<GridSpec> uniqueness_grid;
};

struct ScenarioFile {
    Scenario scenario;
    SolverConfig solver;
    VerificationConfig verification;
};

/// Parses the sectioned scenario format:
///
///     [space]         carrier, distance, distance_vars, s, complete
///     [maps]          h, eta, Q, Z, inverse_Q, inverse_Z, closed_ranges
///                     (or preset = cyclic with C, D, h, eta)
///     [admissibility] gamma, delta
///     [toolkit]       xi, omega, H, H_vars (or preset = weak-contraction)
///     [solver]        v0, tol, max_iters, streak           (optional)
///     [verification]  grid, breakpoints, samples,
///                     coincidence_grid, uniqueness_grid    (optional)
///
/// Quoted values are expressions or lists; bare values are numbers, booleans
/// or preset names. Errors carry the offending line.
ScenarioFile load_scenario(std::string_view text, std::string default_name = "scenario");

/// Reads a file, or a bundled scenario when `name_or_path` names one.
/// Throws Error(io) when neither exists.
ScenarioFile load_scenario_source(const std::string& name_or_path);

/// Bundled scenario text by name ("example-2-6" and "example_2_6" both work).
std::optional<std::string_view> bundled_scenario(std::string_view name);
std::vector<std::string> bundled_scenario_names();

}  // namespace pbm
