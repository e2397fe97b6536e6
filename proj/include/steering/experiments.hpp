#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "steering/inequalities.hpp"
#include "steering/optimizer.hpp"
#include "steering/scenario.hpp"

namespace steering {

/// Per-Bob tables and steering evaluations for one scenario. CFFW applies
/// only to two-setting scenarios; the CJWR functional applies to any n.
struct RunReport {
    std::vector<CorrelationTable> tables;
    std::vector<SteeringEvaluation> cffw_values;  // empty unless n == 2
    std::vector<SteeringEvaluation> cjwr_values;
};

RunReport run_scenario(const Scenario& scenario);

/// Canonical axes used by the bundled experiments: Alice along (x, z) with
/// both Bobs at 45 and 135 degrees in the x-z plane for two settings, and
/// everyone on the coordinate triad for three settings.
Scenario two_setting_scenario(const std::vector<double>& lambdas);
Scenario three_setting_scenario(const std::vector<double>& lambdas);

Scenario bundled_scenario(const std::string& name);
std::vector<std::string> bundled_scenario_names();

struct ExperimentOutcome {
    std::string name;
    bool pass = false;
    std::vector<std::string> details;
};

struct Experiment {
    std::string name;
    std::string description;
    Budget default_budget;
    std::uint64_t default_seed = 1;

    ExperimentOutcome run(const std::optional<Budget>& budget_override,
                          std::optional<std::uint64_t> seed_override) const;

    // implementation hook
    std::function<ExperimentOutcome(const Budget&, std::uint64_t)> body;
};

/// Every pinned reference value with its tolerance; reproduce-all runs them
/// all and fails if any is missed.
const std::vector<Experiment>& bundled_experiments();
const Experiment& bundled_experiment(const std::string& name);

}  // namespace steering
