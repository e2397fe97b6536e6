#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "steering/optimizer.hpp"
#include "steering/scenario.hpp"

namespace steering {

/// Raised on malformed configuration text; the message names the offending
/// field or parse position.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Scenario files are JSON: `state` is "singlet" or 16 [re, im] pairs
/// (row-major 4x4), `alice.settings` and each Bob's `settings` are
/// [theta, phi] pairs in radians, `lambda` the Bob's sharpness, and
/// optional `weights` one probability vector per Bob.
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);

/// Problem files carry the scenario template plus `objective`, `constraints`,
/// `free`, `budget` and `seed`.
struct ProblemConfig {
    OptimizationProblem problem;
    Budget budget;
    std::uint64_t seed = 1;
};

ProblemConfig parse_problem(const std::string& text);

std::string serialize_result(const OptimizationResult& result);
std::string serialize_sweep(const SweepResult& sweep);
std::string serialize_conjecture(const std::vector<ConjectureRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace steering
