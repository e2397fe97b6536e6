#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steering/inequalities.hpp"
#include "steering/scenario.hpp"

namespace steering {

struct Budget {
    int restarts = 64;
    int iterations = 2000;  // simplex iterations per penalty round
};

struct Objective {
    InequalityKind kind = InequalityKind::Cffw;
    int bob_index = 1;
};

/// Either an equality target on a Bob's steering value or a requirement that
/// his value exceed the classical bound. Constraints may only reference Bobs
/// earlier in the chain than the objective Bob.
struct Constraint {
    int bob_index = 1;
    InequalityKind kind = InequalityKind::Cffw;
    bool require_violation = false;
    double target = 0.0;
};

struct BobFreedom {
    bool angles = true;
    bool lambda = true;
    /// Parameterize this Bob's directions as an orthonormal frame (three
    /// frame angles, settings <= 3) instead of independent axes. This is the
    /// structure of every reported optimum: without it, near-degenerate
    /// setting pairs can hoard correlation along one axis and push a chain's
    /// later values past the symmetric-strategy maxima.
    bool orthonormal = false;
};

/// Search space: the template scenario supplies every fixed value; free flags
/// select which angles and sharpness parameters vary. When Alice is free and
/// has at most three settings she is parameterized as an orthonormal frame
/// (three frame angles), so her orthogonality invariant holds at every
/// iterate. For the singlet her frame may equally be fixed to the template
/// (global rotations change nothing); the bundled problems do exactly that.
struct OptimizationProblem {
    Scenario scenario;
    Objective objective;
    std::vector<Constraint> constraints;
    bool alice_free = false;
    std::vector<BobFreedom> free_bobs;
};

struct OptimizationResult {
    double best_value = 0.0;
    std::optional<Scenario> argmax;
    std::vector<double> constraint_residuals;
    int restarts_used = 0;
    long evaluations = 0;
    bool converged = false;
    bool feasible = false;
    std::string message;
};

/// Multi-start simplex search with an exterior quadratic penalty, weights
/// 1e2..1e6 over five rounds. Deterministic for a fixed seed. Residuals above
/// 1e-4 mark the run infeasible rather than failing silently.
OptimizationResult maximize(const OptimizationProblem& problem, const Budget& budget,
                            std::uint64_t seed);

struct SweepRow {
    double lambda = 0.0;
    std::vector<std::pair<int, double>> values;  // (bob index, steering value)
    bool all_violate = false;
};

struct SweepResult {
    int which = 1;
    double bound = 2.0;
    std::vector<SweepRow> rows;
    bool window_found = false;
    bool window_contiguous = false;
    double window_low = 0.0;
    double window_high = 0.0;
};

/// Holds the swept Bob's sharpness at each grid value, re-maximizes each
/// downstream Bob's value over the problem's free parameters, and reports the
/// sub-grid on which the swept Bob and every downstream Bob all violate.
SweepResult sweep_lambda(const OptimizationProblem& problem, int which,
                         const std::vector<double>& grid, const Budget& budget,
                         std::uint64_t seed);

enum class DirectionFamily { Free, Platonic };

struct ConjectureRow {
    int bob_index = 1;
    OptimizationResult result;
};

/// For each prefix length m <= chain_length, maximizes Bob m's CJWR-n value
/// with Bobs 1..m-1 pinned to the classical bound and Bob m sharp. The
/// platonic family fixes all directions to the n antipodal vertex axes of the
/// matching regular solid and frees only the sharpness parameters.
std::vector<ConjectureRow> conjecture_probe(int n_settings, int chain_length,
                                            DirectionFamily family, const Budget& budget,
                                            std::uint64_t seed);

/// Antipodal vertex-pair axes: n = 4 (cube), 6 (icosahedron), 10 (dodecahedron).
std::vector<Eigen::Vector3d> platonic_axes(int n);

}  // namespace steering
