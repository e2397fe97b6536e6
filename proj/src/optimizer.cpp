#include "steering/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

#include "steering/correlation.hpp"

namespace steering {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLambdaMin = 0.01;
constexpr double kFeasibilityTol = 1e-4;
constexpr double kDiameterTol = 1e-8;
constexpr double kViolationSlack = 1e-12;
constexpr int kPenaltyRounds = 5;
constexpr int kMaxSettings = 16;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Library-independent uniform draw so fixed seeds reproduce across toolchains.
double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

Eigen::Vector3d vec_from_angles(double theta, double phi) {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

Eigen::Matrix3d euler_zyz(double a, double b, double c) {
    Eigen::Matrix3d rz_a, ry_b, rz_c;
    rz_a << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    ry_b << std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b);
    rz_c << std::cos(c), -std::sin(c), 0, std::sin(c), std::cos(c), 0, 0, 0, 1;
    return rz_a * ry_b * rz_c;
}

Eigen::Vector3d frame_to_euler(const Eigen::Matrix3d& R) {
    const double b = std::acos(std::clamp(R(2, 2), -1.0, 1.0));
    if (std::abs(std::sin(b)) < 1e-12)
        return {std::atan2(R(1, 0), R(0, 0)), b, 0.0};
    return {std::atan2(R(1, 2), R(0, 2)), b, std::atan2(R(2, 1), -R(2, 0))};
}

Eigen::Matrix3d settings_frame(const std::vector<Direction>& settings) {
    Eigen::Matrix3d R;
    for (std::size_t i = 0; i < settings.size() && i < 3; ++i)
        R.col(static_cast<int>(i)) = settings[i].unit_vector();
    if (settings.size() == 2) R.col(2) = R.col(0).cross(R.col(1));
    return R;
}

// ---------------------------------------------------------------------------
// Nelder-Mead simplex (reflection / expansion / contraction / shrink).

struct SimplexOutcome {
    Eigen::VectorXd x;
    double f = 0.0;
    long evaluations = 0;
    bool converged = false;
};

SimplexOutcome nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x0, const Eigen::VectorXd& steps,
                           int max_iterations, double diameter_tol) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> vertex(n + 1, x0);
    std::vector<double> value(n + 1);
    SimplexOutcome out;
    for (int i = 0; i < n; ++i) vertex[i + 1](i) += steps(i);
    for (int i = 0; i <= n; ++i) {
        value[i] = f(vertex[i]);
        ++out.evaluations;
    }
    std::vector<int> order(n + 1);
    std::iota(order.begin(), order.end(), 0);

    for (int iter = 0; iter < max_iterations; ++iter) {
        std::sort(order.begin(), order.end(), [&](int a, int b) { return value[a] < value[b]; });
        const int best = order[0];
        const int worst = order[n];
        const int second_worst = order[n - 1];

        double diameter = 0.0;
        for (int i = 0; i <= n; ++i)
            diameter = std::max(diameter, (vertex[i] - vertex[best]).lpNorm<Eigen::Infinity>());
        if (diameter < diameter_tol) {
            out.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += vertex[i];
        centroid /= double(n);

        const Eigen::VectorXd reflected = centroid + (centroid - vertex[worst]);
        const double f_reflected = f(reflected);
        ++out.evaluations;

        if (f_reflected < value[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - vertex[worst]);
            const double f_expanded = f(expanded);
            ++out.evaluations;
            if (f_expanded < f_reflected) {
                vertex[worst] = expanded;
                value[worst] = f_expanded;
            } else {
                vertex[worst] = reflected;
                value[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < value[second_worst]) {
            vertex[worst] = reflected;
            value[worst] = f_reflected;
            continue;
        }

        bool shrink = false;
        if (f_reflected < value[worst]) {
            const Eigen::VectorXd contracted = centroid + 0.5 * (reflected - centroid);
            const double f_contracted = f(contracted);
            ++out.evaluations;
            if (f_contracted <= f_reflected) {
                vertex[worst] = contracted;
                value[worst] = f_contracted;
            } else {
                shrink = true;
            }
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (vertex[worst] - centroid);
            const double f_contracted = f(contracted);
            ++out.evaluations;
            if (f_contracted < value[worst]) {
                vertex[worst] = contracted;
                value[worst] = f_contracted;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (int i = 0; i <= n; ++i) {
                if (i == best) continue;
                vertex[i] = vertex[best] + 0.5 * (vertex[i] - vertex[best]);
                value[i] = f(vertex[i]);
                ++out.evaluations;
            }
        }
    }

    std::sort(order.begin(), order.end(), [&](int a, int b) { return value[a] < value[b]; });
    out.x = vertex[order[0]];
    out.f = value[order[0]];
    return out;
}

// ---------------------------------------------------------------------------
// Parameter vector <-> scenario mapping and fast objective evaluation.

enum class SlotKind { Theta, Phi, EulerA, EulerB, EulerC, Lambda };

class Evaluator {
  public:
    Evaluator(const OptimizationProblem& problem, int max_bob)
        : problem_(problem), n_(problem.scenario.setting_count()), max_bob_(max_bob) {
        if (n_ > kMaxSettings)
            throw std::invalid_argument("maximize: too many settings per observer");
        T0_ = bloch_correlation_matrix(problem.scenario.state());

        alice_mode_ = problem.alice_free ? (n_ <= 3 ? AliceMode::Frame : AliceMode::PerDirection)
                                         : AliceMode::Fixed;
        if (alice_mode_ == AliceMode::Frame) {
            alice_offset_ = add_slot(SlotKind::EulerA);
            add_slot(SlotKind::EulerB);
            add_slot(SlotKind::EulerC);
        } else if (alice_mode_ == AliceMode::PerDirection) {
            alice_offset_ = static_cast<int>(slots_.size());
            for (int i = 0; i < n_; ++i) {
                add_slot(SlotKind::Theta);
                add_slot(SlotKind::Phi);
            }
        }

        angle_offset_.assign(max_bob_, -1);
        lambda_offset_.assign(max_bob_, -1);
        bob_frame_.assign(max_bob_, false);
        for (int m = 0; m < max_bob_; ++m) {
            const BobFreedom& freedom = problem.free_bobs[m];
            if (freedom.angles) {
                angle_offset_[m] = static_cast<int>(slots_.size());
                if (freedom.orthonormal) {
                    if (n_ > 3)
                        throw std::invalid_argument(
                            "maximize: orthonormal frames need at most three settings");
                    bob_frame_[m] = true;
                    add_slot(SlotKind::EulerA);
                    add_slot(SlotKind::EulerB);
                    add_slot(SlotKind::EulerC);
                } else {
                    for (int i = 0; i < n_; ++i) {
                        add_slot(SlotKind::Theta);
                        add_slot(SlotKind::Phi);
                    }
                }
            }
            if (freedom.lambda) lambda_offset_[m] = add_slot(SlotKind::Lambda);
        }

        need_cffw_.assign(max_bob_ + 1, false);
        need_cjwr_.assign(max_bob_ + 1, false);
        mark_need(problem.objective.kind, problem.objective.bob_index);
        for (const Constraint& c : problem.constraints) mark_need(c.kind, c.bob_index);
    }

    int dimension() const { return static_cast<int>(slots_.size()); }

    Eigen::VectorXd initial_steps() const {
        Eigen::VectorXd steps(dimension());
        for (int i = 0; i < dimension(); ++i)
            steps(i) = slots_[i] == SlotKind::Lambda ? 0.15 : 0.5;
        return steps;
    }

    Eigen::VectorXd random_point(std::mt19937_64& rng) const {
        Eigen::VectorXd x(dimension());
        for (int i = 0; i < dimension(); ++i) {
            switch (slots_[i]) {
                case SlotKind::Theta:
                case SlotKind::EulerB: x(i) = std::acos(2.0 * uniform01(rng) - 1.0); break;
                case SlotKind::Phi:
                case SlotKind::EulerA:
                case SlotKind::EulerC: x(i) = 2.0 * kPi * uniform01(rng); break;
                case SlotKind::Lambda:
                    x(i) = kLambdaMin + (1.0 - kLambdaMin) * uniform01(rng);
                    break;
            }
        }
        return x;
    }

    /// Parameters corresponding to a concrete scenario of the same shape.
    Eigen::VectorXd encode(const Scenario& scenario) const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dimension());
        if (alice_mode_ == AliceMode::Frame) {
            x.segment<3>(alice_offset_) = frame_to_euler(settings_frame(scenario.alice().settings()));
        } else if (alice_mode_ == AliceMode::PerDirection) {
            for (int i = 0; i < n_; ++i) {
                x(alice_offset_ + 2 * i) = scenario.alice().settings()[i].theta();
                x(alice_offset_ + 2 * i + 1) = scenario.alice().settings()[i].phi();
            }
        }
        for (int m = 0; m < max_bob_; ++m) {
            const BobConfig& bob = scenario.bobs()[m];
            if (angle_offset_[m] >= 0) {
                if (bob_frame_[m]) {
                    x.segment<3>(angle_offset_[m]) =
                        frame_to_euler(settings_frame(bob.settings()));
                } else {
                    for (int i = 0; i < n_; ++i) {
                        x(angle_offset_[m] + 2 * i) = bob.settings()[i].theta();
                        x(angle_offset_[m] + 2 * i + 1) = bob.settings()[i].phi();
                    }
                }
            }
            if (lambda_offset_[m] >= 0) x(lambda_offset_[m]) = bob.sharpness();
        }
        return x;
    }

    struct Outcome {
        double value = 0.0;
        std::vector<double> residuals;
        double penalty = 0.0;  // sum of squared residuals
    };

    void evaluate(const Eigen::VectorXd& x, Outcome& out) const {
        std::array<Eigen::Vector3d, kMaxSettings> alice;
        std::array<Eigen::Vector3d, kMaxSettings> dirs;
        decode_alice(x, alice);

        std::vector<double> cffw_value(max_bob_ + 1, 0.0);
        std::vector<double> cjwr_value(max_bob_ + 1, 0.0);
        Eigen::Matrix3d T = T0_;
        for (int m = 1; m <= max_bob_; ++m) {
            const double lambda = bob_lambda(x, m);
            decode_bob(x, m, dirs);
            if (need_cffw_[m] || need_cjwr_[m]) {
                if (need_cffw_[m]) {
                    const double c00 = lambda * alice[0].dot(T * dirs[0]);
                    const double c01 = lambda * alice[0].dot(T * dirs[1]);
                    const double c10 = lambda * alice[1].dot(T * dirs[0]);
                    const double c11 = lambda * alice[1].dot(T * dirs[1]);
                    cffw_value[m] = std::hypot(c00 + c01, c10 + c11) +
                                    std::hypot(c00 - c01, c10 - c11);
                }
                if (need_cjwr_[m]) {
                    double diag = 0.0;
                    for (int i = 0; i < n_; ++i) diag += lambda * alice[i].dot(T * dirs[i]);
                    cjwr_value[m] = std::abs(diag) / std::sqrt(double(n_));
                }
            }
            if (m < max_bob_) {
                const double F = std::sqrt(1.0 - lambda * lambda);
                Eigen::Matrix3d avg = Eigen::Matrix3d::Zero();
                const std::vector<double>& w = problem_.scenario.setting_weights()[m - 1];
                for (int i = 0; i < n_; ++i) avg += w[i] * (dirs[i] * dirs[i].transpose());
                T = T * (F * Eigen::Matrix3d::Identity() + (1.0 - F) * avg);
            }
        }

        const auto value_of = [&](InequalityKind kind, int m) {
            return kind == InequalityKind::Cffw ? cffw_value[m] : cjwr_value[m];
        };
        out.value = value_of(problem_.objective.kind, problem_.objective.bob_index);
        out.residuals.clear();
        out.penalty = 0.0;
        for (const Constraint& c : problem_.constraints) {
            const double v = value_of(c.kind, c.bob_index);
            double r;
            if (c.require_violation) {
                const double bound = c.kind == InequalityKind::Cffw ? 2.0 : 1.0;
                r = std::max(0.0, bound + kViolationSlack - v);
            } else {
                r = v - c.target;
            }
            out.residuals.push_back(r);
            out.penalty += r * r;
        }
    }

    /// Full scenario at x; parameters of Bobs beyond the trimmed range stay at
    /// their template values.
    Scenario assemble(const Eigen::VectorXd& x) const {
        std::vector<Direction> alice_dirs;
        if (alice_mode_ == AliceMode::Fixed) {
            alice_dirs = problem_.scenario.alice().settings();
        } else {
            std::array<Eigen::Vector3d, kMaxSettings> alice;
            decode_alice(x, alice);
            for (int i = 0; i < n_; ++i) alice_dirs.push_back(direction_from_unit_vector(alice[i]));
        }
        std::vector<BobConfig> bobs;
        std::array<Eigen::Vector3d, kMaxSettings> dirs;
        for (int m = 1; m <= problem_.scenario.chain_length(); ++m) {
            if (m <= max_bob_ && angle_offset_[m - 1] >= 0) {
                decode_bob(x, m, dirs);
                std::vector<Direction> settings;
                for (int i = 0; i < n_; ++i) settings.push_back(direction_from_unit_vector(dirs[i]));
                bobs.emplace_back(std::move(settings), m <= max_bob_ ? bob_lambda(x, m)
                                                                     : problem_.scenario.bob(m).sharpness());
            } else {
                const double lambda =
                    m <= max_bob_ ? bob_lambda(x, m) : problem_.scenario.bob(m).sharpness();
                bobs.emplace_back(problem_.scenario.bob(m).settings(), lambda);
            }
        }
        return Scenario(problem_.scenario.state(), AliceConfig(std::move(alice_dirs)),
                        std::move(bobs), problem_.scenario.setting_weights());
    }

  private:
    enum class AliceMode { Fixed, Frame, PerDirection };

    int add_slot(SlotKind kind) {
        slots_.push_back(kind);
        return static_cast<int>(slots_.size()) - 1;
    }

    void mark_need(InequalityKind kind, int m) {
        if (kind == InequalityKind::Cffw)
            need_cffw_[m] = true;
        else
            need_cjwr_[m] = true;
    }

    void decode_alice(const Eigen::VectorXd& x,
                      std::array<Eigen::Vector3d, kMaxSettings>& alice) const {
        if (alice_mode_ == AliceMode::Fixed) {
            for (int i = 0; i < n_; ++i)
                alice[i] = problem_.scenario.alice().settings()[i].unit_vector();
        } else if (alice_mode_ == AliceMode::Frame) {
            const Eigen::Matrix3d R =
                euler_zyz(x(alice_offset_), x(alice_offset_ + 1), x(alice_offset_ + 2));
            for (int i = 0; i < n_; ++i) alice[i] = R.col(i);
        } else {
            for (int i = 0; i < n_; ++i)
                alice[i] = vec_from_angles(x(alice_offset_ + 2 * i), x(alice_offset_ + 2 * i + 1));
        }
    }

    void decode_bob(const Eigen::VectorXd& x, int m,
                    std::array<Eigen::Vector3d, kMaxSettings>& dirs) const {
        const int off = angle_offset_[m - 1];
        if (off < 0) {
            const BobConfig& bob = problem_.scenario.bob(m);
            for (int i = 0; i < n_; ++i) dirs[i] = bob.settings()[i].unit_vector();
        } else if (bob_frame_[m - 1]) {
            const Eigen::Matrix3d R = euler_zyz(x(off), x(off + 1), x(off + 2));
            for (int i = 0; i < n_; ++i) dirs[i] = R.col(i);
        } else {
            for (int i = 0; i < n_; ++i)
                dirs[i] = vec_from_angles(x(off + 2 * i), x(off + 2 * i + 1));
        }
    }

    double bob_lambda(const Eigen::VectorXd& x, int m) const {
        const int off = lambda_offset_[m - 1];
        if (off < 0) return problem_.scenario.bob(m).sharpness();
        return std::clamp(x(off), kLambdaMin, 1.0);
    }

    const OptimizationProblem& problem_;
    int n_;
    int max_bob_;
    Eigen::Matrix3d T0_;
    AliceMode alice_mode_ = AliceMode::Fixed;
    int alice_offset_ = -1;
    std::vector<int> angle_offset_;
    std::vector<int> lambda_offset_;
    std::vector<bool> bob_frame_;
    std::vector<SlotKind> slots_;
    std::vector<bool> need_cffw_;
    std::vector<bool> need_cjwr_;
};

void validate_problem(const OptimizationProblem& problem) {
    const int chain = problem.scenario.chain_length();
    const int n = problem.scenario.setting_count();
    if (problem.objective.bob_index < 1 || problem.objective.bob_index > chain)
        throw std::invalid_argument("maximize: objective Bob index out of range");
    if (problem.objective.kind == InequalityKind::Cffw && n != 2)
        throw std::invalid_argument("maximize: CFFW needs two settings per observer");
    if (static_cast<int>(problem.free_bobs.size()) != chain)
        throw std::invalid_argument("maximize: one freedom entry per Bob required");
    for (const Constraint& c : problem.constraints) {
        if (c.bob_index < 1 || c.bob_index >= problem.objective.bob_index)
            throw std::invalid_argument(
                "maximize: constraints may only reference Bobs earlier than the objective");
        if (c.kind == InequalityKind::Cffw && n != 2)
            throw std::invalid_argument("maximize: CFFW constraint needs two settings");
    }
}

OptimizationResult maximize_impl(const OptimizationProblem& problem, const Budget& budget,
                                 std::uint64_t seed, const std::vector<Eigen::VectorXd>& hints) {
    validate_problem(problem);
    if (budget.restarts < 1 || budget.iterations < 1)
        throw std::invalid_argument("maximize: budget must be positive");

    int max_bob = problem.objective.bob_index;
    for (const Constraint& c : problem.constraints) max_bob = std::max(max_bob, c.bob_index);
    Evaluator eval(problem, max_bob);

    OptimizationResult result;
    Evaluator::Outcome outcome;

    if (eval.dimension() == 0) {
        const Eigen::VectorXd empty(0);
        eval.evaluate(empty, outcome);
        result.best_value = outcome.value;
        result.constraint_residuals = outcome.residuals;
        result.argmax = eval.assemble(empty);
        result.restarts_used = 0;
        result.evaluations = 1;
        double worst = 0.0;
        for (double r : outcome.residuals) worst = std::max(worst, std::abs(r));
        result.feasible = worst < kFeasibilityTol;
        result.converged = result.feasible;
        if (!result.feasible) result.message = "template violates constraints and nothing is free";
        return result;
    }

    struct Candidate {
        Eigen::VectorXd x;
        double value = 0.0;
        std::vector<double> residuals;
        double residual_norm = 0.0;
        bool feasible = false;
        bool nm_converged = false;
    };
    std::optional<Candidate> best;
    long evaluations = 0;

    for (int r = 0; r < budget.restarts; ++r) {
        std::mt19937_64 rng(mix_seed(seed, r));
        Eigen::VectorXd x = (r < static_cast<int>(hints.size())) ? hints[r]
                                                                 : eval.random_point(rng);
        bool nm_converged = false;
        for (int round = 0; round < kPenaltyRounds; ++round) {
            const double mu = std::pow(10.0, 2 + round);
            const auto f = [&](const Eigen::VectorXd& p) {
                eval.evaluate(p, outcome);
                ++evaluations;
                return -outcome.value + mu * outcome.penalty;
            };
            const Eigen::VectorXd steps = eval.initial_steps() * std::pow(0.45, round);
            SimplexOutcome nm = nelder_mead(f, x, steps, budget.iterations, kDiameterTol);
            x = nm.x;
            nm_converged = nm.converged;
        }

        eval.evaluate(x, outcome);
        ++evaluations;
        Candidate cand;
        cand.x = x;
        cand.value = outcome.value;
        cand.residuals = outcome.residuals;
        for (double res : outcome.residuals)
            cand.residual_norm = std::max(cand.residual_norm, std::abs(res));
        cand.feasible = cand.residual_norm < kFeasibilityTol;
        cand.nm_converged = nm_converged;

        const bool take = !best ||
                          (cand.feasible && !best->feasible) ||
                          (cand.feasible == best->feasible &&
                           (cand.feasible ? cand.value > best->value
                                          : cand.residual_norm < best->residual_norm));
        if (take) best = std::move(cand);
    }

    result.best_value = best->value;
    result.constraint_residuals = best->residuals;
    result.argmax = eval.assemble(best->x);
    result.restarts_used = budget.restarts;
    result.evaluations = evaluations;
    result.feasible = best->feasible;
    result.converged = best->feasible && best->nm_converged;
    if (!best->feasible)
        result.message = "infeasible: no point met the constraints (max residual " +
                         std::to_string(best->residual_norm) + ")";
    return result;
}

Scenario with_bob_sharpness(const Scenario& scenario, int which, double lambda) {
    std::vector<BobConfig> bobs;
    for (int m = 1; m <= scenario.chain_length(); ++m)
        bobs.emplace_back(scenario.bob(m).settings(),
                          m == which ? lambda : scenario.bob(m).sharpness());
    return Scenario(scenario.state(), scenario.alice(), std::move(bobs),
                    scenario.setting_weights());
}

}  // namespace

OptimizationResult maximize(const OptimizationProblem& problem, const Budget& budget,
                            std::uint64_t seed) {
    return maximize_impl(problem, budget, seed, {});
}

SweepResult sweep_lambda(const OptimizationProblem& problem, int which,
                         const std::vector<double>& grid, const Budget& budget,
                         std::uint64_t seed) {
    const int chain = problem.scenario.chain_length();
    if (which < 1 || which > chain)
        throw std::invalid_argument("sweep_lambda: Bob index out of range");
    if (grid.empty()) throw std::invalid_argument("sweep_lambda: empty grid");
    for (double lambda : grid)
        if (!(lambda > 0.0) || lambda > 1.0)
            throw std::invalid_argument("sweep_lambda: grid values must lie in (0, 1]");

    const InequalityKind kind = problem.objective.kind;
    SweepResult result;
    result.which = which;
    result.bound = kind == InequalityKind::Cffw ? 2.0 : 1.0;

    for (std::size_t g = 0; g < grid.size(); ++g) {
        OptimizationProblem point = problem;
        point.scenario = with_bob_sharpness(problem.scenario, which, grid[g]);
        point.free_bobs[which - 1].lambda = false;

        SweepRow row;
        row.lambda = grid[g];
        row.all_violate = true;

        // Swept Bob's value at the template geometry.
        const SteeringEvaluation own = evaluate(kind, correlation_table(point.scenario, which));
        row.values.emplace_back(which, own.value);
        row.all_violate = own.violated;

        for (int d = which + 1; d <= chain; ++d) {
            OptimizationProblem sub = point;
            sub.objective = Objective{kind, d};
            sub.constraints.clear();
            for (const Constraint& c : point.constraints)
                if (c.bob_index < d) sub.constraints.push_back(c);
            const OptimizationResult opt =
                maximize(sub, budget, mix_seed(seed, g * (chain + 1) + d));
            row.values.emplace_back(d, opt.best_value);
            if (!(opt.feasible && opt.best_value > result.bound + kViolationSlack))
                row.all_violate = false;
        }
        result.rows.push_back(std::move(row));
    }

    int first = -1, last = -1;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (!result.rows[i].all_violate) continue;
        if (first < 0) first = static_cast<int>(i);
        last = static_cast<int>(i);
    }
    if (first >= 0) {
        result.window_found = true;
        result.window_low = result.rows[first].lambda;
        result.window_high = result.rows[last].lambda;
        result.window_contiguous = true;
        for (int i = first; i <= last; ++i)
            if (!result.rows[i].all_violate) result.window_contiguous = false;
    }
    return result;
}

std::vector<Eigen::Vector3d> platonic_axes(int n) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> axes;
    switch (n) {
        case 4:  // cube body diagonals
            axes = {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
            break;
        case 6:  // icosahedron vertex pairs
            axes = {{0, 1, golden},  {0, 1, -golden}, {1, golden, 0},
                    {1, -golden, 0}, {golden, 0, 1},  {golden, 0, -1}};
            break;
        case 10:  // dodecahedron vertex pairs
            axes = {{1, 1, 1},
                    {1, 1, -1},
                    {1, -1, 1},
                    {1, -1, -1},
                    {0, 1.0 / golden, golden},
                    {0, 1.0 / golden, -golden},
                    {1.0 / golden, golden, 0},
                    {1.0 / golden, -golden, 0},
                    {golden, 0, 1.0 / golden},
                    {golden, 0, -1.0 / golden}};
            break;
        default:
            throw std::invalid_argument("platonic_axes: supported axis counts are 4, 6 and 10");
    }
    for (Eigen::Vector3d& a : axes) a.normalize();
    return axes;
}

namespace {

// Deterministic well-spread template axes for free-family probes with n > 3.
std::vector<Eigen::Vector3d> spread_axes(int n) {
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    std::vector<Eigen::Vector3d> axes;
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / (2.0 * n);  // upper hemisphere only
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * i;
        axes.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return axes;
}

}  // namespace

std::vector<ConjectureRow> conjecture_probe(int n_settings, int chain_length,
                                            DirectionFamily family, const Budget& budget,
                                            std::uint64_t seed) {
    if (n_settings < 2) throw std::invalid_argument("conjecture_probe: need at least 2 settings");
    if (chain_length < 1) throw std::invalid_argument("conjecture_probe: need at least 1 Bob");

    std::vector<Eigen::Vector3d> axes;
    if (family == DirectionFamily::Platonic) {
        axes = platonic_axes(n_settings);  // throws for unsupported n
    } else if (n_settings <= 3) {
        axes = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};
        axes.resize(n_settings);
    } else {
        axes = spread_axes(n_settings);
    }
    std::vector<Direction> template_dirs;
    for (const Eigen::Vector3d& a : axes) template_dirs.push_back(direction_from_unit_vector(a));

    std::vector<ConjectureRow> rows;
    std::optional<Scenario> previous_argmax;
    for (int m = 1; m <= chain_length; ++m) {
        std::vector<BobConfig> bobs;
        for (int i = 1; i <= m; ++i) bobs.emplace_back(template_dirs, i == m ? 1.0 : 0.6);
        Scenario scenario(singlet(), AliceConfig(template_dirs), std::move(bobs));

        OptimizationProblem problem{std::move(scenario), Objective{InequalityKind::Cjwr, m},
                                    {}, /*alice_free=*/false, {}};
        problem.alice_free = family == DirectionFamily::Free && n_settings > 3;
        for (int i = 1; i <= m; ++i) {
            BobFreedom freedom;
            freedom.angles = family == DirectionFamily::Free;
            freedom.lambda = i < m;  // probed Bob measures sharp
            // orthonormal axis sets keep the CJWR bound meaningful (it is
            // derived for orthonormal directions when n is 2 or 3)
            freedom.orthonormal = freedom.angles && n_settings <= 3;
            problem.free_bobs.push_back(freedom);
        }
        for (int i = 1; i < m; ++i)
            problem.constraints.push_back(Constraint{i, InequalityKind::Cjwr, false, 1.0});

        std::vector<Eigen::VectorXd> hints;
        if (previous_argmax) {
            // Extend the previous row's solution with a fresh final Bob.
            std::vector<BobConfig> hint_bobs;
            for (int i = 1; i < m; ++i)
                hint_bobs.emplace_back(previous_argmax->bob(i).settings(),
                                       std::min(previous_argmax->bob(i).sharpness(), 0.99));
            hint_bobs.emplace_back(template_dirs, 1.0);
            Scenario hint_scenario(singlet(), previous_argmax->alice(), std::move(hint_bobs));
            int max_bob = m;
            Evaluator hint_eval(problem, max_bob);
            hints.push_back(hint_eval.encode(hint_scenario));
        }

        ConjectureRow row;
        row.bob_index = m;
        row.result = maximize_impl(problem, budget, mix_seed(seed, m), hints);
        previous_argmax = row.result.argmax;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace steering
