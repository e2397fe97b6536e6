#include "steering/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "steering/inequalities.hpp"
#include "steering/optimizer.hpp"

namespace steering {

namespace {

constexpr double kPi = 3.14159265358979323846;

Scenario truncate_chain(const Scenario& scenario, int chain) {
    std::vector<BobConfig> bobs(scenario.bobs().begin(), scenario.bobs().begin() + chain);
    std::vector<std::vector<double>> weights(scenario.setting_weights().begin(),
                                             scenario.setting_weights().begin() + chain);
    return Scenario(scenario.state(), scenario.alice(), std::move(bobs), std::move(weights));
}

bool next_combo(std::vector<int>& combo, int base) {
    for (int i = static_cast<int>(combo.size()) - 1; i >= 0; --i) {
        if (++combo[i] < base) return true;
        combo[i] = 0;
    }
    return false;
}

}  // namespace

double RandomScenarioSource::uniform() {
    return double(rng_() >> 11) * 0x1.0p-53;
}

double RandomScenarioSource::random_lambda() {
    return 0.02 + 0.98 * uniform();
}

Direction RandomScenarioSource::random_direction() {
    const double theta = std::acos(2.0 * uniform() - 1.0);
    const double phi = 2.0 * kPi * uniform();
    return direction_from_angles(theta, phi);
}

Eigen::Matrix3d RandomScenarioSource::random_rotation() {
    const double a = 2.0 * kPi * uniform();
    const double b = std::acos(2.0 * uniform() - 1.0);
    const double c = 2.0 * kPi * uniform();
    Eigen::Matrix3d rz_a, ry_b, rz_c;
    rz_a << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    ry_b << std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b);
    rz_c << std::cos(c), -std::sin(c), 0, std::sin(c), std::cos(c), 0, 0, 0, 1;
    return rz_a * ry_b * rz_c;
}

TwoQubitState RandomScenarioSource::random_state() {
    Eigen::Matrix4cd g;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            // Box-Muller, one normal per component
            const double u1 = std::max(uniform(), 1e-300);
            const double u2 = uniform();
            const double u3 = std::max(uniform(), 1e-300);
            const double u4 = uniform();
            g(r, c) = Complex(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2),
                              std::sqrt(-2.0 * std::log(u3)) * std::cos(2.0 * kPi * u4));
        }
    Eigen::Matrix4cd rho = g * g.adjoint();
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint().eval());  // scrub rounding asymmetry
    return TwoQubitState(rho);
}

Scenario RandomScenarioSource::random_scenario(int settings, int chain) {
    const Eigen::Matrix3d frame = random_rotation();
    std::vector<Direction> alice;
    for (int i = 0; i < settings; ++i) alice.push_back(direction_from_unit_vector(frame.col(i)));
    std::vector<BobConfig> bobs;
    for (int m = 0; m < chain; ++m) {
        std::vector<Direction> dirs;
        for (int i = 0; i < settings; ++i) dirs.push_back(random_direction());
        bobs.emplace_back(std::move(dirs), random_lambda());
    }
    return Scenario(singlet(), AliceConfig(std::move(alice)), std::move(bobs));
}

Scenario RandomScenarioSource::random_scenario() {
    const int settings = uniform() < 0.5 ? 2 : 3;
    const int chain = 1 + static_cast<int>(uniform() * 4.0);
    return random_scenario(settings, std::min(chain, 4));
}

double two_bob_marginal_closed_form(int a, int b2, const Eigen::Vector3d& x,
                                    const Eigen::Vector3d& y1, const Eigen::Vector3d& y2,
                                    double lambda1, double lambda2) {
    const double f1 = std::sqrt(1.0 - lambda1 * lambda1);
    const double direct = 1.0 - a * b2 * lambda2 * y2.dot(x);
    const double relayed = 1.0 - a * b2 * lambda2 * y1.dot(x) * y2.dot(y1);
    return 0.25 * (f1 * direct + (1.0 - f1) * relayed);
}

double eq11_max_deviation(int trials, std::uint64_t seed, const EffectBuilder& effects) {
    RandomScenarioSource source(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Direction x = source.random_direction();
        const Direction y1 = source.random_direction();
        const Direction y2 = source.random_direction();
        const double lambda1 = source.random_lambda();
        const double lambda2 = source.random_lambda();

        // Complete Alice's pair with an orthogonal partner; only setting 0 is used.
        const Eigen::Vector3d xv = x.unit_vector();
        const Eigen::Vector3d helper =
            std::abs(xv.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
        const Direction x_perp = direction_from_unit_vector(xv.cross(helper).normalized());

        Scenario scenario(singlet(), AliceConfig({x, x_perp}),
                          {BobConfig({y1, source.random_direction()}, lambda1),
                           BobConfig({y2, source.random_direction()}, lambda2)});
        const OutcomeDistribution joint =
            joint_distribution(scenario, 0, {0, 0}, effects);
        const OutcomeDistribution marg = marginal(joint, {0, 2});
        for (int a : {-1, 1})
            for (int b2 : {-1, 1}) {
                const double expected = two_bob_marginal_closed_form(
                    a, b2, xv, y1.unit_vector(), y2.unit_vector(), lambda1, lambda2);
                worst = std::max(worst, std::abs(marg.probability({a, b2}) - expected));
            }
    }
    return worst;
}

double eq11_max_deviation(int trials, std::uint64_t seed) {
    return eq11_max_deviation(trials, seed, [](const Direction& d, double lambda, int outcome) {
        return effect(d, lambda, outcome);
    });
}

CorrelationTable oracle_correlation_table(const Scenario& scenario, int bob_index) {
    if (bob_index < 1 || bob_index > scenario.chain_length())
        throw std::invalid_argument("oracle_correlation_table: Bob index out of range");
    const Scenario chain = truncate_chain(scenario, bob_index);
    const int n = chain.setting_count();

    CorrelationTable table;
    table.bob_index = bob_index;
    table.entries = Eigen::MatrixXd::Zero(n, n);

    std::vector<int> earlier(bob_index - 1, 0);
    do {
        double weight = 1.0;
        for (int m = 0; m < bob_index - 1; ++m)
            weight *= chain.setting_weights()[m][earlier[m]];
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                std::vector<int> choices = earlier;
                choices.push_back(k);
                const OutcomeDistribution dist = joint_distribution(chain, j, choices);
                table.entries(j, k) += weight * dist.correlator({0, bob_index});
            }
    } while (next_combo(earlier, n));
    return table;
}

bool VerifyReport::ok() const {
    for (const PropertyCheck& check : checks)
        if (!check.pass) return false;
    return true;
}

std::string VerifyReport::to_text() const {
    std::ostringstream out;
    for (const PropertyCheck& check : checks) {
        char stat[64], thr[64];
        std::snprintf(stat, sizeof(stat), "%.3e", check.statistic);
        std::snprintf(thr, sizeof(thr), "%.1e", check.threshold);
        out << (check.pass ? "PASS" : "FAIL") << "  " << check.name << "  " << stat
            << (check.exceed ? " > " : " <= ") << thr;
        if (!check.note.empty()) out << "  (" << check.note << ")";
        out << '\n';
    }
    return out.str();
}

VerifyReport run_verification(double tolerance, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("run_verification: trials must be >= 1");
    VerifyReport report;

    const auto add = [&report](std::string name, double statistic, double threshold, bool exceed,
                               std::string note = "") {
        PropertyCheck check;
        check.name = std::move(name);
        check.statistic = statistic;
        check.threshold = threshold;
        check.exceed = exceed;
        check.pass = exceed ? statistic > threshold : statistic <= threshold;
        check.note = std::move(note);
        report.checks.push_back(std::move(check));
    };

    // Closed-form two-Bob marginal reproduced exactly.
    add("two_bob_marginal_closed_form", eq11_max_deviation(trials, seed), 1e-12, false);

    // Analytic correlation tables match brute-force averaged correlations.
    {
        RandomScenarioSource source(seed + 1);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const Scenario scenario = source.random_scenario();
            for (int m = 1; m <= scenario.chain_length(); ++m) {
                const CorrelationTable analytic = correlation_table(scenario, m);
                const CorrelationTable oracle = oracle_correlation_table(scenario, m);
                worst = std::max(worst,
                                 (analytic.entries - oracle.entries).cwiseAbs().maxCoeff());
            }
        }
        add("analytic_vs_oracle_tables", worst, tolerance, false);
    }

    // No-signalling equalities and the sequential signalling witness.
    {
        RandomScenarioSource source(seed + 2);
        double eq5 = 0.0, eq7 = 0.0;
        for (int t = 0; t < 6; ++t) {
            const Scenario scenario =
                source.random_scenario(t % 2 == 0 ? 2 : 3, 2 + (t % 2));
            const SignallingReport sig = signalling_report(scenario);
            eq5 = std::max(eq5, sig.alice_marginal_max_deviation);
            eq7 = std::max(eq7, sig.last_bob_max_deviation);
        }
        add("alice_marginal_setting_independent", eq5, 1e-10, false);
        add("last_bob_marginal_setting_independent", eq7, 1e-10, false);

        // Canonical witness: generic non-parallel settings, lambda1 = 0.9.
        Scenario witness(
            singlet(),
            AliceConfig({direction_from_angles(kPi / 2, 0), direction_from_angles(0, 0)}),
            {BobConfig({direction_from_angles(kPi / 4, 0), direction_from_angles(3 * kPi / 4, 0)},
                       0.9),
             BobConfig({direction_from_angles(kPi / 4, 0), direction_from_angles(3 * kPi / 4, 0)},
                       1.0)});
        add("earlier_bob_signalling_witness", signalling_report(witness).earlier_bob_witness,
            0.01, true);
    }

    // Lueders updates preserve trace when summed over outcomes.
    {
        RandomScenarioSource source(seed + 3);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const TwoQubitState rho = source.random_state();
            const Direction dir = source.random_direction();
            const double lambda = source.random_lambda();
            Eigen::Matrix4cd total = Eigen::Matrix4cd::Zero();
            for (int outcome : {-1, 1}) {
                const Eigen::Matrix4cd k = on_bob(effect(dir, lambda, outcome).sqrt());
                total += k * rho.matrix() * k;
            }
            worst = std::max(worst, std::abs(total.trace().real() - 1.0));
        }
        add("instrument_completeness", worst, 1e-12, false);
    }

    // Outcome-averaged update equals F rho + (1-F) (P+ rho P+ + P- rho P-).
    {
        RandomScenarioSource source(seed + 4);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const TwoQubitState rho = source.random_state();
            const Direction dir = source.random_direction();
            const double lambda = source.random_lambda();
            const double f = std::sqrt(1.0 - lambda * lambda);
            Eigen::Matrix4cd averaged = Eigen::Matrix4cd::Zero();
            Eigen::Matrix4cd pinched = Eigen::Matrix4cd::Zero();
            for (int outcome : {-1, 1}) {
                const Eigen::Matrix4cd k = on_bob(effect(dir, lambda, outcome).sqrt());
                averaged += k * rho.matrix() * k;
                const Eigen::Matrix4cd p = on_bob(effect(dir, 1.0, outcome).matrix());
                pinched += p * rho.matrix() * p;
            }
            const Eigen::Matrix4cd expected = f * rho.matrix() + (1.0 - f) * pinched;
            worst = std::max(worst, (averaged - expected).cwiseAbs().maxCoeff());
        }
        add("averaged_channel_identity", worst, 1e-10, false);
    }

    // The largest singular value of T never grows along the chain.
    {
        RandomScenarioSource source(seed + 5);
        double worst_growth = 0.0;
        for (int t = 0; t < trials; ++t) {
            const Scenario scenario = source.random_scenario();
            CorrelationMatrixState T = bloch_correlation_matrix(scenario.state());
            double previous = T.jacobiSvd().singularValues()(0);
            for (int m = 1; m <= scenario.chain_length(); ++m) {
                T = decohere_average(T, scenario.bob(m), scenario.setting_weights()[m - 1]);
                const double current = T.jacobiSvd().singularValues()(0);
                worst_growth = std::max(worst_growth, current - previous);
                previous = current;
            }
        }
        add("contractivity_of_decoherence", worst_growth, 1e-12, false);
    }

    // Steering values are degree-1 homogeneous in the final Bob's sharpness.
    {
        RandomScenarioSource source(seed + 6);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const Scenario scenario = source.random_scenario();
            const int m = scenario.chain_length();
            const double scale = 0.1 + 0.9 * source.uniform();
            std::vector<BobConfig> scaled_bobs = scenario.bobs();
            scaled_bobs[m - 1] = BobConfig(scaled_bobs[m - 1].settings(),
                                           scaled_bobs[m - 1].sharpness() * scale);
            const Scenario scaled(scenario.state(), scenario.alice(), std::move(scaled_bobs),
                                  scenario.setting_weights());
            const double base = cjwr(correlation_table(scenario, m)).value;
            const double after = cjwr(correlation_table(scaled, m)).value;
            worst = std::max(worst, std::abs(after - scale * base));
            if (scenario.setting_count() == 2) {
                const double base_s = cffw(correlation_table(scenario, m)).value;
                const double after_s = cffw(correlation_table(scaled, m)).value;
                worst = std::max(worst, std::abs(after_s - scale * base_s));
            }
        }
        add("final_sharpness_homogeneity", worst, 1e-12, false);
    }

    // Fixed seeds reproduce optimizer output bit for bit.
    {
        Scenario scenario(
            singlet(),
            AliceConfig({direction_from_angles(kPi / 2, 0), direction_from_angles(0, 0)}),
            {BobConfig({direction_from_angles(kPi / 4, 0), direction_from_angles(3 * kPi / 4, 0)},
                       1.0)});
        OptimizationProblem problem{std::move(scenario), Objective{InequalityKind::Cffw, 1},
                                    {}, false, {BobFreedom{true, false}}};
        const Budget budget{4, 150};
        const OptimizationResult first = maximize(problem, budget, seed);
        const OptimizationResult second = maximize(problem, budget, seed);
        bool identical = first.best_value == second.best_value &&
                         first.evaluations == second.evaluations;
        if (first.argmax && second.argmax)
            for (int i = 0; i < 2 && identical; ++i) {
                identical = first.argmax->bob(1).settings()[i].theta() ==
                                second.argmax->bob(1).settings()[i].theta() &&
                            first.argmax->bob(1).settings()[i].phi() ==
                                second.argmax->bob(1).settings()[i].phi();
            }
        add("optimizer_determinism", identical ? 0.0 : 1.0, 0.5, false,
            "two runs with one seed compared bit for bit");
    }

    return report;
}

}  // namespace steering
