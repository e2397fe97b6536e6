// Command-line front end: evaluate scenarios, optimize measurement settings,
// sweep sharpness parameters, and reproduce the bundled reference results.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "steering/config.hpp"
#include "steering/density.hpp"
#include "steering/experiments.hpp"
#include "steering/verify.hpp"

namespace {

using namespace steering;

constexpr int kExitSuccess = 0;
constexpr int kExitReproductionFailure = 1;
constexpr int kExitUsage = 2;

Budget parse_budget(const std::string& text) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("budget must be RESTARTS,ITERATIONS (e.g. 64,2000)");
    Budget budget;
    budget.restarts = std::stoi(text.substr(0, comma));
    budget.iterations = std::stoi(text.substr(comma + 1));
    return budget;
}

std::vector<double> parse_grid(const std::string& text) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
        throw ConfigError("grid must be LO:HI:STEP (e.g. 0.70:0.92:0.01)");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double x = lo + i * step;
        if (x > hi + step / 2) break;
        grid.push_back(x);
    }
    if (grid.empty()) throw ConfigError("grid is empty");
    return grid;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << '\n';
    else
        write_file(out_path, text + "\n");
}

std::string run_report_json(const Scenario& scenario, const RunReport& report) {
    nlohmann::json j;
    j["scenario"] = nlohmann::json::parse(serialize_scenario(scenario));
    j["bobs"] = nlohmann::json::array();
    for (std::size_t m = 0; m < report.tables.size(); ++m) {
        nlohmann::json bob;
        bob["bob"] = static_cast<int>(m + 1);
        const Eigen::MatrixXd& e = report.tables[m].entries;
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < e.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < e.cols(); ++c) row.push_back(e(r, c));
            rows.push_back(row);
        }
        bob["correlation_table"] = rows;
        nlohmann::json evals = nlohmann::json::array();
        const auto push_eval = [&evals](const SteeringEvaluation& ev) {
            evals.push_back({{"kind", to_string(ev.kind)},
                             {"settings", ev.settings},
                             {"value", ev.value},
                             {"bound", ev.bound},
                             {"violated", ev.violated}});
        };
        if (!report.cffw_values.empty()) push_eval(report.cffw_values[m]);
        push_eval(report.cjwr_values[m]);
        bob["evaluations"] = evals;
        j["bobs"].push_back(bob);
    }
    return j.dump(2);
}

std::string run_report_csv(const RunReport& report) {
    std::string out;
    for (std::size_t m = 0; m < report.tables.size(); ++m) {
        out += "# bob " + std::to_string(m + 1) + " correlation table\n";
        out += report.tables[m].to_csv();
    }
    out += "# kind,bob,value,bound,violated\n";
    char buf[120];
    const auto append_eval = [&](const SteeringEvaluation& ev) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%s\n", to_string(ev.kind).c_str(),
                      ev.bob_index, ev.value, ev.bound, ev.violated ? "true" : "false");
        out += buf;
    };
    for (const SteeringEvaluation& ev : report.cffw_values) append_eval(ev);
    for (const SteeringEvaluation& ev : report.cjwr_values) append_eval(ev);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit sequential unsharp-measurement steering simulator"};
    app.require_subcommand(1);

    std::string config_path, bundled_name, out_path, format = "json-text";
    std::string budget_text, grid_text, family_text = "free";
    std::optional<std::uint64_t> seed;
    double tolerance = 1e-9;
    int trials = 1000;
    int which = 1, settings = 3, chain = 3;

    const auto add_seed = [&seed](CLI::App* cmd) {
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&seed](const std::uint64_t& s) { seed = s; }, "random seed");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "evaluate a scenario's tables and inequalities");
    cmd_run->add_option("--config", config_path, "scenario config file");
    cmd_run->add_option("--bundled", bundled_name, "bundled scenario name");
    cmd_run->add_option("--out", out_path, "write output to this path");
    cmd_run->add_option("--format", format, "csv or json-text")
        ->check(CLI::IsMember({"csv", "json-text"}));

    CLI::App* cmd_optimize = app.add_subcommand("optimize", "maximize a Bob's steering value");
    cmd_optimize->add_option("--config", config_path, "problem config file")->required();
    cmd_optimize->add_option("--budget", budget_text, "restarts,iterations");
    cmd_optimize->add_option("--out", out_path, "write output to this path");
    add_seed(cmd_optimize);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep one Bob's sharpness over a grid");
    cmd_sweep->add_option("--config", config_path, "problem config file")->required();
    cmd_sweep->add_option("--which", which, "1-based index of the swept Bob")->required();
    cmd_sweep->add_option("--grid", grid_text, "LO:HI:STEP")->required();
    cmd_sweep->add_option("--budget", budget_text, "restarts,iterations");
    cmd_sweep->add_option("--out", out_path, "write output to this path");
    add_seed(cmd_sweep);

    CLI::App* cmd_verify = app.add_subcommand("verify", "run the cross-engine property suite");
    cmd_verify->add_option("--tolerance", tolerance, "analytic-vs-oracle tolerance");
    cmd_verify->add_option("--trials", trials, "random trials per property");
    cmd_verify->add_option("--out", out_path, "write output to this path");
    add_seed(cmd_verify);

    CLI::App* cmd_conjecture =
        app.add_subcommand("conjecture", "per-Bob CJWR-n maxima along a chain");
    cmd_conjecture->add_option("--settings", settings, "settings per observer (n)")->required();
    cmd_conjecture->add_option("--chain", chain, "number of Bobs")->required();
    cmd_conjecture->add_option("--family", family_text, "free or platonic")
        ->check(CLI::IsMember({"free", "platonic"}));
    cmd_conjecture->add_option("--budget", budget_text, "restarts,iterations");
    cmd_conjecture->add_option("--out", out_path, "write output to this path");
    add_seed(cmd_conjecture);

    CLI::App* cmd_reproduce =
        app.add_subcommand("reproduce-all", "run every bundled experiment against its target");
    cmd_reproduce->add_option("--budget", budget_text,
                              "override every experiment's search budget");
    add_seed(cmd_reproduce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (cmd_run->parsed()) {
            if (config_path.empty() == bundled_name.empty())
                throw ConfigError("run: pass exactly one of --config or --bundled");
            const Scenario scenario = config_path.empty()
                                          ? bundled_scenario(bundled_name)
                                          : parse_scenario(read_file(config_path));
            const RunReport report = run_scenario(scenario);
            emit(format == "csv" ? run_report_csv(report) : run_report_json(scenario, report),
                 out_path);
            return kExitSuccess;
        }

        if (cmd_optimize->parsed()) {
            ProblemConfig config = parse_problem(read_file(config_path));
            if (!budget_text.empty()) config.budget = parse_budget(budget_text);
            const OptimizationResult result =
                maximize(config.problem, config.budget, seed.value_or(config.seed));
            emit(serialize_result(result), out_path);
            return result.feasible ? kExitSuccess : kExitReproductionFailure;
        }

        if (cmd_sweep->parsed()) {
            ProblemConfig config = parse_problem(read_file(config_path));
            if (!budget_text.empty()) config.budget = parse_budget(budget_text);
            const SweepResult result = sweep_lambda(config.problem, which, parse_grid(grid_text),
                                                    config.budget, seed.value_or(config.seed));
            emit(serialize_sweep(result), out_path);
            return kExitSuccess;
        }

        if (cmd_verify->parsed()) {
            const VerifyReport report = run_verification(tolerance, trials, seed.value_or(1));
            emit(report.to_text(), out_path);
            return report.ok() ? kExitSuccess : kExitReproductionFailure;
        }

        if (cmd_conjecture->parsed()) {
            const Budget budget = budget_text.empty() ? Budget{} : parse_budget(budget_text);
            const DirectionFamily family =
                family_text == "platonic" ? DirectionFamily::Platonic : DirectionFamily::Free;
            const std::vector<ConjectureRow> rows =
                conjecture_probe(settings, chain, family, budget, seed.value_or(1));
            emit(serialize_conjecture(rows), out_path);
            return kExitSuccess;
        }

        if (cmd_reproduce->parsed()) {
            const std::optional<Budget> override_budget =
                budget_text.empty() ? std::nullopt
                                    : std::optional<Budget>(parse_budget(budget_text));
            bool all_pass = true;
            for (const Experiment& experiment : bundled_experiments()) {
                const ExperimentOutcome outcome = experiment.run(override_budget, seed);
                all_pass &= outcome.pass;
                std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << experiment.name << '\n';
                for (const std::string& line : outcome.details)
                    std::cout << "      " << line << '\n';
            }
            std::cout << (all_pass ? "all experiments reproduced" : "some experiments failed")
                      << '\n';
            return all_pass ? kExitSuccess : kExitReproductionFailure;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
