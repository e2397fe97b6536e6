#include "steering/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace steering {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) throw ConfigError(std::string("missing field '") + field + "'");
    return *it;
}

double number_at(const json& j, const char* context) {
    if (!j.is_number()) throw ConfigError(std::string(context) + ": expected a number");
    return j.get<double>();
}

std::vector<Direction> parse_settings(const json& j, const char* context) {
    if (!j.is_array() || j.empty())
        throw ConfigError(std::string(context) + ": expected a list of [theta, phi] pairs");
    std::vector<Direction> settings;
    for (const json& pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError(std::string(context) + ": each setting is a [theta, phi] pair");
        settings.push_back(direction_from_angles(number_at(pair[0], context),
                                                 number_at(pair[1], context)));
    }
    return settings;
}

TwoQubitState parse_state(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "singlet") return singlet();
        throw ConfigError("state: unknown named state '" + j.get<std::string>() + "'");
    }
    if (!j.is_array() || j.size() != 16)
        throw ConfigError("state: expected \"singlet\" or 16 [re, im] pairs, row-major");
    Eigen::Matrix4cd rho;
    for (int idx = 0; idx < 16; ++idx) {
        const json& pair = j[idx];
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError("state: each entry is an [re, im] pair");
        rho(idx / 4, idx % 4) =
            Complex(number_at(pair[0], "state"), number_at(pair[1], "state"));
    }
    try {
        return TwoQubitState(rho);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("state: ") + e.what());
    }
}

Scenario scenario_from_json(const json& j) {
    TwoQubitState state = parse_state(require(j, "state"));
    const json& alice = require(j, "alice");
    std::vector<Direction> alice_settings = parse_settings(require(alice, "settings"), "alice.settings");

    const json& bobs_json = require(j, "bobs");
    if (!bobs_json.is_array() || bobs_json.empty())
        throw ConfigError("bobs: expected a nonempty list");
    std::vector<BobConfig> bobs;
    for (std::size_t m = 0; m < bobs_json.size(); ++m) {
        const std::string ctx = "bobs[" + std::to_string(m) + "]";
        const json& bob = bobs_json[m];
        std::vector<Direction> settings =
            parse_settings(require(bob, "settings"), (ctx + ".settings").c_str());
        const double lambda = number_at(require(bob, "lambda"), (ctx + ".lambda").c_str());
        try {
            bobs.emplace_back(std::move(settings), lambda);
        } catch (const std::exception& e) {
            throw ConfigError(ctx + ": " + e.what());
        }
    }

    try {
        AliceConfig alice_config(std::move(alice_settings));
        if (j.contains("weights")) {
            const json& weights_json = j["weights"];
            if (!weights_json.is_array())
                throw ConfigError("weights: expected one probability vector per Bob");
            std::vector<std::vector<double>> weights;
            for (const json& row : weights_json) {
                std::vector<double> w;
                for (const json& x : row) w.push_back(number_at(x, "weights"));
                weights.push_back(std::move(w));
            }
            return Scenario(std::move(state), std::move(alice_config), std::move(bobs),
                            std::move(weights));
        }
        return Scenario(std::move(state), std::move(alice_config), std::move(bobs));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

json settings_to_json(const std::vector<Direction>& settings) {
    json out = json::array();
    for (const Direction& d : settings) out.push_back({d.theta(), d.phi()});
    return out;
}

json scenario_to_json(const Scenario& scenario) {
    json j;
    const Eigen::Matrix4cd& rho = scenario.state().matrix();
    if ((rho - singlet().matrix()).cwiseAbs().maxCoeff() == 0.0) {
        j["state"] = "singlet";
    } else {
        json entries = json::array();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) entries.push_back({rho(r, c).real(), rho(r, c).imag()});
        j["state"] = entries;
    }
    j["alice"]["settings"] = settings_to_json(scenario.alice().settings());
    j["bobs"] = json::array();
    for (const BobConfig& bob : scenario.bobs())
        j["bobs"].push_back({{"settings", settings_to_json(bob.settings())},
                             {"lambda", bob.sharpness()}});
    j["weights"] = scenario.setting_weights();
    return j;
}

InequalityKind parse_kind(const json& j, const char* context) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "cffw") return InequalityKind::Cffw;
        if (s == "cjwr") return InequalityKind::Cjwr;
    }
    throw ConfigError(std::string(context) + ": kind must be \"cffw\" or \"cjwr\"");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return scenario_from_json(j);
}

std::string serialize_scenario(const Scenario& scenario) {
    return scenario_to_json(scenario).dump(2);
}

ProblemConfig parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    Scenario scenario = scenario_from_json(require(j, "scenario"));
    const int chain = scenario.chain_length();

    const json& objective_json = require(j, "objective");
    Objective objective;
    objective.kind = parse_kind(require(objective_json, "kind"), "objective");
    objective.bob_index = static_cast<int>(number_at(require(objective_json, "bob"), "objective.bob"));

    std::vector<Constraint> constraints;
    if (j.contains("constraints")) {
        for (const json& c : j["constraints"]) {
            Constraint constraint;
            constraint.bob_index = static_cast<int>(number_at(require(c, "bob"), "constraints.bob"));
            constraint.kind = c.contains("kind") ? parse_kind(c["kind"], "constraints") : objective.kind;
            if (c.contains("violated")) {
                constraint.require_violation = c["violated"].get<bool>();
            } else {
                constraint.target = number_at(require(c, "value"), "constraints.value");
            }
            constraints.push_back(constraint);
        }
    }

    std::vector<BobFreedom> free_bobs(chain);
    bool alice_free = false;
    if (j.contains("free")) {
        const json& free_json = j["free"];
        if (free_json.contains("alice")) alice_free = free_json["alice"].get<bool>();
        if (free_json.contains("bobs")) {
            const json& bobs_json = free_json["bobs"];
            if (static_cast<int>(bobs_json.size()) != chain)
                throw ConfigError("free.bobs: one entry per Bob required");
            for (int m = 0; m < chain; ++m) {
                if (bobs_json[m].contains("angles"))
                    free_bobs[m].angles = bobs_json[m]["angles"].get<bool>();
                if (bobs_json[m].contains("lambda"))
                    free_bobs[m].lambda = bobs_json[m]["lambda"].get<bool>();
                if (bobs_json[m].contains("orthonormal"))
                    free_bobs[m].orthonormal = bobs_json[m]["orthonormal"].get<bool>();
            }
        }
    }

    ProblemConfig config{
        OptimizationProblem{std::move(scenario), objective, std::move(constraints), alice_free,
                            std::move(free_bobs)},
        Budget{},
        1};
    if (j.contains("budget")) {
        const json& b = j["budget"];
        if (b.contains("restarts"))
            config.budget.restarts = static_cast<int>(number_at(b["restarts"], "budget.restarts"));
        if (b.contains("iterations"))
            config.budget.iterations =
                static_cast<int>(number_at(b["iterations"], "budget.iterations"));
    }
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    return config;
}

std::string serialize_result(const OptimizationResult& result) {
    json j;
    j["best_value"] = result.best_value;
    j["feasible"] = result.feasible;
    j["converged"] = result.converged;
    j["restarts_used"] = result.restarts_used;
    j["evaluations"] = result.evaluations;
    j["constraint_residuals"] = result.constraint_residuals;
    if (!result.message.empty()) j["message"] = result.message;
    if (result.argmax) j["argmax"] = scenario_to_json(*result.argmax);
    return j.dump(2);
}

std::string serialize_sweep(const SweepResult& sweep) {
    json j;
    j["which"] = sweep.which;
    j["bound"] = sweep.bound;
    j["rows"] = json::array();
    for (const SweepRow& row : sweep.rows) {
        json values = json::object();
        for (const auto& [bob, value] : row.values) values["bob" + std::to_string(bob)] = value;
        j["rows"].push_back(
            {{"lambda", row.lambda}, {"values", values}, {"all_violate", row.all_violate}});
    }
    j["window_found"] = sweep.window_found;
    if (sweep.window_found) {
        j["window"] = {sweep.window_low, sweep.window_high};
        j["window_contiguous"] = sweep.window_contiguous;
    }
    return j.dump(2);
}

std::string serialize_conjecture(const std::vector<ConjectureRow>& rows) {
    json j = json::array();
    for (const ConjectureRow& row : rows) {
        json r;
        r["bob"] = row.bob_index;
        r["max_value"] = row.result.best_value;
        r["feasible"] = row.result.feasible;
        r["converged"] = row.result.converged;
        if (!row.result.message.empty()) r["message"] = row.result.message;
        j.push_back(r);
    }
    return j.dump(2);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

}  // namespace steering
