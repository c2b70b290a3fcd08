// Command-line front end: run a scenario to equilibrium, validate a scenario,
// or sweep one parameter across a list of values.
//
// Exit codes: 0 converged (or valid), 2 not converged, 3 invalid scenario,
// 4 hypothesis violation (e.g. an empty quote book).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "premia/scenario.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInvalidScenario = 3;
constexpr int kExitHypothesisViolation = 4;
constexpr int kExitInternal = 1;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    out << content;
}

void print_summary(const premia::EquilibriumReport& report) {
    std::cout << "converged=" << (report.converged ? "true" : "false")
              << " rounds=" << report.rounds_used << " P=" << fmt17(report.final_p)
              << " P1=" << fmt17(report.final_p1) << " P2=" << fmt17(report.final_p2)
              << " delta=" << fmt17(report.final_delta);
    if (report.purchase_feasible) {
        std::cout << " purchase_feasible=" << (*report.purchase_feasible ? "true" : "false");
    }
    std::cout << "\n";
}

int run_command(const std::string& scenario_path, std::optional<double> tolerance,
                std::optional<int> max_rounds, const std::string& trace_path,
                const std::string& report_path) {
    premia::Scenario scenario = premia::load_scenario(scenario_path);
    if (tolerance) {
        if (!(*tolerance > 0.0)) {
            throw premia::ScenarioError("--tolerance must be > 0");
        }
        scenario.tolerance = *tolerance;
    }
    if (max_rounds) {
        if (*max_rounds < 1) {
            throw premia::ScenarioError("--max-rounds must be >= 1");
        }
        scenario.max_rounds = *max_rounds;
    }
    const premia::EquilibriumReport report = premia::run_scenario(scenario);
    if (!trace_path.empty()) {
        write_file(trace_path, premia::emit_trace_csv(report));
    }
    if (!report_path.empty()) {
        write_file(report_path, premia::emit_report_json(report));
    }
    print_summary(report);
    return report.converged ? kExitConverged : kExitNotConverged;
}

int check_command(const std::string& scenario_path) {
    const premia::Scenario scenario = premia::load_scenario(scenario_path);
    const premia::MarketState state = premia::resolve_market(scenario);
    std::cout << "scenario ok: " << state.insurers.size() << " insurer(s), books K1/K2/K sizes "
              << state.book_k1.size() << "/" << state.book_k2.size() << "/"
              << state.book_k.size() << ", initial delta=" << fmt17(premia::mispricing(state))
              << "\n";
    return kExitConverged;
}

// Accepts either a bare top-level scalar key (tolerance, max_rounds, seed,
// insured_rho) or a JSON pointer such as /insurers/0/loading.
nlohmann::json::json_pointer resolve_param(const std::string& param, const nlohmann::json& doc) {
    if (!param.empty() && param.front() == '/') {
        const nlohmann::json::json_pointer ptr(param);
        const nlohmann::json::json_pointer parent = ptr.parent_pointer();
        if (!doc.contains(parent)) {
            throw premia::ScenarioError("sweep parameter '" + param + "' has no parent in the scenario");
        }
        return ptr;
    }
    if (param == "tolerance" || param == "max_rounds" || param == "seed" ||
        param == "insured_rho") {
        return nlohmann::json::json_pointer("/" + param);
    }
    throw premia::ScenarioError("unknown sweep parameter '" + param +
                                "' (use a known scalar key or a JSON pointer starting with '/')");
}

int sweep_command(const std::string& scenario_path, const std::string& param,
                  const std::vector<std::string>& values, const std::string& out_dir,
                  bool with_traces) {
    std::ifstream in(scenario_path, std::ios::binary);
    if (!in) {
        throw premia::ScenarioError("cannot open scenario file '" + scenario_path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw premia::ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    const nlohmann::json::json_pointer ptr = resolve_param(param, doc);

    std::filesystem::create_directories(out_dir);
    bool all_converged = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        nlohmann::json value;
        try {
            value = nlohmann::json::parse(values[i]);
        } catch (const nlohmann::json::parse_error&) {
            throw premia::ScenarioError("sweep value '" + values[i] + "' is not a JSON scalar");
        }
        nlohmann::json variant = doc;
        variant[ptr] = value;
        const premia::Scenario scenario = premia::parse_scenario_text(variant.dump());
        const premia::EquilibriumReport report = premia::run_scenario(scenario);
        char stem[32];
        std::snprintf(stem, sizeof(stem), "sweep_%03zu", i);
        write_file(out_dir + "/" + stem + ".report.json", premia::emit_report_json(report));
        if (with_traces) {
            write_file(out_dir + "/" + stem + ".trace.csv", premia::emit_trace_csv(report));
        }
        std::cout << param << "=" << values[i] << " ";
        print_summary(report);
        all_converged = all_converged && report.converged;
    }
    return all_converged ? kExitConverged : kExitNotConverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"no-arbitrage insurance pricing simulator: prices two independent risks and"
                 " their composition, then iterates arbitrage offers until P = P1 + P2"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::optional<double> tolerance;
    std::optional<int> max_rounds;
    std::string trace_path, report_path;

    CLI::App* run = app.add_subcommand("run", "run a scenario to equilibrium");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--tolerance", tolerance, "override the scenario tolerance");
    run->add_option("--max-rounds", max_rounds, "override the scenario round limit");
    run->add_option("--trace", trace_path, "write the per-round trace CSV here");
    run->add_option("--report", report_path, "write the report JSON here");

    CLI::App* check = app.add_subcommand("check", "validate a scenario without running it");
    check->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    std::string param, out_dir = ".";
    std::vector<std::string> values;
    bool sweep_traces = false;
    CLI::App* sweep = app.add_subcommand("sweep", "run the scenario once per parameter value");
    sweep->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sweep->add_option("--param", param,
                      "scalar key (tolerance, max_rounds, seed, insured_rho) or JSON pointer")
        ->required();
    sweep->add_option("--values", values, "comma-separated list of values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out-dir", out_dir, "directory for per-value reports");
    sweep->add_flag("--trace", sweep_traces, "also write per-value trace CSVs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(scenario_path, tolerance, max_rounds, trace_path, report_path);
        }
        if (check->parsed()) {
            return check_command(scenario_path);
        }
        return sweep_command(scenario_path, param, values, out_dir, sweep_traces);
    } catch (const premia::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitInvalidScenario;
    } catch (const premia::HypothesisViolation& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return kExitHypothesisViolation;
    } catch (const premia::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidScenario;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
