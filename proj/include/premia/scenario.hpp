#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "premia/equilibrium.hpp"
#include "premia/market.hpp"

namespace premia {

/// A fully resolved scenario file (schema_version 1): the two component risk
/// distributions, the participating insurers, optional per-book premium
/// overrides, and run controls.
struct Scenario {
    DiscreteDist risk1_dist;
    DiscreteDist risk2_dist;
    std::vector<MarketParticipant> insurers;
    BookOverrides overrides;
    double tolerance = 1e-9;
    int max_rounds = 200;
    std::uint64_t seed = 0;
    std::optional<double> insured_rho;
};

/// Parses and validates scenario JSON. Throws ScenarioError with the JSON
/// field path on any schema violation.
Scenario parse_scenario_text(const std::string& json_text);

/// Reads the file and parses it. Missing or unreadable files raise
/// ScenarioError.
Scenario load_scenario(const std::string& path);

/// Builds the initial market state for a scenario. Throws HypothesisViolation
/// when any quote book resolves empty.
MarketState resolve_market(const Scenario& scenario);

/// resolve_market + run_equilibrium, wiring the tolerance, round limit and
/// optional insured valuation from the scenario.
EquilibriumReport run_scenario(const Scenario& scenario);

/// One row per round, fixed column order
/// round,P,P1,P2,delta,action,pi1_or_Pi1,pi2_or_Pi2,Pi; numbers carry
/// 17 significant digits so reruns are byte-identical.
std::string emit_trace_csv(const EquilibriumReport& report);

/// Report as a JSON document, same 17-significant-digit rule.
std::string emit_report_json(const EquilibriumReport& report);

} // namespace premia
