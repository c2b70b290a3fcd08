#pragma once

#include <optional>
#include <vector>

#include "premia/arbitrage.hpp"
#include "premia/market.hpp"

namespace premia {

/// Per-round snapshot: the best quotes before acting plus the action taken
/// that round (kind NoAction on the final row).
struct TraceRecord {
    int round = 0;
    double p = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double delta = 0.0;
    ArbitrageAction action;
};

struct EquilibriumReport {
    bool converged = false;
    int rounds_used = 0;
    double final_p = 0.0;
    double final_p1 = 0.0;
    double final_p2 = 0.0;
    double final_delta = 0.0;
    std::vector<TraceRecord> trace; // rounds_used + 1 records, round 0 included
    std::optional<bool> purchase_feasible;
};

/// Iterates classify -> offer -> apply, one action per round, until the
/// mispricing falls within tol or max_rounds actions have been taken.
/// Non-convergence is reported, never thrown. When insured_rho is given the
/// report carries the purchase-feasibility diagnostic for the final state.
EquilibriumReport run_equilibrium(MarketState state, double tol, int max_rounds,
                                  std::optional<RiskTolerance> insured_rho = std::nullopt);

} // namespace premia
