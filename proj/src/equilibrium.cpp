#include "premia/equilibrium.hpp"

#include <cmath>
#include <utility>

namespace premia {

EquilibriumReport run_equilibrium(MarketState state, double tol, int max_rounds,
                                  std::optional<RiskTolerance> insured_rho) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw PreconditionError("run_equilibrium: tol must be finite and > 0");
    }
    if (max_rounds < 0) {
        throw PreconditionError("run_equilibrium: max_rounds must be >= 0");
    }

    EquilibriumReport report;
    for (;;) {
        TraceRecord record;
        record.round = state.round;
        record.p = best_quote(state, RiskId::K).premium;
        record.p1 = best_quote(state, RiskId::K1).premium;
        record.p2 = best_quote(state, RiskId::K2).premium;
        record.delta = mispricing(state);

        const ArbitrageAction action = propose_action(state, tol);
        if (action.kind == ActionKind::NoAction) {
            record.action = action;
            report.trace.push_back(record);
            report.converged = true;
            break;
        }
        if (state.round >= max_rounds) {
            record.action.ref_p = record.p;
            record.action.ref_p1 = record.p1;
            record.action.ref_p2 = record.p2;
            report.trace.push_back(record);
            report.converged = false;
            break;
        }
        record.action = action;
        report.trace.push_back(record);
        state = apply(std::move(state), action);
    }

    report.rounds_used = state.round;
    const TraceRecord& last = report.trace.back();
    report.final_p = last.p;
    report.final_p1 = last.p1;
    report.final_p2 = last.p2;
    report.final_delta = last.delta;
    if (insured_rho) {
        report.purchase_feasible = purchase_feasible(state, *insured_rho);
    }
    return report;
}

} // namespace premia
