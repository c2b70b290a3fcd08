#include "premia/arbitrage.hpp"

#include <cmath>
#include <utility>

namespace premia {
namespace {

constexpr double kConservationTol = 1e-12;

void check_fresh(const MarketState& state, const ArbitrageAction& action) {
    const double p = best_quote(state, RiskId::K).premium;
    const double p1 = best_quote(state, RiskId::K1).premium;
    const double p2 = best_quote(state, RiskId::K2).premium;
    if (p != action.ref_p || p1 != action.ref_p1 || p2 != action.ref_p2) {
        throw ConsistencyError("stale arbitrage action: best quotes changed since it was derived");
    }
}

} // namespace

const char* to_string(MarketRegime regime) {
    switch (regime) {
    case MarketRegime::Underpriced: return "underpriced";
    case MarketRegime::Overpriced: return "overpriced";
    case MarketRegime::Equilibrium: return "equilibrium";
    }
    return "?";
}

const char* to_string(ActionKind kind) {
    switch (kind) {
    case ActionKind::SplitOffer: return "split_offer";
    case ActionKind::CoalitionOffer: return "coalition_offer";
    case ActionKind::NoAction: return "none";
    }
    return "?";
}

MarketRegime classify(const MarketState& state, double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw PreconditionError("classify: tol must be finite and > 0");
    }
    const double delta = mispricing(state);
    if (delta < -tol) {
        return MarketRegime::Underpriced;
    }
    if (delta > tol) {
        return MarketRegime::Overpriced;
    }
    return MarketRegime::Equilibrium;
}

SplitPremiums split_offer(double p, double p1, double p2) {
    if (!(p1 > 0.0) || !(p2 > 0.0)) {
        throw PreconditionError("split_offer: component premiums must be > 0");
    }
    const double s = p1 + p2;
    if (!(p > 0.0) || !(p < s)) {
        throw PreconditionError("split_offer requires 0 < p < p1 + p2");
    }
    // premium2 as the remainder keeps premium1 + premium2 == p to the bit.
    const double premium1 = p * (p1 / s);
    return SplitPremiums{premium1, p - premium1};
}

CoalitionPremiums coalition_offer(double p, double p1, double p2) {
    if (!(p1 > 0.0) || !(p2 > 0.0)) {
        throw PreconditionError("coalition_offer: component premiums must be > 0");
    }
    const double s = p1 + p2;
    if (!(p > s)) {
        throw PreconditionError("coalition_offer requires p > p1 + p2");
    }
    // Evaluate through the gap p - s: the new mispricing then halves along
    // exactly the arithmetic the driver uses to measure it.
    const double gap = p - s;
    const double global = s + gap / 2.0;
    const double reinsurance = p2 + gap / 4.0;
    return CoalitionPremiums{global, global - reinsurance, reinsurance};
}

ArbitrageAction propose_action(const MarketState& state, double tol) {
    const Quote& global_best = best_quote(state, RiskId::K);
    const Quote& best1 = best_quote(state, RiskId::K1);
    const Quote& best2 = best_quote(state, RiskId::K2);

    ArbitrageAction action;
    action.ref_p = global_best.premium;
    action.ref_p1 = best1.premium;
    action.ref_p2 = best2.premium;

    switch (classify(state, tol)) {
    case MarketRegime::Underpriced: {
        const SplitPremiums split = split_offer(action.ref_p, action.ref_p1, action.ref_p2);
        action.kind = ActionKind::SplitOffer;
        action.actor_id = global_best.insurer_id;
        action.premium1 = split.premium1;
        action.premium2 = split.premium2;
        break;
    }
    case MarketRegime::Overpriced: {
        const CoalitionPremiums terms =
            coalition_offer(action.ref_p, action.ref_p1, action.ref_p2);
        action.kind = ActionKind::CoalitionOffer;
        action.actor_id = best1.insurer_id;
        action.reinsurer_id = best2.insurer_id;
        action.premium1 = terms.lead_net_premium;
        action.premium2 = terms.reinsurance_premium;
        action.global_premium = terms.global_premium;
        break;
    }
    case MarketRegime::Equilibrium:
        action.kind = ActionKind::NoAction;
        break;
    }
    return action;
}

MarketState apply(MarketState state, const ArbitrageAction& action) {
    switch (action.kind) {
    case ActionKind::NoAction:
        break;
    case ActionKind::SplitOffer: {
        check_fresh(state, action);
        if (!(action.premium1 > 0.0) || !(action.premium2 > 0.0) ||
            std::abs(action.premium1 + action.premium2 - action.ref_p) > kConservationTol) {
            throw ConsistencyError("split offer premiums do not decompose the global premium");
        }
        state.book_k1.push_back(
            Quote{action.actor_id, RiskId::K1, action.premium1, QuoteOrigin::SplitOffer});
        state.book_k2.push_back(
            Quote{action.actor_id, RiskId::K2, action.premium2, QuoteOrigin::SplitOffer});
        break;
    }
    case ActionKind::CoalitionOffer: {
        check_fresh(state, action);
        const bool conserves =
            std::abs(action.premium1 + action.premium2 - action.global_premium) <=
            kConservationTol;
        if (!conserves || !(action.global_premium < action.ref_p) ||
            !(action.premium1 > action.ref_p1) || !(action.premium2 > action.ref_p2)) {
            throw ConsistencyError("coalition offer violates its premium inequalities");
        }
        // Only the global quote reaches the market; the reinsurance leg is a
        // bilateral contract between the two coalition members.
        state.book_k.push_back(
            Quote{action.actor_id, RiskId::K, action.global_premium, QuoteOrigin::CoalitionOffer});
        break;
    }
    }
    state.round += 1;
    return state;
}

} // namespace premia
