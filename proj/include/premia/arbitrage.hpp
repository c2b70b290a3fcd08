#pragma once

#include <string>

#include "premia/errors.hpp"
#include "premia/market.hpp"

namespace premia {

/// Sign of the mispricing Delta = P - (P1 + P2) relative to a tolerance.
enum class MarketRegime { Underpriced, Overpriced, Equilibrium };

enum class ActionKind { SplitOffer, CoalitionOffer, NoAction };

const char* to_string(MarketRegime regime);
const char* to_string(ActionKind kind);

/// Component premiums obtained by splitting an underpriced global policy.
struct SplitPremiums {
    double premium1;
    double premium2;
};

/// Coalition against an overpriced global policy: the lead insurer fronts the
/// global risk at global_premium and pays reinsurance_premium to the
/// reinsurer for the second component, keeping lead_net_premium.
struct CoalitionPremiums {
    double global_premium;
    double lead_net_premium;
    double reinsurance_premium;
};

/// One arbitrage step, flattened across both strategies.
///
/// SplitOffer: actor_id is the global best quoter; premium1/premium2 are the
/// component quotes it places (premium1 + premium2 = P).
/// CoalitionOffer: actor_id leads and quotes global_premium on the global
/// book; reinsurer_id receives premium2 bilaterally, the lead keeps premium1
/// (premium1 + premium2 = global_premium).
/// ref_p / ref_p1 / ref_p2 snapshot the best quotes the action was derived
/// from; apply() rejects the action if they have changed since.
struct ArbitrageAction {
    ActionKind kind = ActionKind::NoAction;
    std::string actor_id;
    std::string reinsurer_id;
    double premium1 = 0.0;
    double premium2 = 0.0;
    double global_premium = 0.0;
    double ref_p = 0.0;
    double ref_p1 = 0.0;
    double ref_p2 = 0.0;
};

/// Underpriced iff Delta < -tol, Overpriced iff Delta > tol, else Equilibrium.
MarketRegime classify(const MarketState& state, double tol);

/// Proportional split of an underpriced global premium, 0 < p < p1 + p2:
/// premium_i = p * p_i / (p1 + p2). Both component premiums then undercut
/// the standing best quotes strictly.
SplitPremiums split_offer(double p, double p1, double p2);

/// Coalition terms for an overpriced global premium, p > p1 + p2 > 0:
/// global = (p + p1 + p2) / 2, reinsurance = p2 + (p - p1 - p2) / 4, lead
/// keeps the rest. The global quote undercuts p while both members earn more
/// than their standalone premiums.
CoalitionPremiums coalition_offer(double p, double p1, double p2);

/// Classifies the state and builds the implied action from its best quotes.
ArbitrageAction propose_action(const MarketState& state, double tol);

/// Executes an action: appends the offered quotes to the books and advances
/// the round. Books only grow. Throws ConsistencyError when the action is
/// stale or internally inconsistent.
MarketState apply(MarketState state, const ArbitrageAction& action);

} // namespace premia
