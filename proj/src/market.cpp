#include "premia/market.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace premia {
namespace {

// Consistency tolerance for dist(K) == dist(K1) * dist(K2).
constexpr double kGlobalRiskTol = 1e-11;

void validate_profile(const InsurerProfile& profile) {
    if (profile.id.empty()) {
        throw PreconditionError("insurer id must not be empty");
    }
    if (!std::isfinite(profile.loading) || profile.loading < 0.0) {
        throw PreconditionError("insurer '" + profile.id + "': loading must be >= 0");
    }
    if (!std::isfinite(profile.admin_cost) || profile.admin_cost < 0.0) {
        throw PreconditionError("insurer '" + profile.id + "': admin_cost must be >= 0");
    }
}

void push_initial_quote(MarketState& state, const InsurerProfile& insurer, RiskId risk_id,
                        const DiscreteDist& dist) {
    const double premium = quote_premium(insurer, dist);
    if (!(premium > 0.0)) {
        throw HypothesisViolation("insurer '" + insurer.id + "' quotes a nonpositive premium for " +
                                  to_string(risk_id) + "; coverages must cost something");
    }
    state.book(risk_id).push_back(Quote{insurer.id, risk_id, premium, QuoteOrigin::Initial});
}

void apply_override(MarketState& state, RiskId risk_id, const std::vector<BookOverride>& entries) {
    if (entries.empty()) {
        return;
    }
    std::vector<Quote> book;
    book.reserve(entries.size());
    for (const auto& entry : entries) {
        const bool known = std::any_of(state.insurers.begin(), state.insurers.end(),
                                       [&](const InsurerProfile& p) { return p.id == entry.insurer_id; });
        if (!known) {
            throw PreconditionError("override for " + std::string(to_string(risk_id)) +
                                    " names unknown insurer '" + entry.insurer_id + "'");
        }
        if (!std::isfinite(entry.premium) || !(entry.premium > 0.0)) {
            throw HypothesisViolation("override premium for " + std::string(to_string(risk_id)) +
                                      " must be finite and > 0");
        }
        book.push_back(Quote{entry.insurer_id, risk_id, entry.premium, QuoteOrigin::Initial});
    }
    state.book(risk_id) = std::move(book);
}

} // namespace

const char* to_string(RiskId id) {
    switch (id) {
    case RiskId::K1: return "K1";
    case RiskId::K2: return "K2";
    case RiskId::K: return "K";
    }
    return "?";
}

const char* to_string(QuoteOrigin origin) {
    switch (origin) {
    case QuoteOrigin::Initial: return "initial";
    case QuoteOrigin::SplitOffer: return "split_offer";
    case QuoteOrigin::CoalitionOffer: return "coalition_offer";
    }
    return "?";
}

const std::vector<Quote>& MarketState::book(RiskId id) const {
    switch (id) {
    case RiskId::K1: return book_k1;
    case RiskId::K2: return book_k2;
    default: return book_k;
    }
}

std::vector<Quote>& MarketState::book(RiskId id) {
    switch (id) {
    case RiskId::K1: return book_k1;
    case RiskId::K2: return book_k2;
    default: return book_k;
    }
}

MarketState build_market(const std::vector<MarketParticipant>& participants,
                         const DiscreteDist& risk1_dist, const DiscreteDist& risk2_dist,
                         const BookOverrides& overrides) {
    if (participants.empty()) {
        throw HypothesisViolation("the market must contain at least one insurer");
    }
    std::set<std::string> seen;
    for (const auto& participant : participants) {
        validate_profile(participant.profile);
        if (!seen.insert(participant.profile.id).second) {
            throw PreconditionError("duplicate insurer id '" + participant.profile.id + "'");
        }
    }

    DiscreteDist global = convolve(risk1_dist, risk2_dist);
    MarketState state{
        {},
        Risk{RiskId::K1, risk1_dist},
        Risk{RiskId::K2, risk2_dist},
        Risk{RiskId::K, std::move(global)},
        {},
        {},
        {},
        0,
    };
    state.insurers.reserve(participants.size());
    for (const auto& participant : participants) {
        state.insurers.push_back(participant.profile);
    }
    for (const auto& participant : participants) {
        if (participant.quotes_k1) {
            push_initial_quote(state, participant.profile, RiskId::K1, state.risk1.dist);
        }
        if (participant.quotes_k2) {
            push_initial_quote(state, participant.profile, RiskId::K2, state.risk2.dist);
        }
        if (participant.quotes_k) {
            push_initial_quote(state, participant.profile, RiskId::K, state.risk_global.dist);
        }
    }

    apply_override(state, RiskId::K1, overrides.k1);
    apply_override(state, RiskId::K2, overrides.k2);
    apply_override(state, RiskId::K, overrides.k);

    for (RiskId id : {RiskId::K1, RiskId::K2, RiskId::K}) {
        if (state.book(id).empty()) {
            throw HypothesisViolation(std::string("no coverage offered for ") + to_string(id) +
                                      "; the market must offer at least one per risk");
        }
    }
    return state;
}

MarketState build_market(const std::vector<InsurerProfile>& insurers,
                         const DiscreteDist& risk1_dist, const DiscreteDist& risk2_dist) {
    std::vector<MarketParticipant> participants;
    participants.reserve(insurers.size());
    for (const auto& insurer : insurers) {
        participants.push_back(MarketParticipant{insurer});
    }
    return build_market(participants, risk1_dist, risk2_dist);
}

const Quote& best_quote(const MarketState& state, RiskId risk_id) {
    const auto& book = state.book(risk_id);
    if (book.empty()) {
        throw HypothesisViolation(std::string("empty quote book for ") + to_string(risk_id));
    }
    // Strict < keeps the earliest-inserted quote on ties; insertion order is
    // total, so the insurer-id tie-break can never actually fire.
    std::size_t best = 0;
    for (std::size_t i = 1; i < book.size(); ++i) {
        if (book[i].premium < book[best].premium) {
            best = i;
        }
    }
    return book[best];
}

double mispricing(const MarketState& state) {
    const double p = best_quote(state, RiskId::K).premium;
    const double p1 = best_quote(state, RiskId::K1).premium;
    const double p2 = best_quote(state, RiskId::K2).premium;
    return p - (p1 + p2);
}

bool purchase_feasible(const MarketState& state, RiskTolerance insured_rho) {
    const double p = best_quote(state, RiskId::K).premium;
    const double p1 = best_quote(state, RiskId::K1).premium;
    const double p2 = best_quote(state, RiskId::K2).premium;
    const double cheapest = std::min(p, p1 + p2);
    return cheapest <= indifference_premium(state.risk_global.dist, insured_rho);
}

void check_invariants(const MarketState& state) {
    if (state.insurers.empty()) {
        throw HypothesisViolation("state has no insurers");
    }
    if (state.round < 0) {
        throw PreconditionError("round must be nonnegative");
    }
    std::set<std::string> ids;
    for (const auto& insurer : state.insurers) {
        validate_profile(insurer);
        if (!ids.insert(insurer.id).second) {
            throw PreconditionError("duplicate insurer id '" + insurer.id + "'");
        }
    }
    for (RiskId id : {RiskId::K1, RiskId::K2, RiskId::K}) {
        const auto& book = state.book(id);
        if (book.empty()) {
            throw HypothesisViolation(std::string("empty quote book for ") + to_string(id));
        }
        for (const auto& quote : book) {
            if (!(quote.premium > 0.0) || !std::isfinite(quote.premium)) {
                throw HypothesisViolation("book " + std::string(to_string(id)) +
                                          " holds a nonpositive premium");
            }
            if (quote.risk_id != id) {
                throw ConsistencyError("quote filed under the wrong book");
            }
            if (ids.find(quote.insurer_id) == ids.end()) {
                throw ConsistencyError("quote from unknown insurer '" + quote.insurer_id + "'");
            }
        }
    }
    if (!dist_equal(state.risk_global.dist, convolve(state.risk1.dist, state.risk2.dist),
                    kGlobalRiskTol)) {
        throw ConsistencyError("global risk distribution drifted from the component convolution");
    }
}

} // namespace premia
