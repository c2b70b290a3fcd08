#pragma once

#include <string>
#include <vector>

#include "premia/dist.hpp"
#include "premia/errors.hpp"
#include "premia/pricing.hpp"

namespace premia {

/// The two component risks and their composition.
enum class RiskId { K1, K2, K };

enum class QuoteOrigin { Initial, SplitOffer, CoalitionOffer };

const char* to_string(RiskId id);
const char* to_string(QuoteOrigin origin);

/// Identified loss exposure. The K entry always carries the convolution of
/// the two component distributions.
struct Risk {
    RiskId id;
    DiscreteDist dist;
};

/// Insurer-priced full coverage of one risk. Full coverage means the
/// indemnity distribution equals the risk distribution; only the premium and
/// its provenance vary per quote.
struct Quote {
    std::string insurer_id;
    RiskId risk_id;
    double premium;
    QuoteOrigin origin;
};

/// One insurer's participation: which of the three books it quotes into.
struct MarketParticipant {
    InsurerProfile profile;
    bool quotes_k1 = true;
    bool quotes_k2 = true;
    bool quotes_k = true;
};

/// Explicit premium placed on a book instead of the generated quote.
struct BookOverride {
    std::string insurer_id;
    double premium;
};

/// Per-book replacement lists; an empty list leaves the generated book as is.
struct BookOverrides {
    std::vector<BookOverride> k1, k2, k;
};

/// Snapshot of the market: insurers, the three risks, one append-only quote
/// book per risk, and the iteration round. Treated as a value; transitions
/// return new states.
struct MarketState {
    std::vector<InsurerProfile> insurers;
    Risk risk1;
    Risk risk2;
    Risk risk_global;
    std::vector<Quote> book_k1, book_k2, book_k;
    int round = 0;

    const std::vector<Quote>& book(RiskId id) const;
    std::vector<Quote>& book(RiskId id);
};

/// Assembles a market: convolves the component distributions into the global
/// risk and collects one initial quote per participating insurer per book,
/// then applies any overrides. Throws HypothesisViolation when the insurer
/// set is empty, a generated premium is not strictly positive, or any book
/// resolves empty.
MarketState build_market(const std::vector<MarketParticipant>& participants,
                         const DiscreteDist& risk1_dist, const DiscreteDist& risk2_dist,
                         const BookOverrides& overrides = {});

/// Convenience overload: every insurer quotes every risk.
MarketState build_market(const std::vector<InsurerProfile>& insurers,
                         const DiscreteDist& risk1_dist, const DiscreteDist& risk2_dist);

/// The quote a rational insured selects: minimal premium, ties broken by
/// earliest insertion, then smallest insurer id.
const Quote& best_quote(const MarketState& state, RiskId risk_id);

/// Delta = P - (P1 + P2) over the three best quotes.
double mispricing(const MarketState& state);

/// Diagnostic only: whether the cheaper of the two coverage routes costs no
/// more than the insured's own valuation of the global risk.
bool purchase_feasible(const MarketState& state, RiskTolerance insured_rho);

/// Re-checks all MarketState invariants (book nonemptiness, quote validity,
/// global-risk consistency with the component convolution). Test utility.
void check_invariants(const MarketState& state);

} // namespace premia
