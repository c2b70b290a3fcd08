#pragma once

#include <string>

#include "premia/dist.hpp"
#include "premia/errors.hpp"

namespace premia {

/// Positive risk-tolerance parameter of the exponential disutility family.
/// Larger values mean less risk aversion.
class RiskTolerance {
public:
    explicit RiskTolerance(double value);
    double value() const { return value_; }

private:
    double value_;
};

/// Pricing agent: quotes each risk at its indifference premium marked up by a
/// fractional loading plus a flat administrative cost.
struct InsurerProfile {
    std::string id;
    RiskTolerance rho;
    double loading = 0.0;
    double admin_cost = 0.0;
};

/// Exponential disutility of a certain loss l >= 0:
/// rho * (exp(l / rho) - 1). Strictly increasing and strictly convex.
double disutility(double loss, RiskTolerance rho);

/// Certainty-equivalent premium of a random loss under exponential
/// disutility: rho * ln E[exp(X / rho)], evaluated with a max-shift so small
/// tolerances cannot overflow. Always >= expectation(d), with equality only
/// for a point mass.
double indifference_premium(const DiscreteDist& d, RiskTolerance rho);

/// (1 + loading) * indifference_premium + admin_cost.
double quote_premium(const InsurerProfile& insurer, const DiscreteDist& d);

} // namespace premia
