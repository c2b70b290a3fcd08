#include "premia/pricing.hpp"

#include <cmath>

#include "accurate_sum.hpp"

namespace premia {

RiskTolerance::RiskTolerance(double value) : value_(value) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw PreconditionError("risk tolerance must be finite and > 0");
    }
}

double disutility(double loss, RiskTolerance rho) {
    if (!std::isfinite(loss) || loss < 0.0) {
        throw PreconditionError("disutility: loss must be finite and >= 0");
    }
    const double result = rho.value() * std::expm1(loss / rho.value());
    if (!std::isfinite(result)) {
        throw NumericRangeError("disutility overflows for loss / rho = " +
                                std::to_string(loss / rho.value()));
    }
    return result;
}

double indifference_premium(const DiscreteDist& d, RiskTolerance rho) {
    // rho * ln sum_i p_i exp(x_i / rho), shifted by the largest support point:
    // the shifted terms all lie in (0, 1], so no theta can overflow the sum.
    const double x_max = d.support().back();
    detail::AccurateSum sum;
    for (std::size_t i = 0; i < d.size(); ++i) {
        sum.add(d.masses()[i] * std::exp((d.support()[i] - x_max) / rho.value()));
    }
    return x_max + rho.value() * std::log(sum.value());
}

double quote_premium(const InsurerProfile& insurer, const DiscreteDist& d) {
    return (1.0 + insurer.loading) * indifference_premium(d, insurer.rho) + insurer.admin_cost;
}

} // namespace premia
