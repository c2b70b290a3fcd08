#include "premia/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>

#include "accurate_sum.hpp"

namespace premia {
namespace {

// Convolution mass drift is bounded by the product of the two input drifts,
// so outputs get a slightly looser bookkeeping tolerance than constructions
// from user data.
constexpr double kConvolveMassTol = 1e-11;

// Hard bound on enumerated (i, j) pairs, so heavily collapsing grids
// (integer supports) stay usable without letting memory blow up.
constexpr std::size_t kConvolvePairLimit = 16'000'000;

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void validate_event_loss(double loss, const char* family) {
    if (!std::isfinite(loss) || loss < 0.0) {
        throw PreconditionError(std::string(family) + ": per-event loss must be finite and >= 0");
    }
    if (loss > 0.0 && loss < kSupportMergeTol) {
        throw PreconditionError(std::string(family) +
                                ": per-event loss lies below the support merge tolerance");
    }
}

} // namespace

DiscreteDist DiscreteDist::checked(std::vector<double> support, std::vector<double> masses,
                                   double mass_tol) {
    if (support.empty()) {
        throw InvalidDistribution("support must contain at least one point");
    }
    if (support.size() != masses.size()) {
        throw InvalidDistribution("support and masses must have the same length");
    }
    detail::AccurateSum total;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!std::isfinite(support[i]) || support[i] < 0.0) {
            throw InvalidDistribution("support[" + std::to_string(i) +
                                      "] must be finite and >= 0, got " +
                                      format_double(support[i]));
        }
        if (i > 0 && support[i] - support[i - 1] < kSupportMergeTol) {
            throw InvalidDistribution("support[" + std::to_string(i) +
                                      "] lies within the merge tolerance of its predecessor");
        }
        if (!std::isfinite(masses[i]) || masses[i] < 0.0) {
            throw InvalidDistribution("masses[" + std::to_string(i) +
                                      "] must be finite and >= 0, got " +
                                      format_double(masses[i]));
        }
        total.add(masses[i]);
    }
    const double sum = total.value();
    if (std::abs(sum - 1.0) > mass_tol) {
        throw InvalidDistribution("masses sum to " + format_double(sum) +
                                  ", expected 1 within " + format_double(mass_tol));
    }
    DiscreteDist d;
    d.support_ = std::move(support);
    d.masses_ = std::move(masses);
    return d;
}

DiscreteDist::DiscreteDist(std::vector<double> support, std::vector<double> masses) {
    *this = checked(std::move(support), std::move(masses), kMassTol);
}

DiscreteDist DiscreteDist::point_mass(double loss) {
    return DiscreteDist({loss}, {1.0});
}

DiscreteDist DiscreteDist::from_points(std::vector<std::pair<double, double>> points) {
    if (points.empty()) {
        throw InvalidDistribution("point list must not be empty");
    }
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> support, masses;
    support.reserve(points.size());
    masses.reserve(points.size());
    for (const auto& [loss, mass] : points) {
        support.push_back(loss);
        masses.push_back(mass);
    }
    return DiscreteDist(std::move(support), std::move(masses));
}

DiscreteDist DiscreteDist::bernoulli(double q, double loss) {
    if (!std::isfinite(q) || q < 0.0 || q > 1.0) {
        throw PreconditionError("bernoulli: q must lie in [0, 1]");
    }
    validate_event_loss(loss, "bernoulli");
    if (q == 0.0 || loss == 0.0) {
        return point_mass(0.0);
    }
    if (q == 1.0) {
        return point_mass(loss);
    }
    const double total = (1.0 - q) + q;
    return checked({0.0, loss}, {(1.0 - q) / total, q / total}, kMassTol);
}

DiscreteDist DiscreteDist::binomial(int n, double q, double per_event_loss) {
    if (n < 0) {
        throw PreconditionError("binomial: n must be >= 0");
    }
    if (!std::isfinite(q) || q < 0.0 || q > 1.0) {
        throw PreconditionError("binomial: q must lie in [0, 1]");
    }
    validate_event_loss(per_event_loss, "binomial");
    if (n == 0 || q == 0.0 || per_event_loss == 0.0) {
        return point_mass(0.0);
    }
    if (q == 1.0) {
        return point_mass(static_cast<double>(n) * per_event_loss);
    }
    // Log-space weights shifted by their maximum, so large n cannot underflow
    // the bulk of the pmf.
    const double log_q = std::log(q);
    const double log_1mq = std::log1p(-q);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    std::vector<double> logw(static_cast<std::size_t>(n) + 1);
    double logw_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        logw[static_cast<std::size_t>(k)] = lgn - std::lgamma(dk + 1.0) -
                                            std::lgamma(static_cast<double>(n - k) + 1.0) +
                                            dk * log_q + static_cast<double>(n - k) * log_1mq;
        logw_max = std::max(logw_max, logw[static_cast<std::size_t>(k)]);
    }
    std::vector<double> support(logw.size()), weights(logw.size());
    detail::AccurateSum total;
    for (std::size_t k = 0; k < logw.size(); ++k) {
        support[k] = static_cast<double>(k) * per_event_loss;
        weights[k] = std::exp(logw[k] - logw_max);
        total.add(weights[k]);
    }
    const double norm = total.value();
    for (double& w : weights) {
        w /= norm;
    }
    return checked(std::move(support), std::move(weights), kMassTol);
}

DiscreteDist DiscreteDist::truncated_poisson(double lambda, double per_event_loss,
                                             double cutoff_quantile) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw PreconditionError("truncated_poisson: lambda must be finite and >= 0");
    }
    if (!std::isfinite(cutoff_quantile) || cutoff_quantile < 1.0 - 1e-9 || cutoff_quantile > 1.0) {
        throw PreconditionError("truncated_poisson: cutoff quantile must lie in [1 - 1e-9, 1]");
    }
    validate_event_loss(per_event_loss, "truncated_poisson");
    if (lambda == 0.0 || per_event_loss == 0.0) {
        return point_mass(0.0);
    }
    // Enumerate far enough into the tail that the window itself truncates
    // nothing that the cutoff quantile could still see.
    const std::size_t k_max =
        static_cast<std::size_t>(std::ceil(lambda + 40.0 * std::sqrt(lambda + 1.0) + 64.0));
    const double log_lambda = std::log(lambda);
    std::vector<double> logw(k_max + 1);
    double logw_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double dk = static_cast<double>(k);
        logw[k] = dk * log_lambda - std::lgamma(dk + 1.0);
        logw_max = std::max(logw_max, logw[k]);
    }
    std::vector<double> weights(logw.size());
    std::vector<double> prefix(logw.size());
    double running = 0.0;
    for (std::size_t k = 0; k < logw.size(); ++k) {
        weights[k] = std::exp(logw[k] - logw_max);
        running += weights[k];
        prefix[k] = running;
    }
    const double total = prefix.back();
    std::size_t cut = logw.size() - 1;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        if (prefix[k] >= cutoff_quantile * total) {
            cut = k;
            break;
        }
    }
    std::vector<double> support(cut + 1), masses(cut + 1);
    detail::AccurateSum kept;
    for (std::size_t k = 0; k <= cut; ++k) {
        support[k] = static_cast<double>(k) * per_event_loss;
        kept.add(weights[k]);
    }
    const double norm = kept.value();
    for (std::size_t k = 0; k <= cut; ++k) {
        masses[k] = weights[k] / norm;
    }
    return checked(std::move(support), std::move(masses), kMassTol);
}

DiscreteDist convolve(const DiscreteDist& a, const DiscreteDist& b, std::size_t size_cap) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t pair_limit = std::max(size_cap, kConvolvePairLimit);
    if (m != 0 && n > pair_limit / m) {
        throw SizeLimitError("convolution would enumerate " + std::to_string(n) + " x " +
                             std::to_string(m) + " pairs, above the size limit");
    }
    std::vector<std::pair<double, double>> acc;
    acc.reserve(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            acc.emplace_back(a.support()[i] + b.support()[j], a.masses()[i] * b.masses()[j]);
        }
    }
    std::sort(acc.begin(), acc.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<double> support, masses;
    std::size_t i = 0;
    while (i < acc.size()) {
        const double rep = acc[i].first;
        detail::AccurateSum cluster;
        while (i < acc.size() && acc[i].first - rep < kSupportMergeTol) {
            cluster.add(acc[i].second);
            ++i;
        }
        support.push_back(rep);
        masses.push_back(cluster.value());
        if (support.size() > size_cap) {
            throw SizeLimitError("convolution support exceeds the size cap of " +
                                 std::to_string(size_cap) + " points");
        }
    }
    return DiscreteDist::checked(std::move(support), std::move(masses), kConvolveMassTol);
}

bool dist_equal(const DiscreteDist& a, const DiscreteDist& b, double tol) {
    if (!(tol >= 0.0)) {
        throw PreconditionError("dist_equal: tol must be >= 0");
    }
    const auto& sa = a.support();
    const auto& sb = b.support();
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        if (std::abs(sa[i] - sb[j]) < kSupportMergeTol) {
            if (std::abs(a.masses()[i] - b.masses()[j]) > tol) {
                return false;
            }
            ++i;
            ++j;
        } else if (sa[i] < sb[j]) {
            if (a.masses()[i] > tol) {
                return false;
            }
            ++i;
        } else {
            if (b.masses()[j] > tol) {
                return false;
            }
            ++j;
        }
    }
    for (; i < sa.size(); ++i) {
        if (a.masses()[i] > tol) {
            return false;
        }
    }
    for (; j < sb.size(); ++j) {
        if (b.masses()[j] > tol) {
            return false;
        }
    }
    return true;
}

double expectation(const DiscreteDist& d) {
    detail::AccurateSum sum;
    for (std::size_t i = 0; i < d.size(); ++i) {
        sum.add(d.support()[i] * d.masses()[i]);
    }
    return sum.value();
}

double exp_moment(const DiscreteDist& d, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw PreconditionError("exp_moment: theta must be finite and > 0");
    }
    detail::AccurateSum sum;
    for (std::size_t i = 0; i < d.size(); ++i) {
        sum.add(d.masses()[i] * std::exp(theta * d.support()[i]));
    }
    const double result = sum.value();
    if (!std::isfinite(result)) {
        throw NumericRangeError("exp_moment overflows for theta = " + format_double(theta) +
                                " and max loss " + format_double(d.support().back()));
    }
    return result;
}

} // namespace premia
