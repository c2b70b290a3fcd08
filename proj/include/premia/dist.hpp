#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "premia/errors.hpp"

namespace premia {

/// Support points closer than this collapse to a single point during
/// convolution; constructors reject supports with smaller gaps.
inline constexpr double kSupportMergeTol = 1e-9;

/// Total probability mass must stay within this of 1 on construction.
inline constexpr double kMassTol = 1e-12;

/// Convolution outputs with more support points than this are refused.
inline constexpr std::size_t kDefaultConvolveSizeCap = 1'000'000;

/// Finite discrete loss distribution: ascending nonnegative support plus
/// matching probability masses. Values are immutable after construction and
/// safe to share across threads.
class DiscreteDist {
public:
    /// support strictly ascending with gaps >= kSupportMergeTol, all points
    /// finite and >= 0; masses >= 0 and summing to 1 within kMassTol.
    /// Throws InvalidDistribution otherwise.
    DiscreteDist(std::vector<double> support, std::vector<double> masses);

    static DiscreteDist point_mass(double loss);

    /// (loss, probability) pairs in any order. Masses are taken as given:
    /// they must already sum to 1 within kMassTol, and no two losses may lie
    /// within kSupportMergeTol of each other.
    static DiscreteDist from_points(std::vector<std::pair<double, double>> points);

    // Parametric families. These renormalize their masses on construction;
    // a per-event loss of exactly 0 degenerates to a point mass at 0, while
    // 0 < loss < kSupportMergeTol is rejected.
    static DiscreteDist bernoulli(double q, double loss);
    static DiscreteDist binomial(int n, double q, double per_event_loss);
    /// Poisson event count truncated at the smallest N whose CDF reaches
    /// cutoff_quantile (>= 1 - 1e-9), then renormalized.
    static DiscreteDist truncated_poisson(double lambda, double per_event_loss,
                                          double cutoff_quantile);

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& masses() const { return masses_; }
    std::size_t size() const { return support_.size(); }

private:
    DiscreteDist() = default;
    static DiscreteDist checked(std::vector<double> support, std::vector<double> masses,
                                double mass_tol);

    std::vector<double> support_;
    std::vector<double> masses_;

    friend DiscreteDist convolve(const DiscreteDist&, const DiscreteDist&, std::size_t);
};

/// Distribution of the sum of two independent losses. Exact pairwise
/// enumeration; output points closer than kSupportMergeTol are merged onto
/// the smallest point of their cluster. Throws SizeLimitError when the
/// result would exceed size_cap support points.
DiscreteDist convolve(const DiscreteDist& a, const DiscreteDist& b,
                      std::size_t size_cap = kDefaultConvolveSizeCap);

/// True iff the two distributions agree pointwise within tol after aligning
/// supports under kSupportMergeTol; unmatched points must carry mass <= tol.
bool dist_equal(const DiscreteDist& a, const DiscreteDist& b, double tol);

/// Mean loss.
double expectation(const DiscreteDist& d);

/// E[exp(theta * X)], theta > 0. Throws NumericRangeError on overflow.
double exp_moment(const DiscreteDist& d, double theta);

} // namespace premia
