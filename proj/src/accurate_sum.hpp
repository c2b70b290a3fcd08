#pragma once

#include <cmath>

namespace premia::detail {

// Neumaier compensated summation; keeps probability-mass bookkeeping well
// under the 1e-12 invariant even for million-term convolutions.
class AccurateSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace premia::detail
