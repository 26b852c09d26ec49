#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace ulam {

/// Closed interval [lo, hi] on the real line. Degenerate (lo == hi) is
/// allowed; callers that need a nonempty interior must check length().
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Compensated (Kahan) summation. Used wherever a mass balance is asserted
/// against a 1e-12-scale tolerance and plain accumulation over ~1e5 terms
/// would eat into the budget.
inline double kahan_sum(std::span<const double> xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline double l1_norm(std::span<const double> xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        double y = std::fabs(x) - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace ulam
