#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ulam/numeric.hpp"

namespace ulam {

/// An ordered interval partition of [0,1].
///
/// Cells are indexed 0-based in code; every serialized artifact (JSON, CSV,
/// coordinate files) uses 1-based indices so that the first cell -- the one
/// containing the origin -- is cell 1.
class Partition {
public:
    /// The trivial partition {[0,1]}.
    Partition() : Partition(std::vector<double>{0.0, 1.0}) {}
    /// Breakpoints must start at 0, end at 1 and be strictly increasing.
    explicit Partition(std::vector<double> breakpoints);

    std::size_t size() const { return breakpoints_.size() - 1; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    Interval cell(std::size_t i) const { return {breakpoints_[i], breakpoints_[i + 1]}; }
    double cell_length(std::size_t i) const { return breakpoints_[i + 1] - breakpoints_[i]; }

    /// Diameter: the largest cell length.
    double delta() const { return delta_; }
    /// Largest ratio of two cell lengths (>= 1).
    double ratio_K() const { return ratio_K_; }

    /// Index of the cell containing x; cells own their left endpoint, the
    /// last cell is closed. Throws std::domain_error outside [0,1].
    std::size_t locate(double x) const;

private:
    std::vector<double> breakpoints_;
    double delta_ = 0.0;
    double ratio_K_ = 1.0;
};

/// n equal cells with breakpoints computed as i/n (not by accumulation).
Partition uniform_partition(std::size_t n);

/// Pseudo-random cell lengths drawn uniformly from [1/(n*sqrt(K)), sqrt(K)/n]
/// and normalized, so the length-ratio bound K holds by construction.
/// Deterministic in the seed. K == 1 degenerates to the uniform partition.
Partition quasi_uniform_partition(std::size_t n, double K, std::uint64_t seed);

} // namespace ulam
