#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ulam/interval_maps.hpp"
#include "ulam/numeric.hpp"
#include "ulam/partitions.hpp"

namespace ulam {

/// Normal form of a monotone measure on [0,1]: a point mass at the origin
/// plus a piecewise-constant density over a partition. The mass of cell i is
/// densities[i] * |cell i|. Probability normalization (total_mass() == 1) is
/// an invariant of pipeline-produced measures, checked where asserted rather
/// than enforced on construction.
struct StepMeasure {
    double atom0 = 0.0;
    Partition support;
    std::vector<double> densities;

    double total_mass() const;
};

/// Validates atom0 in [0,1], matching sizes, nonnegative densities.
StepMeasure make_step_measure(double atom0, Partition support, std::vector<double> densities);

/// mu(I) = atom0*[0 in I] + sum_i f_i |I ∩ cell_i| by breakpoint clipping.
double measure_of_interval(const StepMeasure& mu, Interval I);

/// measure_of_interval(mu, I) / |I|; zero-length intervals average to 0.
double avg_density(const StepMeasure& mu, Interval I);

struct MonotonicityCheck {
    bool monotonic = true;
    std::optional<std::size_t> first_violation; // left cell of the first bad pair
    double worst_increase = 0.0;                // max of f[i+1] - f[i]
};

/// True iff the densities are non-increasing: f[i+1] <= f[i] + tol.
/// Equivalently the cumulative function x -> mu([0,x]) has non-increasing
/// slopes across cells on (0,1].
MonotonicityCheck is_monotonic(const StepMeasure& mu, double tol);

/// Interval pair ordered in the sense inf A <= inf B and sup A <= sup B.
struct IntervalPair {
    Interval A;
    Interval B;
};

bool pair_ordered(const IntervalPair& pair);

/// Average-density comparison avg(A) >= avg(B) - 1e-12 for a monotone
/// measure and an ordered pair with positive lengths. Violated preconditions
/// throw std::invalid_argument (the conclusion can genuinely fail for
/// unordered pairs).
bool check_key_inequality(const StepMeasure& mu, const IntervalPair& pair);

/// Deterministic generator of monotone step measures on a uniform partition:
/// optional atom at 0, positive increments sorted decreasingly as densities,
/// normalized to total mass 1.
StepMeasure random_monotonic(std::uint64_t seed, std::size_t n_cells, double atom_prob);

/// Conditional-expectation projection onto piecewise-constant densities over
/// `target`: output density on cell i is mu(cell_i)/|cell_i|, atom absorbed
/// into the owning cell. The output is always absolutely continuous.
StepMeasure project(const StepMeasure& mu, const Partition& target);

/// Pushforward under the map, discretized onto `output`: per output cell,
/// mass = sum over branches of the input measure of the branch preimage.
/// The atom at 0 survives as an atom only when the map fixes the origin;
/// otherwise it lands in the cell owning T(0) as density mass. Exact for
/// step measures up to root-finding tolerance because branch preimages of
/// intervals are intervals.
StepMeasure pushforward(const IntervalMap& map, const StepMeasure& mu, const Partition& output);

} // namespace ulam
