#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ulam/stationary.hpp"

namespace ulam {

enum class PartitionKind { uniform, quasi };

/// One (delta, alpha) experiment row. Every statistic is recomputable from
/// (pi, partition, matrix) alone; rows with a failed solve or a non-unique
/// chain carry ok = false and an error note instead of throwing.
struct SweepRecord {
    double alpha = 0.0;
    std::size_t n_cells = 0;
    double delta = 0.0;
    double K = 1.0;
    double pi1 = 0.0;
    double pi1_over_delta = 0.0;     // divergence statistic, alpha > 0
    double pi1_over_delta_pow = 0.0; // pi1 / delta^(1-alpha), boundedness statistic
    double tail_z = 0.0;
    double tail_mass = 0.0;
    double p11 = 0.0;                // assembled first-row entries
    double p12 = 0.0;
    double p12_lo = 0.0;             // closed-form bracket for p12
    double p12_hi = 0.0;
    double residual = 0.0;
    bool unique = false;
    bool ok = false;
    std::string error;
};

struct SweepConfig {
    double alpha = 0.5;
    std::vector<std::size_t> cell_counts; // increasing
    PartitionKind kind = PartitionKind::uniform;
    double K = 1.0;
    std::uint64_t seed = 0;
    double z = 0.1;
    StationaryOptions solve;
    unsigned threads = 1; // sweep entries are independent
};

/// Builds partition + matrix + stationary solution for each resolution and
/// fills a record per entry. Per-entry failures are captured in the record.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of log(pi1) against log(delta) over the valid
/// records. Needs at least 3 records and a non-degenerate delta spread.
ScalingFit fit_scaling_exponent(std::span<const SweepRecord> records);

struct CounterexampleRecord {
    std::size_t n_cells = 0;
    double window = 0.0;
    double mass_near_half = 0.0;   // stationary mass of [1/2 - w, 1/2 + w]
    std::size_t pi_argmax_cell = 0; // 1-based
    double residual = 0.0;
    bool unique = false;
};

/// Stationary mass near the fixed point 1/2 of the counterexample map on
/// uniform partitions. Cell counts must be divisible by 12 so that the
/// map's breakpoints 5/12 and 1/2 are partition breakpoints, unless
/// allow_unaligned is set (exploration mode: misaligned partitions are
/// exactly the ones on which the leading eigenvector fails to localize).
std::vector<CounterexampleRecord> run_counterexample(const std::vector<std::size_t>& cell_counts,
                                                     double window = 1.0 / 24.0,
                                                     bool allow_unaligned = false);

struct OrbitOracleResult {
    std::size_t orbits = 0;
    std::size_t reached = 0;       // orbits that came within tol of the target
    double max_final_distance = 0.0;
};

/// Direct iteration oracle: follows n_orbits random starts for up to n_steps
/// and reports how many come within tol of the target point.
OrbitOracleResult orbit_convergence_oracle(const IntervalMap& map, double target,
                                           std::size_t n_orbits, std::size_t n_steps,
                                           std::uint64_t seed, double tol);

} // namespace ulam
