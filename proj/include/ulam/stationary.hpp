#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ulam/measures.hpp"
#include "ulam/ulam_matrix.hpp"

namespace ulam {

struct StationaryOptions {
    double tol = 1e-13;            // stop when ||pi P - pi||_1 < tol
    std::int64_t max_iter = 1'000'000;
    bool cesaro = false;           // average the iterates
    enum class Method { automatic, power, direct } method = Method::automatic;
};

struct StationaryResult {
    std::vector<double> pi;
    double residual = 0.0;
    std::int64_t iterations = 0;
    bool converged = false;
    bool unique = false;                     // exactly one closed communicating class
    std::optional<int> n_positive_power;     // filled by check_unique_ergodicity
    std::string method;                      // "power", "power+direct", "cesaro"
};

/// Left power iteration from the uniform vector, L1-normalized each step.
/// With Method::automatic, a stalling iteration (projected to miss tol
/// within max_iter) switches to a sparse direct solve of the stationarity
/// system with iterative refinement, followed by power-iteration polishing;
/// the reported residual is always the honestly recomputed ||pi P - pi||_1.
/// `unique` comes from the communicating-class structure of the support.
StationaryResult stationary_distribution(const UlamMatrix& P, const StationaryOptions& opt = {});

struct ErgodicityOptions {
    int n_max = 64;                        // highest matrix power probed for positivity
    std::size_t positivity_size_cap = 4096; // skip the boolean-power probe above this n
    std::uint64_t work_budget = 2'000'000'000; // word-operations allowed for the probe
};

struct ErgodicityReport {
    bool unique = false;
    std::optional<int> n_positive_power; // first n with P^n entrywise positive, when probed
    std::size_t closed_classes = 0;
    bool aperiodic = false;
};

/// Unique ergodicity of the chain. Probes boolean matrix powers for an
/// entrywise-positive P^n (a Perron-Frobenius certificate) within the given
/// caps, then falls back to the exact strongly-connected-component analysis:
/// unique iff the support digraph has exactly one closed class; aperiodicity
/// of that class via the gcd of cycle lengths through one state.
ErgodicityReport check_unique_ergodicity(const UlamMatrix& P, const ErgodicityOptions& opt = {});

/// The stationary vector as a measure: density pi_i/|cell_i| on cell i, so
/// that the measure of cell i is exactly pi_i.
struct DiscreteSRB {
    std::vector<double> pi;
    StepMeasure measure; // atom-free step measure over the chain's partition
};

DiscreteSRB srb_from_pi(std::span<const double> pi, const Partition& partition);

/// Mass of [z, 1] under the discrete measure, by clipping.
double tail_mass(const DiscreteSRB& srb, double z);

} // namespace ulam
