#include "ulam/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ulam/rng.hpp"

namespace ulam {

namespace {

// absolutely continuous part of mu(I)
double density_mass(const StepMeasure& mu, Interval I) {
    I.lo = std::max(I.lo, 0.0);
    I.hi = std::min(I.hi, 1.0);
    if (!(I.hi > I.lo)) return 0.0;
    const auto& bps = mu.support.breakpoints();
    const std::size_t n = mu.support.size();
    double acc = 0.0;
    for (std::size_t k = mu.support.locate(I.lo); k < n && bps[k] < I.hi; ++k) {
        double lo = std::max(bps[k], I.lo);
        double hi = std::min(bps[k + 1], I.hi);
        if (hi > lo) acc += mu.densities[k] * (hi - lo);
    }
    return acc;
}

} // namespace

double StepMeasure::total_mass() const {
    std::vector<double> masses(densities.size());
    for (std::size_t i = 0; i < densities.size(); ++i)
        masses[i] = densities[i] * support.cell_length(i);
    return atom0 + kahan_sum(masses);
}

StepMeasure make_step_measure(double atom0, Partition support, std::vector<double> densities) {
    if (!(atom0 >= 0.0 && atom0 <= 1.0))
        throw std::invalid_argument("step measure: atom weight outside [0,1]");
    if (densities.size() != support.size())
        throw std::invalid_argument("step measure: density count != cell count");
    for (double f : densities)
        if (!(f >= 0.0)) throw std::invalid_argument("step measure: negative density");
    return StepMeasure{atom0, std::move(support), std::move(densities)};
}

double measure_of_interval(const StepMeasure& mu, Interval I) {
    if (!(I.hi >= I.lo)) throw std::invalid_argument("measure_of_interval: empty interval");
    double m = density_mass(mu, I);
    if (I.lo <= 0.0 && I.hi >= 0.0) m += mu.atom0;
    return m;
}

double avg_density(const StepMeasure& mu, Interval I) {
    double len = I.hi - I.lo;
    if (!(len > 0.0)) return 0.0;
    return measure_of_interval(mu, I) / len;
}

MonotonicityCheck is_monotonic(const StepMeasure& mu, double tol) {
    MonotonicityCheck check;
    for (std::size_t i = 0; i + 1 < mu.densities.size(); ++i) {
        double rise = mu.densities[i + 1] - mu.densities[i];
        check.worst_increase = std::max(check.worst_increase, rise);
        if (rise > tol && check.monotonic) {
            check.monotonic = false;
            check.first_violation = i;
        }
    }
    return check;
}

bool pair_ordered(const IntervalPair& pair) {
    return pair.A.lo <= pair.B.lo && pair.A.hi <= pair.B.hi;
}

bool check_key_inequality(const StepMeasure& mu, const IntervalPair& pair) {
    if (!(pair.A.length() > 0.0 && pair.B.length() > 0.0))
        throw std::invalid_argument("key inequality: intervals need positive length");
    if (!pair_ordered(pair))
        throw std::invalid_argument("key inequality: pair violates the interval order");
    if (!is_monotonic(mu, 1e-12).monotonic)
        throw std::invalid_argument("key inequality: measure is not monotone");
    return avg_density(mu, pair.A) >= avg_density(mu, pair.B) - 1e-12;
}

StepMeasure random_monotonic(std::uint64_t seed, std::size_t n_cells, double atom_prob) {
    if (n_cells == 0) throw std::invalid_argument("random_monotonic: n_cells must be positive");
    std::mt19937_64 gen(seed);
    double atom0 = 0.0;
    if (uniform_unit(gen) < atom_prob) atom0 = uniform_in(gen, 0.0, 0.9);

    std::vector<double> inc(n_cells);
    for (auto& v : inc) v = 1.0 - uniform_unit(gen); // positive
    std::sort(inc.begin(), inc.end(), std::greater<double>());

    Partition support = uniform_partition(n_cells);
    double mass = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) mass += inc[i] * support.cell_length(i);
    const double scale = (1.0 - atom0) / mass;
    for (auto& v : inc) v *= scale;
    return make_step_measure(atom0, std::move(support), std::move(inc));
}

StepMeasure project(const StepMeasure& mu, const Partition& target) {
    std::vector<double> densities(target.size());
    for (std::size_t i = 0; i < target.size(); ++i)
        densities[i] = measure_of_interval(mu, target.cell(i)) / target.cell_length(i);
    return make_step_measure(0.0, target, std::move(densities));
}

StepMeasure pushforward(const IntervalMap& map, const StepMeasure& mu, const Partition& output) {
    const std::size_t n = output.size();
    std::vector<double> mass(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        Interval cell = output.cell(j);
        for (std::size_t b = 0; b < map.branches.size(); ++b)
            if (auto pre = preimage_of_interval(map, b, cell))
                mass[j] += density_mass(mu, *pre);
    }

    double atom_out = 0.0;
    if (mu.atom0 > 0.0) {
        double t0 = eval(map, 0.0);
        if (t0 == 0.0)
            atom_out = mu.atom0;
        else
            mass[output.locate(t0)] += mu.atom0;
    }

    std::vector<double> densities(n);
    for (std::size_t j = 0; j < n; ++j) densities[j] = mass[j] / output.cell_length(j);
    return make_step_measure(atom_out, output, std::move(densities));
}

} // namespace ulam
