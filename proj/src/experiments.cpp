#include "ulam/experiments.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "ulam/rng.hpp"

namespace ulam {

namespace {

SweepRecord sweep_entry(const SweepConfig& cfg, std::size_t n) {
    SweepRecord rec;
    rec.alpha = cfg.alpha;
    rec.n_cells = n;
    rec.tail_z = cfg.z;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        Partition part = cfg.kind == PartitionKind::uniform
                             ? uniform_partition(n)
                             : quasi_uniform_partition(n, cfg.K, cfg.seed);
        rec.delta = part.delta();
        rec.K = part.ratio_K();

        const IntervalMap map = mp_map(cfg.alpha);
        const UlamMatrix P = build_matrix(map, part);
        rec.p11 = P.entry(0, 0);
        rec.p12 = P.entry(0, 1);

        const FirstRowDiagnostics diag = first_row_diagnostics(cfg.alpha, part);
        rec.p12_lo = diag.p12_lower;
        rec.p12_hi = diag.p12_upper;

        const StationaryResult sol = stationary_distribution(P, cfg.solve);
        rec.residual = sol.residual;
        rec.unique = sol.unique;
        rec.pi1 = sol.pi[0];
        rec.pi1_over_delta = rec.pi1 / rec.delta;
        rec.pi1_over_delta_pow = rec.pi1 / std::pow(rec.delta, 1.0 - cfg.alpha);

        const DiscreteSRB srb = srb_from_pi(sol.pi, part);
        rec.tail_mass = tail_mass(srb, cfg.z);

        if (!sol.unique)
            rec.error = "chain is not uniquely ergodic (stationary vector basis-dependent)";
        else if (!sol.converged)
            rec.error = "solver did not reach the requested tolerance";
        else
            rec.ok = true;
    } catch (const std::exception& ex) {
        rec.error = ex.what();
        rec.pi1 = rec.pi1_over_delta = rec.pi1_over_delta_pow = nan;
        rec.tail_mass = rec.residual = nan;
    }
    return rec;
}

} // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    if (cfg.cell_counts.empty()) throw std::invalid_argument("run_sweep: no cell counts");
    for (std::size_t i = 0; i + 1 < cfg.cell_counts.size(); ++i)
        if (cfg.cell_counts[i] >= cfg.cell_counts[i + 1])
            throw std::invalid_argument("run_sweep: cell counts must be increasing");
    if (!(cfg.z > 0.0 && cfg.z <= 1.0))
        throw std::invalid_argument("run_sweep: z must be in (0,1]");

    std::vector<SweepRecord> records(cfg.cell_counts.size());
    const unsigned threads = std::max(1u, cfg.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < cfg.cell_counts.size(); ++i)
            records[i] = sweep_entry(cfg, cfg.cell_counts[i]);
        return records;
    }
    // independent entries, merged in input order
    for (std::size_t base = 0; base < cfg.cell_counts.size(); base += threads) {
        std::vector<std::future<SweepRecord>> batch;
        for (std::size_t i = base; i < std::min(base + threads, cfg.cell_counts.size()); ++i)
            batch.push_back(std::async(std::launch::async,
                                       [&cfg, n = cfg.cell_counts[i]] { return sweep_entry(cfg, n); }));
        for (std::size_t i = 0; i < batch.size(); ++i) records[base + i] = batch[i].get();
    }
    return records;
}

ScalingFit fit_scaling_exponent(std::span<const SweepRecord> records) {
    std::vector<double> xs, ys;
    for (const auto& r : records) {
        if (!r.ok || !(r.pi1 > 0.0)) continue;
        xs.push_back(std::log(r.delta));
        ys.push_back(std::log(r.pi1));
    }
    const std::size_t m = xs.size();
    if (m < 3) throw std::invalid_argument("fit_scaling_exponent: need >= 3 valid records");

    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 1e-12)) throw std::invalid_argument("fit_scaling_exponent: degenerate delta spread");

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<CounterexampleRecord> run_counterexample(const std::vector<std::size_t>& cell_counts,
                                                     double window, bool allow_unaligned) {
    if (!(window > 0.0 && window < 0.5))
        throw std::invalid_argument("run_counterexample: window must be in (0, 1/2)");
    const IntervalMap map = counterexample_map();
    if (std::fabs(eval(map, 0.5) - 0.5) > 1e-15)
        throw std::logic_error("run_counterexample: 1/2 is not fixed by the map");

    std::vector<CounterexampleRecord> records;
    records.reserve(cell_counts.size());
    for (std::size_t n : cell_counts) {
        if (n % 12 != 0 && !allow_unaligned)
            throw std::invalid_argument(
                "run_counterexample: cell count must be divisible by 12 so that 5/12 and 1/2 "
                "are breakpoints (pass allow_unaligned to explore misaligned partitions)");
        Partition part = uniform_partition(n);
        UlamMatrix P = build_matrix(map, part);
        StationaryResult sol = stationary_distribution(P);
        DiscreteSRB srb = srb_from_pi(sol.pi, part);

        CounterexampleRecord rec;
        rec.n_cells = n;
        rec.window = window;
        rec.mass_near_half =
            measure_of_interval(srb.measure, {0.5 - window, 0.5 + window});
        std::size_t argmax = 0;
        for (std::size_t i = 1; i < sol.pi.size(); ++i)
            if (sol.pi[i] > sol.pi[argmax]) argmax = i;
        rec.pi_argmax_cell = argmax + 1;
        rec.residual = sol.residual;
        rec.unique = sol.unique;
        records.push_back(rec);
    }
    return records;
}

OrbitOracleResult orbit_convergence_oracle(const IntervalMap& map, double target,
                                           std::size_t n_orbits, std::size_t n_steps,
                                           std::uint64_t seed, double tol) {
    std::mt19937_64 gen(seed);
    OrbitOracleResult res;
    res.orbits = n_orbits;
    for (std::size_t k = 0; k < n_orbits; ++k) {
        double x = uniform_unit(gen);
        double dist = std::fabs(x - target);
        for (std::size_t step = 0; step < n_steps && dist > tol; ++step) {
            x = eval(map, x);
            dist = std::fabs(x - target);
        }
        if (dist <= tol) ++res.reached;
        res.max_final_distance = std::max(res.max_final_distance, dist);
    }
    return res;
}

} // namespace ulam
