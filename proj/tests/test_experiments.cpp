#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "ulam/experiments.hpp"

using namespace ulam;

namespace {

SweepRecord synthetic(double delta, double pi1) {
    SweepRecord r;
    r.delta = delta;
    r.pi1 = pi1;
    r.ok = true;
    return r;
}

} // namespace

TEST_CASE("scaling fit on synthetic records") {
    std::vector<SweepRecord> linear, sqrt_law, flat, few;
    for (double d : {1e-2, 1e-3, 1e-4, 1e-5}) {
        linear.push_back(synthetic(d, d));
        sqrt_law.push_back(synthetic(d, std::sqrt(d)));
        flat.push_back(synthetic(1e-3, 0.5));
    }
    few.push_back(synthetic(1e-2, 1e-2));
    few.push_back(synthetic(1e-3, 1e-3));

    ScalingFit f1 = fit_scaling_exponent(linear);
    CHECK(f1.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f1.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    ScalingFit f2 = fit_scaling_exponent(sqrt_law);
    CHECK(f2.slope == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(fit_scaling_exponent(flat), std::invalid_argument);
    CHECK_THROWS_AS(fit_scaling_exponent(few), std::invalid_argument);
}

TEST_CASE("sweep over the doubling map: uniform stationary statistics") {
    SweepConfig cfg;
    cfg.alpha = 0.0;
    cfg.cell_counts = {16, 32, 64};
    auto records = run_sweep(cfg);
    REQUIRE(records.size() == 3);
    for (const auto& r : records) {
        CHECK(r.ok);
        CHECK(r.unique);
        CHECK(r.pi1_over_delta_pow == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.p11 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.p12 == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("sweep statistics for alpha = 0.5") {
    SweepConfig cfg;
    cfg.alpha = 0.5;
    cfg.cell_counts = {256, 512, 1024};
    auto records = run_sweep(cfg);
    REQUIRE(records.size() == 3);
    for (const auto& r : records) {
        CHECK(r.ok);
        CHECK(r.p12 >= r.p12_lo);
        CHECK(r.p12 <= r.p12_hi);
        CHECK(r.residual <= cfg.solve.tol);
    }
    CHECK(records[0].pi1_over_delta < records[1].pi1_over_delta);
    CHECK(records[1].pi1_over_delta < records[2].pi1_over_delta);
    // anchor from an independent solver at n = 1024
    CHECK(std::fabs(records[2].pi1 - 1.15658178e-02) < 2e-5);
}

TEST_CASE("sweep determinism and input validation") {
    SweepConfig cfg;
    cfg.alpha = 0.25;
    cfg.cell_counts = {64, 128};
    cfg.kind = PartitionKind::quasi;
    cfg.K = 2.0;
    cfg.seed = 9;
    auto a = run_sweep(cfg);
    auto b = run_sweep(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].pi1 == b[i].pi1);
        CHECK(a[i].tail_mass == b[i].tail_mass);
        CHECK(a[i].residual == b[i].residual);
    }

    SweepConfig bad = cfg;
    bad.cell_counts = {128, 64};
    CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
    bad.cell_counts = {};
    CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
    bad.cell_counts = {64};
    bad.z = 0.0;
    CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
}

TEST_CASE("counterexample experiment at n = 12") {
    auto records = run_counterexample({12});
    REQUIRE(records.size() == 1);
    // aligned partition: the cell right of 1/2 is exactly absorbing, so the
    // stationary vector is its indicator; the window [1/2-1/24, 1/2+1/24]
    // covers half of that cell
    CHECK(records[0].pi_argmax_cell == 7);
    CHECK(records[0].mass_near_half == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(records[0].unique);

    CHECK_THROWS_AS(run_counterexample({13}), std::invalid_argument);
    CHECK_THROWS_AS(run_counterexample({12}, 0.7), std::invalid_argument);

    // misaligned partitions keep the mass spread out (exploration mode)
    auto unaligned = run_counterexample({13}, 1.0 / 24.0, true);
    CHECK(unaligned[0].mass_near_half < 0.9);
}

TEST_CASE("orbit oracle: everything converges to the fixed point 1/2") {
    OrbitOracleResult res =
        orbit_convergence_oracle(counterexample_map(), 0.5, 500, 500, 13, 1e-9);
    CHECK(res.orbits == 500);
    CHECK(res.reached == 500);
    CHECK(res.max_final_distance <= 1e-9);
}

TEST_CASE("parallel sweep matches the serial one") {
    SweepConfig cfg;
    cfg.alpha = 0.5;
    cfg.cell_counts = {64, 128, 256, 512};
    auto serial = run_sweep(cfg);
    cfg.threads = 4;
    auto parallel = run_sweep(cfg);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].pi1 == parallel[i].pi1);
        CHECK(serial[i].residual == parallel[i].residual);
    }
}
