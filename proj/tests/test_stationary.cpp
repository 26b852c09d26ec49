#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "ulam/stationary.hpp"

using namespace ulam;

namespace {

IntervalMap identity_map() {
    return make_interval_map({Branch::make({0.0, 1.0}, {0.0, 1.0, 0.0, 1.0})}, "identity");
}

} // namespace

TEST_CASE("doubling map: uniform stationary vector at every power-of-two size") {
    for (std::size_t n = 2; n <= 1024; n *= 2) {
        UlamMatrix P = build_matrix(mp_map(0.0), uniform_partition(n));
        StationaryResult sol = stationary_distribution(P);
        CHECK(sol.converged);
        CHECK(sol.unique);
        double err = 0.0;
        for (double v : sol.pi) err += std::fabs(v - 1.0 / static_cast<double>(n));
        CHECK(err < 1e-12);
        CHECK(sol.residual < 1e-13);
    }
}

TEST_CASE("single-cell chain") {
    UlamMatrix P = build_matrix(mp_map(0.3), uniform_partition(1));
    StationaryResult sol = stationary_distribution(P);
    CHECK(sol.converged);
    REQUIRE(sol.pi.size() == 1);
    CHECK(sol.pi[0] == 1.0);
}

TEST_CASE("identity chain is not uniquely ergodic") {
    UlamMatrix P = build_matrix(identity_map(), uniform_partition(16));
    ErgodicityReport rep = check_unique_ergodicity(P);
    CHECK(!rep.unique);
    CHECK(rep.closed_classes == 16);
    CHECK(!rep.n_positive_power.has_value());

    StationaryResult sol = stationary_distribution(P);
    CHECK(!sol.unique); // solver flags the basis-dependent answer
}

TEST_CASE("positive-power certificate for the doubling map") {
    // row supports double each power: 2, 4, 8 -> P^3 strictly positive at n=8
    UlamMatrix P8 = build_matrix(mp_map(0.0), uniform_partition(8));
    ErgodicityReport rep = check_unique_ergodicity(P8);
    CHECK(rep.unique);
    CHECK(rep.aperiodic);
    REQUIRE(rep.n_positive_power.has_value());
    CHECK(*rep.n_positive_power == 3);
}

TEST_CASE("neutral map chain at moderate resolution is uniquely ergodic") {
    UlamMatrix P = build_matrix(mp_map(0.5), uniform_partition(256));
    ErgodicityReport rep = check_unique_ergodicity(P);
    CHECK(rep.unique);
    CHECK(rep.aperiodic);
    CHECK(rep.n_positive_power.has_value()); // certificate reachable at this size
}

TEST_CASE("srb_from_pi densities and tail masses") {
    Partition p10 = uniform_partition(10);
    std::vector<double> uniform(10, 0.1);
    DiscreteSRB flat = srb_from_pi(uniform, p10);
    for (double f : flat.measure.densities) CHECK(f == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tail_mass(flat, 0.1) == doctest::Approx(0.9).epsilon(1e-13));

    std::vector<double> e1(10, 0.0);
    e1[0] = 1.0;
    DiscreteSRB point = srb_from_pi(e1, p10);
    CHECK(point.measure.densities[0] == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(tail_mass(point, 0.2) == 0.0);
    CHECK(measure_of_interval(point.measure, {0.0, 0.1}) == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(tail_mass(point, 0.0), std::domain_error);
    CHECK_THROWS_AS(tail_mass(point, 1.5), std::domain_error);
}

TEST_CASE("stationary density of the neutral map is non-increasing") {
    Partition part = uniform_partition(4096);
    UlamMatrix P = build_matrix(mp_map(0.5), part);
    StationaryResult sol = stationary_distribution(P);
    CHECK(sol.converged);
    DiscreteSRB srb = srb_from_pi(sol.pi, part);
    CHECK(is_monotonic(srb.measure, 1e-10).monotonic);

    double sum = 0.0;
    for (double v : sol.pi) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(std::fabs(sum - 1.0) < 1e-13);
}

TEST_CASE("slow-mixing regime: automatic direct fallback") {
    // alpha > 1 near the neutral point: plain power iteration cannot reach
    // the tolerance within the budget; the automatic method switches to the
    // sparse direct solve and reports the honestly recomputed residual.
    Partition part = uniform_partition(2048);
    UlamMatrix P = build_matrix(mp_map(1.5), part);

    StationaryOptions power_only;
    power_only.method = StationaryOptions::Method::power;
    power_only.max_iter = 20000;
    StationaryResult stuck = stationary_distribution(P, power_only);
    CHECK(!stuck.converged);
    CHECK(stuck.residual >= power_only.tol);

    StationaryOptions automatic;
    automatic.max_iter = 20000;
    StationaryResult sol = stationary_distribution(P, automatic);
    CHECK(sol.converged);
    CHECK(sol.residual < 1e-13);
    CHECK(sol.method == "power+direct");
}

TEST_CASE("neutral map with alpha > 1: tail shrinks with resolution") {
    // Cross-implementation anchors for the stationary mass of the first cell
    // (independent sparse solver): pi1 ~ 0.3871 at n=4096, 0.3859 at n=8192.
    // Note pi1 approaches its limit from above while pi1/delta diverges and
    // the tail mass vanishes.
    double pi1_4096 = 0.0, pi1_8192 = 0.0, tail_4096 = 0.0, tail_8192 = 0.0;
    {
        Partition part = uniform_partition(4096);
        StationaryResult sol = stationary_distribution(build_matrix(mp_map(1.5), part));
        REQUIRE(sol.converged);
        pi1_4096 = sol.pi[0];
        tail_4096 = tail_mass(srb_from_pi(sol.pi, part), 0.1);
    }
    {
        Partition part = uniform_partition(8192);
        StationaryResult sol = stationary_distribution(build_matrix(mp_map(1.5), part));
        REQUIRE(sol.converged);
        pi1_8192 = sol.pi[0];
        tail_8192 = tail_mass(srb_from_pi(sol.pi, part), 0.1);
    }
    CHECK(std::fabs(pi1_4096 - 0.38709044) < 5e-4);
    CHECK(std::fabs(pi1_8192 - 0.38587183) < 5e-4);
    CHECK(std::fabs(tail_4096 - 0.02802329) < 5e-4);
    CHECK(std::fabs(tail_8192 - 0.01973196) < 5e-4);
    CHECK(tail_8192 < tail_4096);
    CHECK(pi1_8192 * 8192.0 > pi1_4096 * 4096.0); // pi1/delta grows
}

TEST_CASE("cesaro-averaged mode reproduces the stationary vector") {
    UlamMatrix P = build_matrix(mp_map(0.5), uniform_partition(64));
    StationaryResult plain = stationary_distribution(P);
    StationaryOptions opt;
    opt.cesaro = true;
    StationaryResult averaged = stationary_distribution(P, opt);
    CHECK(averaged.converged);
    double diff = 0.0;
    for (std::size_t i = 0; i < P.n; ++i) diff += std::fabs(plain.pi[i] - averaged.pi[i]);
    CHECK(diff < 1e-10);
}
