#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "ulam/interval_maps.hpp"
#include "ulam/partitions.hpp"
#include "ulam/rng.hpp"

using namespace ulam;

namespace {

double mp_cut(const IntervalMap& m) { return m.params.at("c_alpha"); }

} // namespace

TEST_CASE("mp_map branch cut solves c + c^(1+alpha) = 1") {
    IntervalMap doubling = mp_map(0.0);
    REQUIRE(doubling.branches.size() == 2);
    CHECK(mp_cut(doubling) == 0.5);
    CHECK(eval(doubling, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eval(doubling, 0.75) == doctest::Approx(0.5).epsilon(1e-15));

    // golden-ratio conjugate for alpha = 1
    IntervalMap m1 = mp_map(1.0);
    const double golden = 0.61803398874989484820;
    CHECK(std::fabs(mp_cut(m1) - golden) < 1e-12);

    IntervalMap m05 = mp_map(0.5);
    const double c = mp_cut(m05);
    CHECK(std::fabs(c - 0.56984029099805327) < 1e-12);
    CHECK(std::fabs(c + std::pow(c, 1.5) - 1.0) < 1e-14);

    for (const auto& b : m05.branches) {
        CHECK(b.orientation == Orientation::increasing);
        CHECK(b.image.lo <= 1e-15); // family property: 0 in every branch image
    }

    CHECK_THROWS_AS(mp_map(-1.0), std::invalid_argument);
}

TEST_CASE("counterexample map evaluation and branch ownership") {
    IntervalMap m = counterexample_map();
    REQUIRE(m.branches.size() == 3);
    CHECK(m.branches[1].orientation == Orientation::decreasing);

    CHECK(eval(m, 0.0) == 0.5);
    CHECK(eval(m, 0.5) == 0.5);                 // fixed point, third branch
    CHECK(eval(m, 1.0) == 0.75);
    // 5/12 belongs to the decreasing branch whose domain starts there
    CHECK(eval(m, 5.0 / 12.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    CHECK_THROWS_AS(eval(m, -0.2), std::domain_error);
    CHECK_THROWS_AS(eval(m, 1.2), std::domain_error);
}

TEST_CASE("branch_preimage: closed forms and bisection") {
    CHECK(*branch_preimage(mp_map(0.5), 0, 0.0) == 0.0);
    CHECK(*branch_preimage(mp_map(0.0), 1, 0.5) == doctest::Approx(0.75).epsilon(1e-15));

    IntervalMap m1 = mp_map(1.0);
    CHECK(std::fabs(*branch_preimage(m1, 0, 1.0) - 0.61803398874989484820) < 1e-12);

    // absent outside the branch image
    CHECK(!branch_preimage(counterexample_map(), 0, 0.1).has_value());
    CHECK_THROWS_AS(branch_preimage(m1, 5, 0.5), std::out_of_range);
}

TEST_CASE("preimage_of_interval: clipping, decreasing swap, degenerate absence") {
    auto halves = preimage_of_interval(mp_map(0.0), 0, {0.0, 0.5});
    REQUIRE(halves.has_value());
    CHECK(halves->lo == 0.0);
    CHECK(halves->hi == doctest::Approx(0.25).epsilon(1e-15));

    // decreasing branch -2x+1 over [5/12, 1/2): endpoints swap. The preimage
    // of the full image [0, 1/6] is the whole branch domain; the preimage of
    // [0, 1/12] is [11/24, 1/2].
    auto dec = preimage_of_interval(counterexample_map(), 1, {0.0, 1.0 / 6.0});
    REQUIRE(dec.has_value());
    CHECK(dec->lo == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
    CHECK(dec->hi == doctest::Approx(0.5).epsilon(1e-15));
    auto dec_half = preimage_of_interval(counterexample_map(), 1, {0.0, 1.0 / 12.0});
    REQUIRE(dec_half.has_value());
    CHECK(dec_half->lo == doctest::Approx(11.0 / 24.0).epsilon(1e-15));
    CHECK(dec_half->hi == doctest::Approx(0.5).epsilon(1e-15));

    IntervalMap m05 = mp_map(0.5);
    const double delta = std::ldexp(1.0, -10);
    auto second = preimage_of_interval(m05, 1, {0.0, delta});
    REQUIRE(second.has_value());
    CHECK(std::fabs(second->lo - mp_cut(m05)) < 1e-14);
    CHECK(second->hi == *branch_preimage(m05, 1, delta));

    // misses the image entirely / degenerates to a point
    CHECK(!preimage_of_interval(counterexample_map(), 1, {0.5, 0.9}).has_value());
    CHECK(!preimage_of_interval(counterexample_map(), 1, {1.0 / 6.0, 0.9}).has_value());
}

TEST_CASE("preimage/eval roundtrip over the catalog") {
    std::mt19937_64 gen(777);
    for (const auto& map : {mp_map(0.0), mp_map(0.5), mp_map(1.5), counterexample_map()}) {
        std::vector<double> probes{0.0, 1.0};
        for (const auto& b : map.branches) {
            probes.push_back(b.domain.lo);
            probes.push_back(b.domain.hi);
        }
        for (int k = 0; k < 1000; ++k) probes.push_back(uniform_unit(gen));
        for (double x : probes) {
            std::size_t k = map.branch_of(x);
            auto back = branch_preimage(map, k, map.branches[k].forward(x));
            REQUIRE(back.has_value());
            CHECK(std::fabs(*back - x) < 1e-12);
        }
    }
}

TEST_CASE("preimages of an interval: containment and branch disjointness") {
    std::mt19937_64 gen(778);
    for (const auto& map : {mp_map(0.3), mp_map(1.2), counterexample_map()}) {
        for (int trial = 0; trial < 200; ++trial) {
            double a = uniform_unit(gen), b = uniform_unit(gen);
            Interval target{std::min(a, b), std::max(a, b)};
            std::vector<Interval> pres;
            for (std::size_t k = 0; k < map.branches.size(); ++k) {
                auto pre = preimage_of_interval(map, k, target);
                if (!pre) continue;
                const auto& dom = map.branches[k].domain;
                CHECK(pre->lo >= dom.lo - 1e-12);
                CHECK(pre->hi <= dom.hi + 1e-12);
                // forward image lands back inside the target (tolerance collar)
                for (double x : {pre->lo, pre->hi, 0.5 * (pre->lo + pre->hi)}) {
                    double y = map.branches[k].forward(x);
                    CHECK(y >= target.lo - 1e-12);
                    CHECK(y <= target.hi + 1e-12);
                }
                pres.push_back(*pre);
            }
            for (std::size_t i = 0; i + 1 < pres.size(); ++i)
                for (std::size_t j = i + 1; j < pres.size(); ++j) {
                    double overlap = std::min(pres[i].hi, pres[j].hi) -
                                     std::max(pres[i].lo, pres[j].lo);
                    CHECK(overlap <= 1e-12);
                }
        }
    }
}

TEST_CASE("family verification: convexity and origin-in-image") {
    CHECK(verify_family(mp_map(0.5)).family_ok());
    CHECK(verify_family(mp_map(0.0)).family_ok()); // linear branches are weakly convex

    FamilyReport rep = verify_family(counterexample_map());
    CHECK(!rep.family_ok());
    REQUIRE(!rep.origin_in_each_image.empty());
    CHECK(!rep.origin_in_each_image[0]); // first branch image [1/2, 29/48] excludes 0
    bool witnessed = false;
    for (const auto& w : rep.violations)
        if (w.check == "origin_in_image" && w.branch == 0) {
            witnessed = true;
            CHECK(w.value == doctest::Approx(0.5).epsilon(1e-12));
        }
    CHECK(witnessed);

    // concave branch: f(x) = 0.2x + 0.8*sqrt(x)
    auto concave = make_interval_map(
        {Branch::make({0.0, 1.0}, {0.0, 0.2, 0.8, 0.5})}, "concave");
    FamilyReport crep = verify_family(concave);
    CHECK(!crep.is_piecewise_convex[0]);
    CHECK(!crep.violations.empty());

    // maps must stay inside [0,1]
    CHECK_THROWS_AS(make_interval_map({Branch::make({0.0, 1.0}, {0.5, 1.0, 0.0, 1.0})}, "spill"),
                    std::invalid_argument);

    CHECK_THROWS_AS(verify_family(mp_map(0.5), 2), std::invalid_argument);
}

TEST_CASE("expanding-map conditions") {
    FamilyReport good = verify_expanding_conditions(mp_map(0.5), 0.5, 1.0);
    CHECK(good.expanding_ok());
    CHECK(good.branch_count_bound == 2);
    CHECK(std::fabs(good.fitted_scale - 1.0) < 1e-3);
    CHECK(std::fabs(good.fitted_exponent - 0.5) < 1e-3);

    FamilyReport lin = verify_expanding_conditions(mp_map(0.0), 0.0, 1.0);
    CHECK(lin.noncontracting); // slope exactly 2
    CHECK(lin.local_form_ok);

    FamilyReport bad = verify_expanding_conditions(counterexample_map(), 0.5, 1.0);
    CHECK(!bad.noncontracting);
    bool witnessed = false;
    for (const auto& w : bad.violations)
        if (w.check == "noncontracting" && w.branch == 0) {
            witnessed = true;
            CHECK(w.value == doctest::Approx(0.25).epsilon(1e-9));
        }
    CHECK(witnessed);
}
