#include "doctest.h"

#include "sweeplink/planner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace sweeplink;

namespace {

OdnProfile odn_of(std::vector<double> reaches, double group_index = 1.4682)
{
    OdnProfile odn;
    odn.group_index = group_index;
    for (double r : reaches) odn.reflections.push_back({r, 0.0});
    return odn;
}

OverlapSpec spec_of(double f_upper, double guard, double dev)
{
    OverlapSpec s;
    s.f_upper_hz = f_upper;
    s.lock_guard_hz = guard;
    s.deviation_hz = dev;
    return s;
}

bool member(const std::vector<FrequencyInterval>& xs, double f)
{
    for (const auto& iv : xs)
        if (f >= iv.lo_hz && f <= iv.hi_hz) return true;
    return false;
}

} // namespace

TEST_CASE("interval intersection agrees with pointwise membership")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count_d(0, 5);
    auto random_list = [&]() {
        std::vector<FrequencyInterval> xs;
        int n = count_d(rng);
        for (int i = 0; i < n; ++i) {
            double lo = u(rng) * 90.0;
            xs.push_back({lo, lo + u(rng) * 25.0});
        }
        return xs;
    };

    for (int trial = 0; trial < 300; ++trial) {
        auto a = random_list();
        auto b = random_list();
        auto isect = intersect_intervals(a, b, 0.0);
        // Sorted, disjoint, positive width.
        for (std::size_t i = 0; i < isect.size(); ++i) {
            CHECK(isect[i].width() > 0.0);
            if (i) CHECK(isect[i].lo_hz >= isect[i - 1].hi_hz);
        }
        // Pointwise: f is in the intersection iff it is in both inputs.
        // Sample away from the endpoints, where open/closed choices differ.
        for (int k = 0; k < 400; ++k) {
            double f = u(rng) * 120.0;
            bool near_edge = false;
            auto check_edges = [&](const std::vector<FrequencyInterval>& xs) {
                for (const auto& iv : xs)
                    if (std::abs(f - iv.lo_hz) < 1e-6 || std::abs(f - iv.hi_hz) < 1e-6)
                        near_edge = true;
            };
            check_edges(a);
            check_edges(b);
            check_edges(isect);
            if (near_edge) continue;
            CHECK(member(isect, f) == (member(a, f) && member(b, f)));
        }
    }
}

TEST_CASE("intersection merges fragments within tolerance and drops slivers")
{
    std::vector<FrequencyInterval> a{{0.0, 10.0}, {10.0 + 1e-9, 20.0}};
    std::vector<FrequencyInterval> b{{0.0, 30.0}};
    auto merged = intersect_intervals(a, b, 1e-6);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].lo_hz == doctest::Approx(0.0));
    CHECK(merged[0].hi_hz == doctest::Approx(20.0));

    std::vector<FrequencyInterval> c{{5.0, 5.0 + 1e-9}};
    CHECK(intersect_intervals(c, b, 1e-6).empty());
}

TEST_CASE("effective upper frequency is bandwidth plus guard")
{
    CHECK(effective_upper_frequency(125e6, 200e6) == doctest::Approx(325e6));
    CHECK(effective_upper_frequency(125e6, 0.0) == doctest::Approx(125e6));
    CHECK_THROWS_AS(effective_upper_frequency(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("single-reflection plan centers the chosen frequency in the widest interval")
{
    OdnProfile odn = odn_of({4300.0});
    double dev = 1.55e9;
    OverlapSpec s = spec_of(0.4 * dev, 0.0, dev);
    ScanGrid grid{1e3, 45e3, 50.0};
    SweepPlan plan = plan_common_sweep(odn, s, 0.0, 1.0 / 32.0, grid);

    REQUIRE(plan.per_reflection.size() == 1);
    REQUIRE(plan.kappa_hz.has_value());
    const auto& pr = plan.per_reflection[0];
    CHECK(pr.f_opt_hz == doctest::Approx(optimal_sweep_frequency(pr.delay_s)));
    CHECK(plan.max_required_sweep_freq_hz == doctest::Approx(pr.f_opt_hz));

    auto widest = std::max_element(plan.common.begin(), plan.common.end(),
                                   [](const FrequencyInterval& p, const FrequencyInterval& q) {
                                       return p.width() < q.width();
                                   });
    CHECK(*plan.kappa_hz == doctest::Approx(0.5 * (widest->lo_hz + widest->hi_hz)));
    CHECK(plan.worst_overlap <= 1.0 / 32.0);
    CHECK(member(pr.sfr, *plan.kappa_hz));
}

TEST_CASE("two reflections share a higher-order interval bounded by the longer reach")
{
    // 4.3 km and 7 km at band share 0.4: the first-order valley of the short
    // reach overlaps the second-order valley of the long one. The common
    // window's upper edge belongs to the 7 km reflector.
    OdnProfile odn = odn_of({4300.0, 7000.0});
    double dev = 1.55e9;
    OverlapSpec s = spec_of(0.4 * dev, 0.0, dev);
    ScanGrid grid{1e3, 45e3, 50.0};
    SweepPlan plan = plan_common_sweep(odn, s, 0.0, 1.0 / 32.0, grid);

    REQUIRE(plan.kappa_hz.has_value());
    REQUIRE(plan.common.size() >= 1);
    double kappa = *plan.kappa_hz;
    for (const auto& pr : plan.per_reflection) CHECK(member(pr.sfr, kappa));

    // Locate the containing interval of each reach and of the common set.
    auto containing = [&](const std::vector<FrequencyInterval>& xs) {
        for (const auto& iv : xs)
            if (kappa >= iv.lo_hz && kappa <= iv.hi_hz) return iv;
        return FrequencyInterval{};
    };
    FrequencyInterval common_iv = containing(plan.common);
    FrequencyInterval short_iv = containing(plan.per_reflection[0].sfr);
    FrequencyInterval long_iv = containing(plan.per_reflection[1].sfr);
    REQUIRE(common_iv.width() > 0.0);
    // The long reach is the binding constraint on the upper edge.
    CHECK(common_iv.hi_hz == doctest::Approx(long_iv.hi_hz).epsilon(1e-9));
    CHECK(long_iv.hi_hz < short_iv.hi_hz);
    CHECK(plan.worst_overlap <= 1.0 / 32.0);
    // Closest reflector needs the fastest sweep.
    CHECK(plan.max_required_sweep_freq_hz ==
          doctest::Approx(plan.per_reflection[0].f_opt_hz));
}

TEST_CASE("plan reports no choice when the scan window misses every valley")
{
    OdnProfile odn = odn_of({4300.0});
    double dev = 1.55e9;
    OverlapSpec s = spec_of(0.4 * dev, 0.0, dev);
    // Wrapped delay fraction stays below 0.02 for f < 500 Hz: always overlapped.
    ScanGrid grid{100.0, 480.0, 20.0};
    SweepPlan plan = plan_common_sweep(odn, s, 0.0, 1.0 / 32.0, grid);
    CHECK_FALSE(plan.kappa_hz.has_value());
    CHECK(plan.common.empty());
}

TEST_CASE("band-share map rows follow the closed form and clamp above one half")
{
    OdnProfile odn = odn_of({4300.0});
    double dev = 1.55e9;
    OverlapSpec s = spec_of(125e6, 100e6, dev);
    ScanGrid grid{1e3, 5e3, 500.0};
    OverlapMap map = overlap_map_pi(odn, s, {0.05, 0.52}, grid, 0.0);

    REQUIRE(map.axis_values.size() == 2);
    REQUIRE(map.probability.size() == 2);
    double delay = round_trip_delay(4300.0, odn.group_index);
    for (std::size_t col = 0; col < map.f_hz.size(); ++col) {
        // Row 0: recompute the two-branch value directly.
        double delta = delay * map.f_hz[col];
        delta -= std::floor(delta);
        double expect = 0.0;
        if (dev * delta < 0.05 * dev) expect += 1.0 - delta;
        if (dev * (1.0 - delta) < 0.05 * dev) expect += delta;
        CHECK(map.probability[0][col] == doctest::Approx(expect).epsilon(1e-12));
        // Row 1 exceeds the half-swing clamp: certain overlap everywhere.
        CHECK(map.probability[1][col] == 1.0);
    }
}

TEST_CASE("multi-reflection map cells take the worst case across reflectors")
{
    double dev = 1.55e9;
    OverlapSpec s = spec_of(125e6, 0.0, dev);
    ScanGrid grid{1e3, 20e3, 1e3};
    OverlapMap both = overlap_map_pi(odn_of({4300.0, 7000.0}), s, {0.2}, grid, 0.0);
    OverlapMap first = overlap_map_pi(odn_of({4300.0}), s, {0.2}, grid, 0.0);
    OverlapMap second = overlap_map_pi(odn_of({7000.0}), s, {0.2}, grid, 0.0);
    for (std::size_t col = 0; col < both.f_hz.size(); ++col)
        CHECK(both.probability[0][col] ==
              doctest::Approx(std::max(first.probability[0][col], second.probability[0][col]))
                  .epsilon(1e-12));
}

TEST_CASE("reach-axis map varies the delay at fixed spectra")
{
    double dev = 1.55e9;
    OverlapSpec s = spec_of(0.3 * dev, 0.0, dev);
    ScanGrid grid{5e3, 15e3, 1e3};
    OverlapMap map = overlap_map_reach({4300.0, 7000.0}, 1.4682, s, grid, 0.0);
    REQUIRE(map.axis == MapAxis::reach);
    REQUIRE(map.axis_values.size() == 2);
    for (std::size_t row = 0; row < 2; ++row) {
        double delay = round_trip_delay(map.axis_values[row], 1.4682);
        for (std::size_t col = 0; col < map.f_hz.size(); ++col) {
            SweepWaveform w{dev, map.f_hz[col], 0.0, 0.0};
            CHECK(map.probability[row][col] ==
                  doctest::Approx(overlap_probability_analytic(w, delay, s).probability)
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("profile validation names the offending reflection")
{
    OdnProfile odn = odn_of({4300.0, -1.0});
    CHECK_THROWS_WITH_AS(validate(odn),
                         "OdnProfile: reflections[1].reach_m must be > 0",
                         std::invalid_argument);
    OdnProfile empty;
    CHECK_THROWS_AS(validate(empty), std::invalid_argument);
}
