#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rackpinion/conservative.hpp"
#include "rackpinion/errors.hpp"
#include "rackpinion/special_functions.hpp"

using namespace rackpinion;
using std::numbers::pi;

TEST_CASE("energy and orbit class") {
    CHECK(energy_h(0.0, 2.0) == 2.0);
    CHECK(energy_h(pi / 2, 0.0) == doctest::Approx(1.0));
    CHECK(energy_h_loaded(0.5, 1.0, 0.3) == doctest::Approx(energy_h(0.5, 1.0) + 0.15));
    CHECK(classify_conservative(1.0) == OrbitClass::Libration);
    CHECK(classify_conservative(2.5) == OrbitClass::Rotation);
    CHECK(classify_conservative(2.0) == OrbitClass::Separatrix);
}

TEST_CASE("periods") {
    CHECK(oscillation_period(1.0) == doctest::Approx(7.416298709205487674).epsilon(1e-13));
    CHECK(oscillation_period(1e-10) == doctest::Approx(2 * pi).epsilon(1e-9));
    // Rotation at high energy: one turn per 2 pi / sqrt(2h).
    CHECK(rotation_period(2e6) == doctest::Approx(2 * pi / std::sqrt(4e6)).epsilon(1e-6));
    CHECK_THROWS_AS(oscillation_period(2.0), DomainError);
    CHECK_THROWS_AS(rotation_period(2.0), DomainError);
}

TEST_CASE("skipping velocity formula") {
    CHECK(pinion_velocity_skipping_ratio(0.0, 10.0) == doctest::Approx(0.10127825505478215).epsilon(1e-12));
    // Physical units scale linearly with V_S.
    const double h = energy_h(0.3, 4.0);
    CHECK(pinion_velocity_skipping(h, 4.0 * 2.5, 2.5) ==
          doctest::Approx(2.5 * pinion_velocity_skipping_ratio(0.3, 4.0)).epsilon(1e-14));
    CHECK_THROWS_AS(pinion_velocity_skipping(1.5, 1.0, 1.0), DomainError);
}

TEST_CASE("large rack velocity asymptote V_P V_R -> cos u0") {
    CHECK(pinion_velocity_skipping_ratio(0.0, 100.0) * 100.0 == doctest::Approx(1.000125).epsilon(1e-6));
    CHECK(pinion_velocity_skipping_ratio(pi / 3, 100.0) * 100.0 == doctest::Approx(0.500088).epsilon(2e-6));
    CHECK(pinion_velocity_skipping_ratio(3 * pi / 4, 100.0) * 100.0 == doctest::Approx(-0.707007).epsilon(2e-6));
    for (double u0 : {0.2, 1.0, 2.0, 3.0}) {
        const double err100 = std::fabs(100.0 * pinion_velocity_skipping_ratio(u0, 100.0) - std::cos(u0));
        const double err1000 = std::fabs(1000.0 * pinion_velocity_skipping_ratio(u0, 1000.0) - std::cos(u0));
        CHECK(err1000 < err100);
    }
}

TEST_CASE("threshold and reverse gear") {
    CHECK(skipping_threshold(pi / 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(skipping_threshold(0.0) == doctest::Approx(2.0));
    for (double u0 : {0.3, 1.2, 2.5}) {
        const double b = skipping_threshold(u0);
        CHECK(classify_conservative(u0, b * (1 - 1e-6)) == Regime::LockedIn);
        CHECK(is_skipping(classify_conservative(u0, b * (1 + 1e-6))));
        CHECK(classify_conservative(-u0, b * 0.9) == classify_conservative(u0, b * 0.9));
        CHECK(classify_conservative(-u0, b * 1.1) == classify_conservative(u0, b * 1.1));
    }
    // Just above the threshold the winding period diverges (logarithmically)
    // and V_P climbs back toward V_R.
    const double b = skipping_threshold(1.0);
    const double near = pinion_velocity_skipping_ratio(1.0, b * (1 + 1e-14));
    CHECK(near < b);
    CHECK(near > pinion_velocity_skipping_ratio(1.0, b * (1 + 1e-6)));
    CHECK(pinion_velocity_skipping_ratio(1.0, b * (1 + 1e-6)) > pinion_velocity_skipping_ratio(1.0, b * 1.5));

    for (double vr = 1.0; vr <= 100.0; vr *= 1.3) {
        if (vr > skipping_threshold(3 * pi / 4)) CHECK(pinion_velocity_skipping_ratio(3 * pi / 4, vr) < 0.0);
        if (vr > skipping_threshold(pi / 4)) CHECK(pinion_velocity_skipping_ratio(pi / 4, vr) > 0.0);
    }
    CHECK(classify_conservative(3 * pi / 4, 5.0) == Regime::SkipReverse);
    CHECK(classify_conservative(pi / 4, 5.0) == Regime::SkipForward);
}

TEST_CASE("regime names round-trip") {
    for (Regime r : {Regime::LockedIn, Regime::SkipForward, Regime::SkipReverse, Regime::Separatrix, Regime::Stalled})
        CHECK(parse_regime(regime_name(r)) == r);
    CHECK(!parse_regime("Bogus"));
    CHECK(skipping_label(0.5) == Regime::SkipForward);
    CHECK(skipping_label(-0.5) == Regime::SkipReverse);
    CHECK(skipping_label(1e-4) == Regime::Stalled);
}

TEST_CASE("saddle-loop energy under load") {
    CHECK(saddle_loop_energy(0.0) == doctest::Approx(2.0));
    CHECK(saddle_loop_energy(0.5) == doctest::Approx(0.557028464788691464).epsilon(1e-14));
    CHECK(saddle_loop_energy(1.0 - 1e-12) == doctest::Approx(1.0 - pi / 2).epsilon(1e-5));
    CHECK_THROWS_AS(saddle_loop_energy(1.0), NoLockedRegime);
    CHECK_THROWS_AS(saddle_loop_energy(1.5), NoLockedRegime);
    CHECK(saddle_phase(0.0) == doctest::Approx(-pi));
    CHECK(saddle_phase(0.5) == doctest::Approx(-(pi - std::asin(0.5))));

    // The saddle-loop energy is the loaded potential 1 - cos u + w u at the saddle.
    for (double w : {0.1, 0.4, 0.8}) {
        const double us = saddle_phase(w);
        CHECK(saddle_loop_energy(w) == doctest::Approx(1.0 - std::cos(us) + w * us).epsilon(1e-14));
    }
}

TEST_CASE("loaded skipping threshold") {
    CHECK(loaded_skipping_threshold(0.0, 0.5) == doctest::Approx(1.055488952844786).epsilon(1e-13));
    CHECK(loaded_skipping_threshold(0.7, 0.0) == doctest::Approx(skipping_threshold(0.7)).epsilon(1e-14));
    CHECK(loaded_skipping_threshold(-3.0, 0.5) == 0.0);  // beyond the saddle
    const double b = loaded_skipping_threshold(-1.0, 0.5);
    CHECK(classify_conservative_loaded(-1.0, b * 0.999, 0.5) == OrbitClass::Libration);
    CHECK(classify_conservative_loaded(-1.0, b * 1.001, 0.5) == OrbitClass::Rotation);
    CHECK_THROWS_AS(classify_conservative_loaded(0.0, 0.1, 1.0), NoLockedRegime);
}
