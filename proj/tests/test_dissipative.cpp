#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rackpinion/conservative.hpp"
#include "rackpinion/dissipative.hpp"
#include "rackpinion/errors.hpp"
#include "rackpinion/special_functions.hpp"

using namespace rackpinion;
using std::numbers::pi;

namespace {
constexpr double kFourOverPi = 4.0 / pi;
}

TEST_CASE("dissipation force scale") {
    // F_D = zeta^2 lambda / (2 pi I R^2)
    CHECK(dissipation_force_scale(2.0, 3.0, 5.0, 7.0) == doctest::Approx(4.0 * 3.0 / (2 * pi * 5.0 * 49.0)));
    CHECK(dissipation_force_scale(0.0, 1.0, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(dissipation_force_scale(-1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("weak lock-in threshold") {
    CHECK(lockin_threshold_weak_ratio(0.05, 0.0) == doctest::Approx(kFourOverPi));
    CHECK(lockin_threshold_weak_ratio(0.05, 0.02) == doctest::Approx(kFourOverPi - 0.4));
    CHECK_THROWS_AS(lockin_threshold_weak_ratio(0.05, 0.07), NoLockIn);

    // Physical: ((4/pi) sqrt(F F_D) - W) R^2 / zeta.
    const double F = 2.0, FD = 0.005, zeta = 0.3, R = 1.5, W = 0.01;
    CHECK(lockin_threshold_weak(W, F, FD, zeta, R) ==
          doctest::Approx((kFourOverPi * std::sqrt(F * FD) - W) * R * R / zeta).epsilon(1e-14));
    CHECK_THROWS_AS(lockin_threshold_weak(1.0, F, FD, zeta, R), NoLockIn);
}

TEST_CASE("Melnikov balance meets the separatrix at 4/pi") {
    // At h = 2 the rotation orbit is the separatrix and E(1) = 1.
    CHECK(h_m_balance(2.0) == doctest::Approx(kFourOverPi).epsilon(1e-15));
    // Energy balance over one rotation: eps * int v du = eps * (vr + w/eps) * 2 pi in the
    // mean, with int v du = 8 sqrt(h/2) E(sqrt(2/h)) along the orbit.
    for (double h : {2.5, 4.0, 20.0}) {
        const double k = std::sqrt(2.0 / h);
        const double loop = 2.0 * std::sqrt(2.0 * h) * ellip_E(k) * 2.0;  // int_0^{2 pi} v du
        CHECK(h_m_balance(h) == doctest::Approx(loop / (2.0 * pi)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(h_m_balance(1.9), DomainError);
}

TEST_CASE("h_m solutions") {
    CHECK(solve_h_m_reduced(100.0) == doctest::Approx(5001.000025).epsilon(1e-10));
    CHECK(solve_h_m_reduced(2.0) == doctest::Approx(3.0637954228622).epsilon(1e-12));
    CHECK(solve_h_m_reduced(10.0) == doctest::Approx(51.0025000781).epsilon(1e-11));
    CHECK(solve_h_m_reduced(1.5) == doctest::Approx(2.2446376406284).epsilon(1e-12));
    CHECK(solve_h_m_reduced(kFourOverPi) == 2.0);
    CHECK_THROWS_AS(solve_h_m_reduced(1.2), LockedInSignal);
    for (double x : {1.3, 3.0, 50.0}) CHECK(h_m_balance(solve_h_m_reduced(x)) == doctest::Approx(x).epsilon(1e-13));

    // Physical form: X = (V_R + W R^2 / zeta) / V_S.
    const double vs = 2.0, zeta = 0.5, R = 1.0;
    CHECK(solve_h_m(3.0, 0.25, zeta, R, vs) == doctest::Approx(solve_h_m_reduced((3.0 + 0.5) / vs)).epsilon(1e-14));
}

TEST_CASE("weak-dissipation pinion velocity") {
    CHECK(weak_response(2.0, 0.0, 0.05).vp == doctest::Approx(0.066549124614915).epsilon(1e-10));
    CHECK(weak_response(1.5, 0.0, 0.05).vp == doctest::Approx(0.18848556355811).epsilon(1e-10));
    CHECK(weak_response(10.0, 0.0, 0.05).vp == doctest::Approx(5.000468820325e-4).epsilon(1e-9));
    CHECK(weak_response(100.0, 0.0, 0.05).vp == doctest::Approx(5.0000000469e-7).epsilon(1e-6));
    const auto locked = weak_response(1.0, 0.0, 0.05);
    CHECK(locked.locked);
    CHECK(locked.vp == 1.0);

    // Load shifts the drive: same h_m for (vr, w) and (vr + w/eps, 0).
    CHECK(weak_response(1.5, 0.01, 0.05).h_m == doctest::Approx(weak_response(1.7, 0.0, 0.05).h_m).epsilon(1e-14));

    // Physical wrapper.
    const double vs = 3.0, zeta = 0.2, R = 2.0;
    CHECK(pinion_velocity_weak(2.0 * vs, 0.0, zeta, R, vs) ==
          doctest::Approx(vs * weak_response(2.0, 0.0, 1.0).vp).epsilon(1e-13));
    CHECK_THROWS_AS(pinion_velocity_weak(1.0 * vs, 0.0, zeta, R, vs), LockedInSignal);
}

TEST_CASE("large rack velocity asymptote -w/eps + 1/(2 vr^3)") {
    const double eps = 0.05, w = 0.02;
    for (double vr : {20.0, 50.0}) {
        const double vp = weak_response(vr, w, eps).vp;
        CHECK(vp == doctest::Approx(-w / eps + 0.5 / (vr * vr * vr)).epsilon(1e-3));
    }
    CHECK(weak_response(50.0, 0.0, eps).vp == doctest::Approx(0.5 / (50.0 * 50.0 * 50.0)).epsilon(1e-3));
}

TEST_CASE("weak stall load") {
    const double eps = 0.05;
    for (double vr : {1.5, 2.5, 4.0}) {
        const auto s = stall_force_weak_ratio(vr, eps);
        REQUIRE(s.load);
        CHECK(std::fabs(weak_response(vr, *s.load + 1e-9, eps).vp) < 1e-6);
        CHECK(weak_response(vr, *s.load - 1e-6, eps).vp > 0.0);
        CHECK(weak_response(vr, *s.load + 1e-6, eps).vp < 0.0);
    }
    // Physical wrapper: W_s = F w_s.
    const double F = 4.0, vs = 2.0, R = 1.0, zeta = eps * F * R * R / vs;
    const auto phys = stall_force_weak(2.5 * vs, zeta, R, vs, F);
    REQUIRE(phys.load);
    CHECK(*phys.load == doctest::Approx(F * *stall_force_weak_ratio(2.5, eps).load).epsilon(1e-12));
}

TEST_CASE("overdamped closed forms") {
    CHECK(overdamped_velocity_ratio(1.0, 0.0, 2.0) == doctest::Approx(0.13397459621556135).epsilon(1e-14));
    CHECK(overdamped_velocity_ratio(0.01, 0.0, 20.0) == 0.01);  // locked in
    CHECK(stall_force_strong_ratio(1.0, 1.0) == doctest::Approx(0.41421356237309505).epsilon(1e-15));
    CHECK(stall_force_strong_ratio(100.0, 1.0) == doctest::Approx(0.004999875006249609).epsilon(1e-14));
    // V_P vanishes at the strong stall load.
    for (double vr : {0.5, 1.0, 3.0}) {
        const double eps = 25.0;
        const double ws = stall_force_strong_ratio(vr, eps);
        CHECK(std::fabs(overdamped_velocity_ratio(vr, ws, eps)) < 1e-12);
    }
    // Stable form agrees with the direct expression where cancellation is mild.
    const double vr = 3.0, w = 0.2, eps = 0.5;
    CHECK(overdamped_velocity_ratio(vr, w, eps) ==
          doctest::Approx(vr - std::sqrt((vr + w / eps) * (vr + w / eps) - 1.0 / (eps * eps))).epsilon(1e-13));

    const double F = 2.0, zeta = 0.3, R = 1.5;
    // W_s = F (sqrt(1+s^2) - s), s = zeta V_R / (F R^2).
    const double s = zeta * 4.0 / (F * R * R);
    CHECK(stall_force_strong(4.0, zeta, R, F) == doctest::Approx(F * (std::sqrt(1 + s * s) - s)).epsilon(1e-14));
    CHECK(pinion_velocity_overdamped(20.0, 0.1, zeta, R, F) ==
          doctest::Approx(20.0 - std::sqrt(std::pow(20.0 + 0.1 * R * R / zeta, 2) - std::pow(F * R * R / zeta, 2)))
              .epsilon(1e-12));
    CHECK(pinion_velocity_overdamped(4.0, 0.1, zeta, R, F) == 4.0);  // drive below F R^2 / zeta
}

TEST_CASE("overdamped trajectory solves the first-order equation") {
    // (zeta lambda / (2 pi R^2)) du/dt = -F sin u - zeta V_R / R^2 - W
    const double F = 1.0, zeta = 0.4, R = 1.0, lambda = 2 * pi, W = 0.3, VR = 4.0;
    const double tau = overdamped_period(VR, W, zeta, R, F, lambda);
    const double c = zeta * lambda / (2 * pi * R * R);
    const double dt = 1e-6;
    for (double t = 0.013; t < 3 * tau; t += tau / 37) {
        const double u = overdamped_trajectory(t, VR, W, zeta, R, F, lambda);
        const double du = (overdamped_trajectory(t + dt, VR, W, zeta, R, F, lambda) -
                           overdamped_trajectory(t - dt, VR, W, zeta, R, F, lambda)) /
                          (2 * dt);
        CHECK(c * du == doctest::Approx(-F * std::sin(u) - zeta * VR / (R * R) - W).epsilon(1e-6));
    }
    // One turn lost per period.
    const double u0 = overdamped_trajectory(0.0, VR, W, zeta, R, F, lambda);
    CHECK(overdamped_trajectory(tau, VR, W, zeta, R, F, lambda) == doctest::Approx(u0 - 2 * pi).epsilon(1e-12));
    CHECK(overdamped_trajectory(0.0, VR, W, zeta, R, F, lambda, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // Mean pinion velocity from the period: V_P = V_R - lambda / tau.
    CHECK(pinion_velocity_overdamped(VR, W, zeta, R, F) == doctest::Approx(VR - lambda / tau).epsilon(1e-13));
    CHECK_THROWS_AS(overdamped_period(0.1, 0.0, zeta, R, F, lambda), LockedInSignal);
}

TEST_CASE("regime validity predicates") {
    DissipativeRegimeInputs in;
    in.force_amplitude = 1.0;
    in.friction = 0.1;
    in.radius = 1.0;
    in.rack_velocity = 2.0;
    in.load = 0.1;
    CHECK(in.weak_valid());          // 0.2 + 0.1 < 1
    CHECK(!in.overdamped_skipping());  // 2 + 1 < 10
    in.rack_velocity = 20.0;
    CHECK(!in.weak_valid());
    CHECK(in.overdamped_skipping());
}
