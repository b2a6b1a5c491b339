#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rackpinion/casimir_pfa.hpp"
#include "rackpinion/errors.hpp"
#include "rackpinion/units.hpp"

using namespace rackpinion;
using std::numbers::pi;

namespace {

PfaInputs reference_pfa() {
    PfaInputs p;
    p.gap = 100e-9;
    p.wavelength = 1e-6;
    p.amp_pinion = 10e-9;
    p.amp_rack = 10e-9;
    p.length = 10e-6;
    p.radius = 10e-6;
    p.density = 19300.0;
    return p;
}

PhysicalDevice reference_device() {
    PhysicalDevice d;
    d.pinion_radius = 10e-6;
    d.pinion_length = 10e-6;
    d.wavelength = 1e-6;
    d.amp_pinion = 10e-9;
    d.amp_rack = 10e-9;
    d.gap = 100e-9;
    d.density = 19300.0;
    return d;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

PfaInputs random_pfa(std::mt19937_64& rng) {
    auto lu = [&](double lo, double hi) {
        return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
    };
    PfaInputs p;
    p.gap = lu(10e-9, 2e-6);
    p.wavelength = lu(100e-9, 10e-6);
    p.amp_pinion = p.gap * lu(0.01, 0.2);
    p.amp_rack = p.gap * lu(0.01, 0.2);
    p.length = lu(1e-6, 1e-3);
    p.radius = lu(0.1e-6, 100e-6);
    p.density = lu(1000.0, 22000.0);
    return p;
}

}  // namespace

TEST_CASE("solid-cylinder moment of inertia") {
    CHECK(moment_of_inertia_solid_cylinder(2.0 / pi, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(moment_of_inertia_solid_cylinder(19300.0, 1e-5, 1e-5) ==
          doctest::Approx(3.03163691071415e-21).epsilon(1e-13));
    CHECK(moment_of_inertia_solid_cylinder(1.0, 2.0, 1.0) == doctest::Approx(16.0 * moment_of_inertia_solid_cylinder(1.0, 1.0, 1.0)));
    CHECK_THROWS_AS(moment_of_inertia_solid_cylinder(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(moment_of_inertia_solid_cylinder(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("rest start without friction") {
    PhysicalDevice d = reference_device();
    d.force_override = 1e-12;
    const double vs = nondimensionalize(d).skipping_velocity;
    d.rack_velocity = vs;
    const auto dp = nondimensionalize(d);
    CHECK(dp.epsilon == 0.0);
    CHECK(dp.load_ratio == 0.0);
    CHECK(dp.v0 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(dp.rack_ratio == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("friction chosen for eps = 0.05 gives F_D/F = 0.0025") {
    PhysicalDevice d = reference_device();
    const auto base = nondimensionalize(d);
    d.friction = 0.05 * base.force_amplitude * d.pinion_radius * d.pinion_radius / base.skipping_velocity;
    const auto dp = nondimensionalize(d);
    CHECK(dp.epsilon == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(dp.dissipation_force / dp.force_amplitude == doctest::Approx(0.0025).epsilon(1e-12));
}

TEST_CASE("reduction identities on random devices") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const PfaInputs p = random_pfa(rng);
        PhysicalDevice d;
        d.pinion_radius = p.radius;
        d.pinion_length = p.length;
        d.wavelength = p.wavelength;
        d.amp_pinion = p.amp_pinion;
        d.amp_rack = p.amp_rack;
        d.gap = p.gap;
        d.density = p.density;
        const auto base = nondimensionalize(d);
        d.friction = u(rng) * base.force_amplitude * d.pinion_radius * d.pinion_radius / base.skipping_velocity;
        d.load = u(rng) * base.force_amplitude;
        d.rack_velocity = 3.0 * u(rng) * base.skipping_velocity;
        const auto dp = nondimensionalize(d);
        const double F = dp.force_amplitude, I = dp.moment_of_inertia;
        CHECK(rel(dp.epsilon * dp.epsilon * F, dp.dissipation_force) < 1e-12);
        CHECK(rel(dp.skipping_velocity * dp.skipping_velocity * 2.0 * pi * I,
                  F * d.wavelength * d.pinion_radius * d.pinion_radius) < 1e-12);
        CHECK(rel(d.friction * dp.skipping_velocity / (d.pinion_radius * d.pinion_radius),
                  std::sqrt(F * dp.dissipation_force)) < 1e-12);
        CHECK(rel(dp.skipping_velocity, d.wavelength / (2.0 * pi * dp.time_scale)) < 1e-14);
        CHECK(dp.v0 == doctest::Approx(-dp.rack_ratio).epsilon(1e-14));

        // (F, W, zeta) -> (cF, cW, sqrt(c) zeta) leaves eps and w unchanged.
        const double c = 0.1 + 10.0 * u(rng);
        PhysicalDevice s = d;
        s.force_override = c * F;
        s.load = c * d.load;
        s.friction = std::sqrt(c) * d.friction;
        const auto ds = nondimensionalize(s);
        CHECK(rel(ds.epsilon, dp.epsilon) < 1e-12);
        if (dp.load_ratio > 0.0) CHECK(rel(ds.load_ratio, dp.load_ratio) < 1e-12);
    }
}

TEST_CASE("device validation") {
    PhysicalDevice d = reference_device();
    CHECK(d.validate().size() == 1);  // gap below the plasma-wavelength scale
    d.rack_velocity = -1.0;
    CHECK_THROWS_AS(d.validate(), DomainError);
    d = reference_device();
    d.pinion_radius = 0.0;
    CHECK_THROWS_AS(d.validate(), DomainError);
    d = reference_device();
    d.amp_pinion = 30e-9;  // > H/5
    bool corrugation = false;
    for (const auto& a : d.validate()) corrugation |= a.find("H/5") != std::string::npos;
    CHECK(corrugation);
    d = reference_device();
    d.force_override = 0.0;
    CHECK_THROWS_AS(nondimensionalize(d), DomainError);
    d = reference_device();
    d.inertia_override = 2.0 * moment_of_inertia(d);
    CHECK(nondimensionalize(d).moment_of_inertia == doctest::Approx(2.0 * moment_of_inertia(reference_device())));
}

TEST_CASE("empirical alpha") {
    CHECK(alpha_empirical(0.0) == 1.0);
    CHECK(alpha_empirical(1.0) == doctest::Approx(0.080132403047628974).epsilon(1e-13));
    double prev = 1.0;
    for (int i = 1; i <= 2000; ++i) {
        const double a = alpha_empirical(i * 0.05);
        CHECK(a < prev);
        CHECK(a > 0.0);
        prev = a;
    }
    // Both branches of the evaluation agree where they meet.
    const double rate = 12.0 * pi / std::sqrt(35.0);
    CHECK(alpha_empirical(20.0 / rate * (1 - 1e-12)) == doctest::Approx(alpha_empirical(20.0 / rate)).epsilon(1e-10));
    CHECK_THROWS_AS(alpha_empirical(-0.1), DomainError);
}

TEST_CASE("force amplitude regression and linearity") {
    const PfaInputs p = reference_pfa();
    CHECK(lateral_force_amplitude(p) == doctest::Approx(9.117910901902647e-13).epsilon(1e-12));
    CHECK(skipping_velocity_physical(p) == doctest::Approx(6.918614693042608e-05).epsilon(1e-12));

    PfaInputs q = p;
    q.amp_pinion *= 2;
    CHECK(lateral_force_amplitude(q) == doctest::Approx(2 * lateral_force_amplitude(p)).epsilon(1e-14));
    q = p;
    q.length *= 2;
    CHECK(lateral_force_amplitude(q) == doctest::Approx(2 * lateral_force_amplitude(p)).epsilon(1e-14));
    CHECK(skipping_velocity_physical(q) == doctest::Approx(skipping_velocity_physical(p)).epsilon(1e-14));

    // Uniform scaling of all lengths but L at fixed H/lambda: F -> c^-3 F.
    const double c = 3.7;
    q = p;
    q.gap *= c;
    q.wavelength *= c;
    q.amp_pinion *= c;
    q.amp_rack *= c;
    q.radius *= c;
    CHECK(lateral_force_amplitude(q) == doctest::Approx(lateral_force_amplitude(p) / (c * c * c)).epsilon(1e-12));
}

TEST_CASE("scaling exponents by log-log perturbation") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const PfaInputs p = random_pfa(rng);
        const double F = lateral_force_amplitude(p);
        auto exponent = [&](double PfaInputs::*field, bool remove_alpha) {
            PfaInputs q = p;
            q.*field *= 2.0;
            double ratio = lateral_force_amplitude(q) / F;
            if (remove_alpha) ratio /= alpha_factor(q) / alpha_factor(p);
            return std::log2(ratio);
        };
        CHECK(std::fabs(exponent(&PfaInputs::amp_pinion, false) - 1.0) < 1e-10);
        CHECK(std::fabs(exponent(&PfaInputs::amp_rack, false) - 1.0) < 1e-10);
        CHECK(std::fabs(exponent(&PfaInputs::length, false) - 1.0) < 1e-10);
        CHECK(std::fabs(exponent(&PfaInputs::radius, false) - 0.5) < 1e-10);
        CHECK(std::fabs(exponent(&PfaInputs::wavelength, true) + 1.0) < 1e-10);
        CHECK(std::fabs(exponent(&PfaInputs::gap, true) + 4.5) < 1e-10);
    }
}

TEST_CASE("V_S from the closed form equals lambda / (2 pi T)") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const PfaInputs p = random_pfa(rng);
        PhysicalDevice d;
        d.pinion_radius = p.radius;
        d.pinion_length = p.length;
        d.wavelength = p.wavelength;
        d.amp_pinion = p.amp_pinion;
        d.amp_rack = p.amp_rack;
        d.gap = p.gap;
        d.density = p.density;
        CHECK(rel(skipping_velocity_physical(p), nondimensionalize(d).skipping_velocity) < 1e-10);
    }
}

TEST_CASE("skip velocity scan shape") {
    PfaInputs base = reference_pfa();
    base.radius = 1e-6;

    // Small-gap power law H^(-9/4): fit over the smallest decade.
    const auto small = skip_velocity_scan(base, 1e-10, 1e-9, 50);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& pt : small) {
        const double x = std::log(pt.gap), y = std::log(pt.skipping_velocity);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(small.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::fabs(slope + 2.25) < 0.02 * 2.25);

    // Large-gap exponential: log(V_S H^(9/4)) is linear in H.
    const double rate = 2.0 / 9.0 * 12.0 * pi / std::sqrt(35.0) / base.wavelength;
    const auto large = skip_velocity_scan(base, 8e-6, 10e-6, 2);
    auto reduced = [](const SkipVelocityPoint& pt) { return std::log(pt.skipping_velocity * std::pow(pt.gap, 2.25)); };
    const double decay = (reduced(large[1]) - reduced(large[0])) / (large[1].gap - large[0].gap);
    CHECK(decay == doctest::Approx(-rate).epsilon(1e-6));

    const auto scan = skip_velocity_scan(base, 1e-8, 1e-5, 300);
    for (std::size_t i = 1; i < scan.size(); ++i) {
        CHECK(scan[i].skipping_velocity < scan[i - 1].skipping_velocity);
        CHECK(scan[i].angular_velocity == doctest::Approx(scan[i].skipping_velocity / base.radius));
    }
    CHECK(scan.front().gap == 1e-8);
    CHECK(scan.back().gap == 1e-5);
    CHECK_THROWS_AS(skip_velocity_scan(base, 1e-6, 1e-7, 10), DomainError);
}

TEST_CASE("alpha override hook") {
    PfaInputs p = reference_pfa();
    p.alpha_override = [](double) { return 0.5; };
    PfaInputs q = reference_pfa();
    CHECK(lateral_force_amplitude(p) / lateral_force_amplitude(q) ==
          doctest::Approx(0.5 / alpha_empirical(0.1)).epsilon(1e-14));
    p.alpha_override = [](double) { return -1.0; };
    CHECK_THROWS_AS(lateral_force_amplitude(p), DomainError);
}

TEST_CASE("PFA advisories") {
    PfaInputs p = reference_pfa();
    p.gap = 20e-6;  // H > R, also far above the plasma scale
    p.amp_pinion = p.amp_rack = 100e-9;
    bool hr = false;
    for (const auto& a : pfa_advisories(p)) hr |= a.find("exceeds pinion radius") != std::string::npos;
    CHECK(hr);
}
