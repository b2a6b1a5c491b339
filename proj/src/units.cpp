#include "rackpinion/units.hpp"

#include <cmath>
#include <numbers>

#include "rackpinion/dissipative.hpp"
#include "rackpinion/errors.hpp"

namespace rackpinion {

namespace {

void positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(name) + " must be positive");
}

void non_negative(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(name) + " must be non-negative");
}

}  // namespace

std::vector<std::string> PhysicalDevice::validate() const {
    positive(pinion_radius, "R");
    positive(pinion_length, "L");
    positive(wavelength, "lambda");
    non_negative(amp_pinion, "a1");
    non_negative(amp_rack, "a2");
    non_negative(gap, "H");
    if (!inertia_override) positive(density, "rho");
    non_negative(friction, "zeta");
    non_negative(load, "W");
    if (rack_velocity < 0.0)
        throw DomainError("V_R must be non-negative; use the u0 -> -u0 symmetry for reversed racks");
    non_negative(rack_velocity, "V_R");
    if (force_override) positive(*force_override, "F_override");
    if (inertia_override) positive(*inertia_override, "I_override");

    std::vector<std::string> advisories;
    if (!force_override) return pfa_advisories(pfa_inputs());
    if (gap > 0.0 && (amp_pinion > gap / 5.0 || amp_rack > gap / 5.0))
        advisories.emplace_back("corrugation amplitude exceeds H/5; the leading-order PFA force assumes a1, a2 << H");
    return advisories;
}

PfaInputs PhysicalDevice::pfa_inputs() const {
    PfaInputs p;
    p.gap = gap;
    p.wavelength = wavelength;
    p.amp_pinion = amp_pinion;
    p.amp_rack = amp_rack;
    p.length = pinion_length;
    p.radius = pinion_radius;
    p.density = density;
    return p;
}

double moment_of_inertia_solid_cylinder(double density, double radius, double length) {
    positive(density, "density");
    positive(radius, "radius");
    positive(length, "length");
    const double r2 = radius * radius;
    return std::numbers::pi * density * length * r2 * r2 / 2.0;
}

double moment_of_inertia(const PhysicalDevice& dev) {
    if (dev.inertia_override) return *dev.inertia_override;
    return moment_of_inertia_solid_cylinder(dev.density, dev.pinion_radius, dev.pinion_length);
}

double force_amplitude(const PhysicalDevice& dev) {
    if (dev.force_override) return *dev.force_override;
    return lateral_force_amplitude(dev.pfa_inputs());
}

DimensionlessParams nondimensionalize(const PhysicalDevice& dev, double pinion_initial_velocity) {
    dev.validate();
    const double F = force_amplitude(dev);
    if (!(F > 0.0)) throw DomainError("nondimensionalize: force amplitude must be positive");
    const double I = moment_of_inertia(dev);
    const double R = dev.pinion_radius;
    const double lambda = dev.wavelength;

    DimensionlessParams p;
    p.force_amplitude = F;
    p.moment_of_inertia = I;
    p.time_scale = std::sqrt(I * lambda / (2.0 * std::numbers::pi * F * R * R));
    p.skipping_velocity = lambda / (2.0 * std::numbers::pi * p.time_scale);
    p.epsilon = p.time_scale * dev.friction / I;
    p.load_ratio = dev.load / F;
    p.dissipation_force = dissipation_force_scale(dev.friction, lambda, I, R);
    p.rack_ratio = dev.rack_velocity / p.skipping_velocity;
    p.v0 = (pinion_initial_velocity - dev.rack_velocity) / p.skipping_velocity;
    return p;
}

}  // namespace rackpinion
