#include "rackpinion/conservative.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rackpinion/errors.hpp"
#include "rackpinion/special_functions.hpp"

namespace rackpinion {

using std::numbers::pi;

std::string_view regime_name(Regime r) noexcept {
    switch (r) {
        case Regime::LockedIn: return "LockedIn";
        case Regime::SkipForward: return "SkipForward";
        case Regime::SkipReverse: return "SkipReverse";
        case Regime::Separatrix: return "Separatrix";
        case Regime::Stalled: return "Stalled";
    }
    return "?";
}

std::optional<Regime> parse_regime(std::string_view name) noexcept {
    for (Regime r : {Regime::LockedIn, Regime::SkipForward, Regime::SkipReverse, Regime::Separatrix,
                     Regime::Stalled})
        if (regime_name(r) == name) return r;
    return std::nullopt;
}

Regime skipping_label(double vp) noexcept {
    if (std::fabs(vp) < kStallVelocity) return Regime::Stalled;
    return vp > 0.0 ? Regime::SkipForward : Regime::SkipReverse;
}

double energy_h(double u0, double vr_ratio) {
    return 0.5 * vr_ratio * vr_ratio + 1.0 - std::cos(u0);
}

double energy_h_loaded(double u0, double vr_ratio, double w) {
    return energy_h(u0, vr_ratio) + w * u0;
}

OrbitClass classify_conservative(double h) {
    if (h < 2.0 - kSeparatrixBand) return OrbitClass::Libration;
    if (h > 2.0 + kSeparatrixBand) return OrbitClass::Rotation;
    return OrbitClass::Separatrix;
}

Regime classify_conservative(double u0, double vr_ratio) {
    const double h = energy_h(u0, vr_ratio);
    switch (classify_conservative(h)) {
        case OrbitClass::Libration: return Regime::LockedIn;
        case OrbitClass::Separatrix: return Regime::Separatrix;
        case OrbitClass::Rotation: break;
    }
    return skipping_label(pinion_velocity_skipping(h, vr_ratio, 1.0));
}

double oscillation_period(double h) {
    if (!(h > 0.0 && h < 2.0)) throw DomainError("oscillation_period: requires 0 < h < 2");
    return 4.0 * ellip_K(std::sqrt(h / 2.0));
}

double rotation_period(double h) {
    if (!(h > 2.0)) throw DomainError("rotation_period: requires h > 2");
    const double k = std::sqrt(2.0 / h);
    return 2.0 * k * ellip_K(k);
}

double pinion_velocity_skipping(double h, double rack_velocity, double skipping_velocity) {
    if (!(h > 2.0)) throw DomainError("pinion_velocity_skipping: no winding motion for h <= 2");
    const double k = std::sqrt(2.0 / h);
    return rack_velocity - pi * skipping_velocity / (k * ellip_K(k));
}

double pinion_velocity_skipping_ratio(double u0, double vr_ratio) {
    return pinion_velocity_skipping(energy_h(u0, vr_ratio), vr_ratio, 1.0);
}

double skipping_threshold(double u0) {
    return std::sqrt(2.0 * (1.0 + std::cos(u0)));
}

double saddle_loop_energy(double w) {
    if (!(w >= 0.0)) throw DomainError("saddle_loop_energy: load ratio must be non-negative");
    if (w >= 1.0)
        throw NoLockedRegime("no locked regime: load ratio W/F >= 1 merges the stable and saddle fixed points");
    return 1.0 + std::sqrt((1.0 - w) * (1.0 + w)) - (pi - std::asin(w)) * w;
}

double saddle_phase(double w) {
    saddle_loop_energy(w);
    return -(pi - std::asin(w));
}

OrbitClass classify_conservative_loaded(double u0, double vr_ratio, double w) {
    const double hs = saddle_loop_energy(w);
    // Started beyond the saddle, the pinion is already on the downhill side.
    if (u0 < saddle_phase(w) - kSeparatrixBand) return OrbitClass::Rotation;
    const double h = energy_h_loaded(u0, vr_ratio, w);
    if (h < hs - kSeparatrixBand) return OrbitClass::Libration;
    if (h > hs + kSeparatrixBand) return OrbitClass::Rotation;
    return OrbitClass::Separatrix;
}

double loaded_skipping_threshold(double u0, double w) {
    const double hs = saddle_loop_energy(w);
    if (u0 <= saddle_phase(w)) return 0.0;
    const double room = hs - energy_h_loaded(u0, 0.0, w);
    return room > 0.0 ? std::sqrt(2.0 * room) : 0.0;
}

}  // namespace rackpinion
