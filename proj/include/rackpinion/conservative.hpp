#pragma once
// Dissipation-free pendulum: u'' = -sin u - w.
// Velocities are in units of V_S and times in units of T unless a function
// takes V_R and V_S explicitly.

#include "rackpinion/regime.hpp"

namespace rackpinion {

/// Half-width of the band around the separatrix energy reported as Separatrix.
inline constexpr double kSeparatrixBand = 1e-12;

enum class OrbitClass { Libration, Rotation, Separatrix };

/// h = vr^2 / 2 + 1 - cos u0, the conserved energy of a rest-start pinion.
double energy_h(double u0, double vr_ratio);

/// h' = vr^2 / 2 + 1 - cos u0 + w u0, conserved under load.
double energy_h_loaded(double u0, double vr_ratio, double w);

/// Libration for h < 2 (locked in), Rotation for h > 2 (skipping).
OrbitClass classify_conservative(double h);

/// Full label for the unloaded frictionless device: LockedIn, Separatrix, or
/// a skipping label whose sign comes from the skipping-velocity formula.
Regime classify_conservative(double u0, double vr_ratio);

/// Libration period 4 K(sqrt(h/2)), 0 < h < 2.
double oscillation_period(double h);

/// Time for one full turn of u on a rotation orbit, 2 k K(k) with k = sqrt(2/h), h > 2.
double rotation_period(double h);

/// Net pinion velocity on a rotation orbit: V_R - pi V_S / (k K(k)), k = sqrt(2/h), h > 2.
double pinion_velocity_skipping(double h, double rack_velocity, double skipping_velocity);

/// Same in units of V_S given only (u0, V_R/V_S).
double pinion_velocity_skipping_ratio(double u0, double vr_ratio);

/// Rack velocity (units of V_S) above which a rest-start pinion skips: sqrt(2 (1 + cos u0)).
double skipping_threshold(double u0);

/// Saddle-loop energy h'_s = 1 + sqrt(1 - w^2) - (pi - asin w) w, 0 <= w < 1.
/// Throws NoLockedRegime for w >= 1.
double saddle_loop_energy(double w);

/// Phase of the saddle bounding the well on the side the rest-start pinion
/// moves toward: -(pi - asin w).
double saddle_phase(double w);

/// Orbit class with load and no dissipation for a pinion started at u0 with
/// du/dt = -vr_ratio.
OrbitClass classify_conservative_loaded(double u0, double vr_ratio, double w);

/// Skipping boundary in V_R/V_S at load w: sqrt(2 (h'_s - (1 - cos u0) - w u0)),
/// or 0 when no rack velocity keeps the pinion locked.
double loaded_skipping_threshold(double u0, double w);

}  // namespace rackpinion
