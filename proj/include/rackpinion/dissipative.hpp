#pragma once
// Friction and load: weak-dissipation (Melnikov) lock-in threshold and
// rotating-orbit energy h_m, and the overdamped closed form.
//
// Each result is offered in physical units (signatures in SI) and in the
// reduced form used by the sweeps, where velocities are in units of V_S,
// forces in units of F, eps = zeta V_S / (F R^2) and w = W / F. In reduced
// form the combination V_R + W R^2 / zeta becomes vr + w / eps.

#include <optional>

namespace rackpinion {

struct DissipativeRegimeInputs {
    double force_amplitude = 0.0;    ///< F [N]
    double dissipation_force = 0.0;  ///< F_D [N]
    double friction = 0.0;           ///< zeta [kg m^2/s]
    double radius = 0.0;             ///< R [m]
    double load = 0.0;               ///< W [N]
    double rack_velocity = 0.0;      ///< V_R [m/s]
    double skipping_velocity = 0.0;  ///< V_S [m/s]
    double wavelength = 0.0;         ///< lambda [m]

    /// zeta V_R / R^2 + W < F.
    bool weak_valid() const noexcept;
    /// V_R + W R^2 / zeta > F R^2 / zeta (real winding period).
    bool overdamped_skipping() const noexcept;
};

/// F_D = zeta^2 lambda / (2 pi I R^2).
double dissipation_force_scale(double friction, double wavelength, double inertia, double radius);

// ---- weak dissipation -----------------------------------------------------

/// Rack velocity below which the u0-independent part of the phase diagram is
/// locked in: ((4/pi) sqrt(F F_D) - W) R^2 / zeta. Throws NoLockIn when the
/// load alone exceeds (4/pi) sqrt(F F_D).
double lockin_threshold_weak(double load, double force, double dissipation_force, double friction,
                             double radius);

/// Reduced form: (4/pi) - w/eps.
double lockin_threshold_weak_ratio(double eps, double w);

/// (4/pi) sqrt(h/2) E(sqrt(2/h)), the mean rotation speed balance for h >= 2.
double h_m_balance(double h);

/// Solves vr + w/eps = (4/pi) sqrt(h/2) E(sqrt(2/h)) for h >= 2 given the
/// reduced drive X = vr + w/eps. Throws LockedInSignal when X < 4/pi.
double solve_h_m_reduced(double drive);

/// Physical form: V_R + W R^2 / zeta = (4/pi) V_S sqrt(h/2) E(sqrt(2/h)).
double solve_h_m(double rack_velocity, double load, double friction, double radius, double skipping_velocity);

/// Skipping pinion velocity from h_m and the rotation-orbit formula.
/// Throws LockedInSignal on the locked-in side.
double pinion_velocity_weak(double rack_velocity, double load, double friction, double radius,
                            double skipping_velocity);

struct WeakResponse {
    bool locked = false;
    double vp = 0.0;   ///< V_P / V_S (equal to vr when locked)
    double h_m = 0.0;  ///< rotation energy; 0 when locked
};

/// Never throws for eps > 0, w >= 0, vr >= 0.
WeakResponse weak_response(double vr, double w, double eps);

struct StallResult {
    std::optional<double> load;  ///< stall load; empty when V_P does not vanish below the upper bound
    double vp_at_bound = 0.0;    ///< V_P at the upper end of the search range
};

/// Load W in (0, F) where the weak-dissipation pinion velocity vanishes,
/// bisected to 1e-10 F.
StallResult stall_force_weak(double rack_velocity, double friction, double radius, double skipping_velocity,
                             double force);

/// Reduced stall load w_s in (0, 1).
StallResult stall_force_weak_ratio(double vr, double eps);

// ---- strong dissipation (overdamped) --------------------------------------

/// tau = lambda / sqrt((V_R + W R^2/zeta)^2 - (F R^2/zeta)^2). Throws
/// LockedInSignal when the root is imaginary.
double overdamped_period(double rack_velocity, double load, double friction, double radius, double force,
                         double wavelength);

/// Closed-form overdamped phase u(t), continuous in t (one full turn lost per
/// tau). The default start phase is u(0) = 2 atan(F / (zeta V_R / R^2 + W)).
double overdamped_trajectory(double t, double rack_velocity, double load, double friction, double radius,
                             double force, double wavelength, std::optional<double> u_start = std::nullopt);

/// V_R - sqrt((V_R + W R^2/zeta)^2 - (F R^2/zeta)^2), or V_R when locked in.
double pinion_velocity_overdamped(double rack_velocity, double load, double friction, double radius,
                                  double force);

/// Reduced form: vr - sqrt((vr + w/eps)^2 - 1/eps^2), or vr when locked in.
double overdamped_velocity_ratio(double vr, double w, double eps);

/// W_s = F (sqrt(1 + s^2) - s), s = zeta V_R / (F R^2).
double stall_force_strong(double rack_velocity, double friction, double radius, double force);

/// Reduced form with s = eps vr.
double stall_force_strong_ratio(double vr, double eps);

}  // namespace rackpinion
