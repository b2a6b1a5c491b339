#include "rackpinion/dissipative.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rackpinion/errors.hpp"
#include "rackpinion/special_functions.hpp"

namespace rackpinion {

namespace {

using std::numbers::pi;
constexpr double kFourOverPi = 4.0 / pi;

void require_friction(double friction, const char* who) {
    if (!(friction > 0.0)) throw DomainError(std::string(who) + ": requires zeta > 0");
}

/// Mean |du/dt| on the rotation orbit of energy h (units of 1/T).
double rotation_speed(double h) {
    const double k = std::sqrt(2.0 / h);
    if (k >= 1.0) return 0.0;
    return pi / (k * ellip_K(k));
}

/// V_R - V_P on the overdamped branch, written without cancellation:
/// sqrt(A^2 - c^2) = A - c^2 / (A + sqrt(A^2 - c^2)).
double overdamped_slip(double drive, double critical) {
    return std::sqrt((drive - critical) * (drive + critical));
}

}  // namespace

bool DissipativeRegimeInputs::weak_valid() const noexcept {
    return friction * rack_velocity / (radius * radius) + load < force_amplitude;
}

bool DissipativeRegimeInputs::overdamped_skipping() const noexcept {
    return friction > 0.0 && friction * rack_velocity / (radius * radius) + load > force_amplitude;
}

double dissipation_force_scale(double friction, double wavelength, double inertia, double radius) {
    if (!(friction >= 0.0)) throw DomainError("dissipation_force_scale: zeta must be non-negative");
    if (!(wavelength > 0.0 && inertia > 0.0 && radius > 0.0))
        throw DomainError("dissipation_force_scale: lambda, I and R must be positive");
    return friction * friction * wavelength / (2.0 * pi * inertia * radius * radius);
}

double lockin_threshold_weak(double load, double force, double dissipation_force, double friction,
                             double radius) {
    require_friction(friction, "lockin_threshold_weak");
    const double margin = kFourOverPi * std::sqrt(force * dissipation_force) - load;
    if (!(margin > 0.0)) throw NoLockIn("no lock-in: load exceeds (4/pi) sqrt(F F_D)");
    return margin * radius * radius / friction;
}

double lockin_threshold_weak_ratio(double eps, double w) {
    if (!(eps > 0.0)) throw DomainError("lockin_threshold_weak_ratio: requires eps > 0");
    const double t = kFourOverPi - w / eps;
    if (!(t > 0.0)) throw NoLockIn("no lock-in: w >= (4/pi) eps");
    return t;
}

double h_m_balance(double h) {
    if (!(h >= 2.0)) throw DomainError("h_m_balance: requires h >= 2");
    return kFourOverPi * std::sqrt(h / 2.0) * ellip_E(std::sqrt(2.0 / h));
}

double solve_h_m_reduced(double drive) {
    if (!(drive >= kFourOverPi)) throw LockedInSignal("locked in: drive below (4/pi) V_S");
    if (drive == kFourOverPi) return 2.0;
    // The balance is increasing in h and behaves like sqrt(2h) for large h.
    double lo = 2.0;
    double hi = std::max(4.0, drive * drive);
    while (h_m_balance(hi) < drive) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h_m_balance(mid) < drive)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double solve_h_m(double rack_velocity, double load, double friction, double radius, double skipping_velocity) {
    require_friction(friction, "solve_h_m");
    if (!(skipping_velocity > 0.0)) throw DomainError("solve_h_m: V_S must be positive");
    const double drive = (rack_velocity + load * radius * radius / friction) / skipping_velocity;
    return solve_h_m_reduced(drive);
}

double pinion_velocity_weak(double rack_velocity, double load, double friction, double radius,
                            double skipping_velocity) {
    const double h = solve_h_m(rack_velocity, load, friction, radius, skipping_velocity);
    return rack_velocity - skipping_velocity * rotation_speed(h);
}

WeakResponse weak_response(double vr, double w, double eps) {
    if (!(eps > 0.0)) throw DomainError("weak_response: requires eps > 0");
    const double drive = vr + w / eps;
    if (drive < kFourOverPi) return {true, vr, 0.0};
    const double h = solve_h_m_reduced(drive);
    return {false, vr - rotation_speed(h), h};
}

StallResult stall_force_weak_ratio(double vr, double eps) {
    auto vp = [&](double w) { return weak_response(vr, w, eps).vp; };
    StallResult out;
    const double upper = 1.0 - 1e-15;
    out.vp_at_bound = vp(upper);
    if (vp(0.0) <= 0.0) {
        out.load = 0.0;
        return out;
    }
    if (out.vp_at_bound > 0.0) return out;
    double lo = 0.0, hi = upper;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (vp(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.load = 0.5 * (lo + hi);
    return out;
}

StallResult stall_force_weak(double rack_velocity, double friction, double radius, double skipping_velocity,
                             double force) {
    require_friction(friction, "stall_force_weak");
    if (!(skipping_velocity > 0.0 && force > 0.0 && radius > 0.0))
        throw DomainError("stall_force_weak: V_S, F and R must be positive");
    // eps = zeta V_S / (F R^2)
    const double eps = friction * skipping_velocity / (force * radius * radius);
    StallResult r = stall_force_weak_ratio(rack_velocity / skipping_velocity, eps);
    if (r.load) *r.load *= force;
    r.vp_at_bound *= skipping_velocity;
    return r;
}

double overdamped_period(double rack_velocity, double load, double friction, double radius, double force,
                         double wavelength) {
    require_friction(friction, "overdamped_period");
    const double r2z = radius * radius / friction;
    const double drive = rack_velocity + load * r2z;
    const double critical = force * r2z;
    if (!(drive > critical)) throw LockedInSignal("locked in: winding period is imaginary");
    return wavelength / overdamped_slip(drive, critical);
}

double overdamped_trajectory(double t, double rack_velocity, double load, double friction, double radius,
                             double force, double wavelength, std::optional<double> u_start) {
    const double tau = overdamped_period(rack_velocity, load, friction, radius, force, wavelength);
    const double a = force / (friction * rack_velocity / (radius * radius) + load);
    const double b = std::sqrt((1.0 - a) * (1.0 + a));
    const double u0 = u_start.value_or(2.0 * std::atan(a));

    // tan(u/2) = -a - b tan(pi t / tau - phi); phi in (-pi/2, pi/2] fixes u(0).
    double sh = std::sin(0.5 * u0), ch = std::cos(0.5 * u0);
    if (ch < 0.0) {
        sh = -sh;
        ch = -ch;
    }
    const double phi = std::atan2(sh + a * ch, b * ch);
    const double theta = pi * t / tau - phi;
    const double poles = std::floor((theta + 0.5 * pi) / pi) - std::floor((0.5 * pi - phi) / pi);
    const double base0 = 2.0 * std::atan(-a - b * std::tan(-phi));
    const double offset = 2.0 * pi * std::nearbyint((u0 - base0) / (2.0 * pi));
    return 2.0 * std::atan(-a - b * std::tan(theta)) - 2.0 * pi * poles + offset;
}

double pinion_velocity_overdamped(double rack_velocity, double load, double friction, double radius,
                                  double force) {
    require_friction(friction, "pinion_velocity_overdamped");
    const double r2z = radius * radius / friction;
    const double drive = rack_velocity + load * r2z;
    const double critical = force * r2z;
    if (!(drive > critical)) return rack_velocity;
    return -load * r2z + critical * critical / (drive + overdamped_slip(drive, critical));
}

double overdamped_velocity_ratio(double vr, double w, double eps) {
    if (!(eps > 0.0)) throw DomainError("overdamped_velocity_ratio: requires eps > 0");
    const double drive = vr + w / eps;
    const double critical = 1.0 / eps;
    if (!(drive > critical)) return vr;
    return -w / eps + critical * critical / (drive + overdamped_slip(drive, critical));
}

double stall_force_strong(double rack_velocity, double friction, double radius, double force) {
    require_friction(friction, "stall_force_strong");
    const double s = friction * rack_velocity / (force * radius * radius);
    return force / (std::sqrt(1.0 + s * s) + s);
}

double stall_force_strong_ratio(double vr, double eps) {
    const double s = eps * vr;
    return 1.0 / (std::sqrt(1.0 + s * s) + s);
}

}  // namespace rackpinion
