#pragma once
// Physical device description and its reduction to the dimensionless
// pendulum  u' = v,  v' = -sin u - eps (v + V_R/V_S) - W/F.
// Everything here is SI.

#include <optional>
#include <string>
#include <vector>

#include "rackpinion/casimir_pfa.hpp"

namespace rackpinion {

struct PhysicalDevice {
    double pinion_radius = 0.0;   ///< R [m]
    double pinion_length = 0.0;   ///< L [m]
    double wavelength = 0.0;      ///< lambda [m]
    double amp_pinion = 0.0;      ///< a1 [m]
    double amp_rack = 0.0;        ///< a2 [m]
    double gap = 0.0;             ///< H [m]
    double density = 0.0;         ///< rho [kg/m^3]
    double friction = 0.0;        ///< zeta, rotational [kg m^2/s]
    double load = 0.0;            ///< W [N]
    double rack_velocity = 0.0;   ///< V_R [m/s], >= 0
    std::optional<double> force_override;    ///< F [N]; PFA value when unset
    std::optional<double> inertia_override;  ///< I [kg m^2]; solid cylinder when unset

    /// Throws DomainError on a hard invariant violation; returns advisories
    /// (e.g. a1 > H/5) that callers should surface but not treat as fatal.
    std::vector<std::string> validate() const;

    PfaInputs pfa_inputs() const;
};

struct DimensionlessParams {
    double epsilon = 0.0;            ///< T zeta / I
    double load_ratio = 0.0;         ///< w = W / F
    double v0 = 0.0;                 ///< initial du/dt in units of 1/T
    double rack_ratio = 0.0;         ///< V_R / V_S
    double time_scale = 0.0;         ///< T [s]
    double skipping_velocity = 0.0;  ///< V_S [m/s]
    double force_amplitude = 0.0;    ///< F [N]
    double dissipation_force = 0.0;  ///< F_D [N]
    double moment_of_inertia = 0.0;  ///< I [kg m^2]
};

/// I = pi rho L R^4 / 2.
double moment_of_inertia_solid_cylinder(double density, double radius, double length);

double moment_of_inertia(const PhysicalDevice& dev);

/// F from the override, else from the PFA force formula.
double force_amplitude(const PhysicalDevice& dev);

/// Reduces the device. `pinion_initial_velocity` is dx/dt at t = 0; the
/// default rest start gives v0 = -V_R / V_S.
DimensionlessParams nondimensionalize(const PhysicalDevice& dev, double pinion_initial_velocity = 0.0);

}  // namespace rackpinion
