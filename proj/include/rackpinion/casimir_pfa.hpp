#pragma once
// Lateral Casimir force between a corrugated cylinder (pinion) and a
// corrugated plate (rack) in the proximity force approximation, for perfect
// metals and to leading order in the corrugation amplitudes.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace rackpinion {

/// hbar * c in J m (CODATA hbar times the exact speed of light).
inline constexpr double kHbarC = 3.16152677e-26;

/// Gap below which finite-conductivity corrections are flagged.
inline constexpr double kPlasmaAdvisoryGap = 1e-6;

struct PfaInputs {
    double gap = 0.0;         ///< H, nearest surface distance [m]
    double wavelength = 0.0;  ///< lambda [m]
    double amp_pinion = 0.0;  ///< a1 [m]
    double amp_rack = 0.0;    ///< a2 [m]
    double length = 0.0;      ///< L [m]
    double radius = 0.0;      ///< R [m]
    double density = 0.0;     ///< rho [kg/m^3]
    /// Replaces the empirical alpha(H/lambda), e.g. with tabulated exact values.
    std::function<double(double)> alpha_override;
};

/// alpha_e(x) = cosh((12 pi / sqrt 35) x)^(-4/9), x = H / lambda >= 0.
double alpha_empirical(double x);

/// alpha(H/lambda) from the override hook if set, else alpha_empirical.
double alpha_factor(const PfaInputs& inp);

/// Force amplitude F [N] of F_lateral = -F sin(2 pi (x - y) / lambda).
double lateral_force_amplitude(const PfaInputs& inp);

/// Skipping velocity V_S [m/s] for a solid gold-like cylinder of density rho;
/// independent of L.
double skipping_velocity_physical(const PfaInputs& inp);

/// Validity advisories (corrugation not small against the gap, H > R,
/// sub-plasma-wavelength gap). Never throws for valid-but-dubious inputs.
std::vector<std::string> pfa_advisories(const PfaInputs& inp);

struct SkipVelocityPoint {
    double gap;                ///< H [m]
    double skipping_velocity;  ///< V_S [m/s]
    double angular_velocity;   ///< V_S / R [rad/s]
};

/// V_S over n geometrically spaced gaps in [h_min, h_max]; the gap field of
/// `base` is ignored.
std::vector<SkipVelocityPoint> skip_velocity_scan(const PfaInputs& base, double h_min, double h_max,
                                                  std::size_t n_points);

}  // namespace rackpinion
