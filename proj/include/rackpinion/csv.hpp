#pragma once
// Flat-file output: CSV tables with a '#'-prefixed metadata block, and the
// trajectory export with its JSON sidecar.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rackpinion/casimir_pfa.hpp"
#include "rackpinion/simulator.hpp"
#include "rackpinion/sweep.hpp"

namespace rackpinion {

inline constexpr const char* kToolVersion = "0.1.0";

/// Ordered key/value pairs written as "# key: value" lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trippable decimal; "nan"/"inf" for non-finite values.
std::string format_number(double x);

void write_metadata(std::ostream& out, const Metadata& meta);

/// Tool version, sweep kind, axes, fixed parameters, and solver settings.
Metadata sweep_metadata(const SweepSpec& spec);

/// phase-diagram: u0,V_R_over_V_S,regime,V_P_over_V_S,method
/// vp-curve:      V_R_over_V_S,V_P_over_V_S,regime,method
/// force-velocity: W_over_F,V_P_over_V_S,stalled
/// Failed cells carry regime "failed"; their reasons go to the metadata block.
void write_sweep_csv(std::ostream& out, const SweepResult& result, Metadata meta);

/// u0,V_R_over_V_S,method
void write_boundary_csv(std::ostream& out, const SweepResult& result, Metadata meta);

/// t,u,v,u_wrapped (dimensionless; u unwrapped).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Parameters, integrator settings and statistics, plus any extra fields
/// (regime, V_P) as a JSON object.
std::string trajectory_sidecar_json(const Trajectory& traj, const Metadata& extra);

/// H_m,V_S_m_per_s,omega_rad_per_s
void write_skip_velocity_csv(std::ostream& out, const std::vector<SkipVelocityPoint>& rows, Metadata meta);

}  // namespace rackpinion
