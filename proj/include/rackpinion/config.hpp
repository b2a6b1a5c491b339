#pragma once
// Flat key = value device description.
//
//   # comment
//   R       = 10 um        length: m, mm, um, nm
//   L       = 10 um
//   lambda  = 1 um
//   a1      = 10 nm
//   a2      = 10 nm
//   H       = 100 nm
//   rho     = 19.3 g/cm3   density: kg/m3, g/cm3
//   zeta    = 0            rotational friction: kg*m2/s
//   W       = 0            load: N, mN, uN, nN, pN, fN
//   V_R     = 1 mm/s       velocity: m/s, mm/s, um/s, nm/s
//   F_override = 1 pN      optional, replaces the PFA force
//   I_override = 3e-21     optional, kg*m2, replaces the solid cylinder
//   x0_dot  = 0            optional initial pinion velocity, velocity units
//
// A bare number is taken in SI units.

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rackpinion/units.hpp"

namespace rackpinion {

struct DeviceConfig {
    PhysicalDevice device;
    double x0_dot = 0.0;
    std::set<std::string> present;  ///< keys that appeared in the file

    /// Required keys that are absent: R, L, lambda, zeta, W, V_R always; rho
    /// unless I_override is given; a1, a2, H unless F_override is given.
    std::vector<std::string> missing_keys() const;
};

/// All recognised keys, in documentation order.
const std::vector<std::string_view>& config_keys();

/// Parses a config. Throws ConfigError (with the line number and key name) on
/// unknown keys, duplicate keys, unparsable values, or unknown units.
DeviceConfig parse_config(std::istream& in);
DeviceConfig parse_config_string(std::string_view text);
DeviceConfig load_config(const std::string& path);

/// Throws ConfigError naming every missing key.
void require_complete(const DeviceConfig& cfg);

}  // namespace rackpinion
