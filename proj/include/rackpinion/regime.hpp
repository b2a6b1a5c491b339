#pragma once

#include <optional>
#include <string_view>

namespace rackpinion {

/// Transduction behavior of the pinion.
enum class Regime {
    LockedIn,     ///< jerk-averaged pinion velocity equals the rack velocity
    SkipForward,  ///< teeth skipped, net pinion velocity > 0
    SkipReverse,  ///< teeth skipped, net pinion velocity < 0 (reverse gear)
    Separatrix,   ///< on (or numerically indistinguishable from) the boundary
    Stalled,      ///< skipping with |V_P| below kStallVelocity
};

/// |V_P| / V_S below which a skipping state is reported as Stalled.
inline constexpr double kStallVelocity = 1e-3;

std::string_view regime_name(Regime r) noexcept;
std::optional<Regime> parse_regime(std::string_view name) noexcept;

/// Maps a skipping velocity (in units of V_S) to its label.
Regime skipping_label(double vp_over_vs) noexcept;

inline bool is_skipping(Regime r) noexcept {
    return r == Regime::SkipForward || r == Regime::SkipReverse || r == Regime::Stalled;
}

}  // namespace rackpinion
