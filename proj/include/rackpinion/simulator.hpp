#pragma once
// Direct integration of the reduced equation of motion
//   u' = v,   v' = -sin u - eps (v + vr) - w
// (time in units of T, vr = V_R / V_S), regime detection, time-averaged
// pinion velocity, and numerical location of the skipping boundary.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rackpinion/regime.hpp"

namespace rackpinion {

struct PendulumParams {
    double u0 = 0.0;   ///< initial phase mismatch [rad]
    double v0 = 0.0;   ///< initial du/dt
    double eps = 0.0;  ///< friction, T zeta / I
    double w = 0.0;    ///< load ratio W / F
    /// V_R / V_S inside the friction term. Unset means rest start, vr = -v0.
    std::optional<double> rack_ratio;

    double vr() const noexcept { return rack_ratio.value_or(-v0); }

    /// Pinion initially at rest: v0 = -vr.
    static PendulumParams rest_start(double u0, double vr, double eps = 0.0, double w = 0.0) {
        return {u0, -vr, eps, w, vr};
    }
};

enum class Integrator {
    Rk45,  ///< adaptive Dormand-Prince 5(4) with dense output (default)
    Rk4,   ///< fixed-step classical RK4
};

struct IntegratorOptions {
    Integrator method = Integrator::Rk45;
    double tol = 1e-10;              ///< per-step local error bound (RK45)
    double output_interval = 0.05;   ///< sample spacing in units of T
    double rk4_step = 0.01;          ///< step for Integrator::Rk4
    double min_step = 1e-12;         ///< RK45 step-size underflow threshold
};

struct PhaseSample {
    double t = 0.0;
    double u_wrapped = 0.0;  ///< in (-pi, pi]
    double v = 0.0;
    std::int64_t turns = 0;  ///< unwrapped u = u_wrapped + 2 pi turns

    double u() const noexcept;
};

struct IntegratorStats {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    double max_error = 0.0;  ///< largest accepted normalized error estimate
    double last_step = 0.0;
};

class Trajectory {
public:
    PendulumParams params;
    IntegratorOptions options;
    IntegratorStats stats;
    std::vector<PhaseSample> samples;

    double duration() const noexcept { return samples.empty() ? 0.0 : samples.back().t - samples.front().t; }
    /// Unwrapped phase change between two samples, free of cancellation.
    double phase_change(std::size_t from, std::size_t to) const noexcept;
    /// Index of the first sample with t >= time.
    std::size_t index_at(double time) const noexcept;
};

/// Step-size underflow; carries everything integrated before the failure.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, Trajectory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

/// Integrates for `duration` time units. The first sample is the initial state.
Trajectory integrate(const PendulumParams& params, double duration, const IntegratorOptions& options = {});

/// Continues an existing trajectory by `extra` time units (same options).
void extend(Trajectory& traj, double extra);

/// Fraction of the run discarded as transient before averaging.
inline constexpr double kTransientFraction = 0.2;

/// Mean du/dt over [t_begin, t_end], trimmed to whole periods of the motion
/// (first and last crossing of a fixed Poincare section) when at least two
/// crossings exist. Exact for periodic orbits up to the integration error.
double mean_phase_velocity(const Trajectory& traj, double t_begin, double t_end);

/// V_P = V_R + V_S <v> over the last 80% of the run. Throws InsufficientData
/// when the window holds fewer than `min_periods` characteristic periods.
double average_pinion_velocity(const Trajectory& traj, double rack_velocity, double skipping_velocity,
                               double min_periods = 200.0);

struct RegimeReport {
    Regime regime = Regime::LockedIn;
    double vp = 0.0;  ///< V_P / V_S
    /// For Separatrix: V_P / V_S of the bounded and the winding epochs.
    std::optional<std::pair<double, double>> candidates;
    std::string diagnostics;
};

/// Classifies the last 80% of the run. LockedIn when u stays within one
/// period and the net winding is below 2 pi (vp is then V_R/V_S by
/// definition); Separatrix when one half of the window is bounded and the
/// other winds; otherwise skipping by the sign of the averaged V_P.
RegimeReport detect_regime(const Trajectory& traj, double rack_velocity, double skipping_velocity);

/// Estimated period of the motion (libration, rotation or overdamped winding).
double characteristic_period(const PendulumParams& params);

struct MeasureOptions {
    IntegratorOptions integrator;
    double periods = 200.0;       ///< characteristic periods inside the averaging window
    double min_duration = 200.0;  ///< lower bound on the run length
    double max_duration = 4e5;    ///< upper bound on the initial run length
    int max_doublings = 3;        ///< auto-extension up to 8x
    double convergence = 1e-3;    ///< relative agreement of <v> between window halves
    bool keep_trajectory = false;
};

struct Measurement {
    RegimeReport report;
    double duration = 0.0;
    int doublings = 0;
    IntegratorStats stats;
    std::optional<Trajectory> trajectory;  ///< when MeasureOptions::keep_trajectory
};

/// Runs, classifies, and extends the run (doubling) while the window halves
/// disagree or the window mixes bounded and winding motion.
Measurement measure(const PendulumParams& params, const MeasureOptions& options = {});

/// Options suited to classification only (shorter runs).
MeasureOptions classification_options();

/// Rack velocity (units of V_S) of the skipping transition for a rest-start
/// pinion at u0, bisected on [bracket.first, bracket.second] to `resolution`.
/// Throws BracketError if both ends classify the same way.
double find_boundary(double u0, double eps, double w, std::pair<double, double> bracket,
                     double resolution = 1e-4, const MeasureOptions& options = classification_options());

}  // namespace rackpinion
