#pragma once
// Parallel parameter sweeps over the reduced parameters
//   u0, vr = V_R/V_S, eps, w = W/F
// producing the data behind the phase diagrams, V_P(V_R) curves, and
// force-velocity curves. Cells are independent; results are stored in grid
// order so the output does not depend on the number of workers.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rackpinion/regime.hpp"
#include "rackpinion/simulator.hpp"

namespace rackpinion {

enum class SweepKind { PhaseDiagram, VpCurve, ForceVelocity };

std::string_view sweep_kind_name(SweepKind k) noexcept;

enum class Method { Analytic, Simulated };

std::string_view method_name(Method m) noexcept;

/// Linearly spaced axis over [min, max] with n >= 2 points.
struct Axis {
    std::string name;  ///< one of u0, vr, eps, w
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 2;

    std::vector<double> values() const;
};

struct SolverSettings {
    double tol = 1e-10;
    Integrator integrator = Integrator::Rk45;
    double rk4_step = 0.01;
    std::size_t workers = 0;  ///< 0 = hardware concurrency
};

struct SweepSpec {
    SweepKind kind = SweepKind::PhaseDiagram;
    std::vector<Axis> axes;               ///< phase diagram: (u0, vr); curves: one axis
    std::map<std::string, double> fixed;  ///< remaining parameters
    SolverSettings solver;
    bool boundary = false;  ///< phase diagram: also trace the skipping boundary

    /// Throws DomainError unless n >= 2 per axis, axes are disjoint and not
    /// fixed, and axes plus fixed parameters cover what the kind requires.
    void validate() const;

    /// Parameter value for a cell (swept or fixed); nullopt if absent.
    std::optional<double> parameter(std::string_view name, const std::vector<double>& coords) const;
};

/// Parameters a sweep kind needs, swept or fixed.
std::vector<std::string> required_parameters(SweepKind kind);

struct Cell {
    std::vector<double> coords;  ///< one value per axis
    Regime regime = Regime::LockedIn;
    double vp = 0.0;  ///< V_P / V_S; NaN when there is no steady value
    Method method = Method::Analytic;
    bool failed = false;
    std::string reason;  ///< set when failed or when the label needs a note
};

struct BoundaryPoint {
    double u0;
    double vr;
    Method method;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<Cell> cells;  ///< row-major, first axis slowest
    std::vector<BoundaryPoint> boundary;
    std::vector<std::string> notes;  ///< e.g. boundary points that could not be bracketed
    /// Force-velocity: load (units of F) at which V_P changes sign.
    std::optional<double> stall_load;
    /// Force-velocity: closed-form stall load for comparison, when available.
    std::optional<double> stall_load_theory;
};

/// Runs `count` independent jobs on up to `workers` threads (0 = hardware
/// concurrency). job(i) must only touch slot i of any shared output.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job);

SweepResult run_sweep(const SweepSpec& spec);

/// Single reduced-parameter point: analytic when eps == 0, simulated otherwise.
Cell evaluate_point(double u0, double vr, double eps, double w, const SolverSettings& solver);

/// eps above which the overdamped closed form is used for single-point queries.
inline constexpr double kOverdampedEps = 20.0;

}  // namespace rackpinion
