#include "rackpinion/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <set>
#include <thread>

#include "rackpinion/conservative.hpp"
#include "rackpinion/dissipative.hpp"
#include "rackpinion/errors.hpp"
#include "rackpinion/kernels/kernels.hpp"
#include "rackpinion/special_functions.hpp"

namespace rackpinion {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

MeasureOptions measure_options(const SolverSettings& s, MeasureOptions base) {
    base.integrator.method = s.integrator;
    base.integrator.tol = s.tol;
    base.integrator.rk4_step = s.rk4_step;
    return base;
}

Cell analytic_point(double u0, double vr, double w) {
    Cell c;
    c.method = Method::Analytic;
    if (w == 0.0) {
        c.regime = classify_conservative(u0, vr);
        c.vp = is_skipping(c.regime) ? pinion_velocity_skipping_ratio(u0, vr) : vr;
        return c;
    }
    if (w >= 1.0) {
        c.regime = Regime::SkipReverse;
        c.vp = kNaN;
        c.reason = "no locked regime for W >= F; the frictionless pinion accelerates without bound";
        return c;
    }
    switch (classify_conservative_loaded(u0, vr, w)) {
        case OrbitClass::Libration:
            c.regime = Regime::LockedIn;
            c.vp = vr;
            break;
        case OrbitClass::Separatrix:
            c.regime = Regime::Separatrix;
            c.vp = vr;
            break;
        case OrbitClass::Rotation:
            c.regime = Regime::SkipReverse;
            c.vp = kNaN;
            c.reason = "frictionless pinion under load accelerates without bound";
            break;
    }
    return c;
}

Cell simulated_point(double u0, double vr, double eps, double w, const MeasureOptions& opts) {
    Cell c;
    c.method = Method::Simulated;
    try {
        const Measurement m = measure(PendulumParams::rest_start(u0, vr, eps, w), opts);
        c.regime = m.report.regime;
        c.vp = m.report.vp;
        if (m.report.candidates)
            c.reason = "separatrix candidates " + std::to_string(m.report.candidates->first) + " / " +
                       std::to_string(m.report.candidates->second);
    } catch (const std::exception& e) {
        c.failed = true;
        c.vp = kNaN;
        c.reason = e.what();
    }
    return c;
}

Cell point(double u0, double vr, double eps, double w, const SolverSettings& s, const MeasureOptions& base) {
    if (eps == 0.0) {
        try {
            return analytic_point(u0, vr, w);
        } catch (const std::exception& e) {
            Cell c;
            c.failed = true;
            c.vp = kNaN;
            c.reason = e.what();
            return c;
        }
    }
    return simulated_point(u0, vr, eps, w, measure_options(s, base));
}

// Unloaded frictionless grid: labels from the energy, skipping velocities
// from one batched elliptic-integral call.
void analytic_phase_grid(SweepResult& r, const std::vector<double>& u0s, const std::vector<double>& vrs) {
    std::vector<std::size_t> skip_idx;
    std::vector<double> moduli;
    for (std::size_t i = 0; i < u0s.size(); ++i) {
        for (std::size_t j = 0; j < vrs.size(); ++j) {
            Cell& c = r.cells[i * vrs.size() + j];
            c.method = Method::Analytic;
            const double h = energy_h(u0s[i], vrs[j]);
            switch (classify_conservative(h)) {
                case OrbitClass::Libration:
                    c.regime = Regime::LockedIn;
                    c.vp = vrs[j];
                    break;
                case OrbitClass::Separatrix:
                    c.regime = Regime::Separatrix;
                    c.vp = vrs[j];
                    break;
                case OrbitClass::Rotation:
                    skip_idx.push_back(i * vrs.size() + j);
                    moduli.push_back(std::sqrt(2.0 / h));
                    break;
            }
        }
    }
    std::vector<double> K(moduli.size()), E(moduli.size());
    ellip_KE(moduli, K, E);
    for (std::size_t n = 0; n < skip_idx.size(); ++n) {
        Cell& c = r.cells[skip_idx[n]];
        c.vp = c.coords[1] - std::numbers::pi / (moduli[n] * K[n]);
        c.regime = skipping_label(c.vp);
    }
}

// Fixed-step RK4 classification of a whole row in lock-step lanes.
void rk4_phase_row(SweepResult& r, std::size_t row, double u0, const std::vector<double>& vrs, double eps,
                   double w, const SolverSettings& s) {
    const std::size_t n = vrs.size();
    kernels::PendulumBatch batch(n);
    for (std::size_t j = 0; j < n; ++j) {
        batch.u[j] = u0;
        batch.v[j] = -vrs[j];
        batch.eps[j] = eps;
        batch.drive[j] = vrs[j];
        batch.load[j] = w;
    }
    const MeasureOptions base = classification_options();
    const double duration = std::max(base.min_duration, 10.0 / eps / kTransientFraction);
    const auto steps = static_cast<std::size_t>(std::ceil(duration / s.rk4_step));
    const auto transient = static_cast<std::size_t>(kTransientFraction * static_cast<double>(steps));
    kernels::pendulum_rk4(batch, s.rk4_step, transient);
    batch.reset_extent();
    std::vector<double> start(n);
    for (std::size_t j = 0; j < n; ++j) start[j] = batch.unwrapped(j);
    kernels::pendulum_rk4(batch, s.rk4_step, steps - transient);
    const double window = static_cast<double>(steps - transient) * s.rk4_step;
    for (std::size_t j = 0; j < n; ++j) {
        Cell& c = r.cells[row * n + j];
        c.method = Method::Simulated;
        const double net = batch.unwrapped(j) - start[j];
        if (batch.hi[j] - batch.lo[j] < kTwoPi && std::fabs(net) < kTwoPi) {
            c.regime = Regime::LockedIn;
            c.vp = vrs[j];
        } else {
            c.vp = vrs[j] + net / window;
            c.regime = skipping_label(c.vp);
        }
    }
}

void phase_diagram(SweepResult& r) {
    const auto& spec = r.spec;
    const std::size_t iu = spec.axes[0].name == "u0" ? 0 : 1;
    const auto u0s = spec.axes[iu].values();
    const auto vrs = spec.axes[1 - iu].values();
    const double eps = spec.fixed.at("eps"), w = spec.fixed.at("w");
    // Internally rows are u0 and columns vr; cells are stored in axis order.
    SweepResult tmp;
    tmp.cells.resize(u0s.size() * vrs.size());
    for (std::size_t i = 0; i < u0s.size(); ++i)
        for (std::size_t j = 0; j < vrs.size(); ++j) tmp.cells[i * vrs.size() + j].coords = {u0s[i], vrs[j]};

    if (eps == 0.0 && w == 0.0) {
        analytic_phase_grid(tmp, u0s, vrs);
    } else if (eps > 0.0 && spec.solver.integrator == Integrator::Rk4) {
        parallel_for(u0s.size(), spec.solver.workers,
                     [&](std::size_t i) { rk4_phase_row(tmp, i, u0s[i], vrs, eps, w, spec.solver); });
    } else {
        const MeasureOptions base = classification_options();
        parallel_for(tmp.cells.size(), spec.solver.workers, [&](std::size_t k) {
            Cell& c = tmp.cells[k];
            auto coords = c.coords;
            c = point(coords[0], coords[1], eps, w, spec.solver, base);
            c.coords = std::move(coords);
        });
    }

    r.cells.resize(tmp.cells.size());
    for (std::size_t i = 0; i < u0s.size(); ++i) {
        for (std::size_t j = 0; j < vrs.size(); ++j) {
            Cell c = std::move(tmp.cells[i * vrs.size() + j]);
            const std::size_t dst = iu == 0 ? i * vrs.size() + j : j * u0s.size() + i;
            if (iu == 1) std::swap(c.coords[0], c.coords[1]);
            r.cells[dst] = std::move(c);
        }
    }

    if (!spec.boundary) return;
    const double vr_lo = spec.axes[1 - iu].min, vr_hi = spec.axes[1 - iu].max;
    std::vector<std::optional<BoundaryPoint>> pts(u0s.size());
    std::vector<std::string> why(u0s.size());
    parallel_for(u0s.size(), spec.solver.workers, [&](std::size_t i) {
        try {
            if (eps == 0.0) {
                const double b = w == 0.0 ? skipping_threshold(u0s[i]) : loaded_skipping_threshold(u0s[i], w);
                if (b >= vr_lo && b <= vr_hi) pts[i] = BoundaryPoint{u0s[i], b, Method::Analytic};
                else why[i] = "boundary outside the V_R axis";
            } else {
                const double b = find_boundary(u0s[i], eps, w, {vr_lo, vr_hi}, 1e-4,
                                               measure_options(spec.solver, classification_options()));
                pts[i] = BoundaryPoint{u0s[i], b, Method::Simulated};
            }
        } catch (const std::exception& e) {
            why[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < u0s.size(); ++i) {
        if (pts[i]) r.boundary.push_back(*pts[i]);
        else r.notes.push_back("boundary at u0=" + std::to_string(u0s[i]) + ": " + why[i]);
    }
}

void curve(SweepResult& r) {
    const auto& spec = r.spec;
    const auto xs = spec.axes[0].values();
    r.cells.resize(xs.size());
    parallel_for(xs.size(), spec.solver.workers, [&](std::size_t k) {
        const std::vector<double> coords{xs[k]};
        const double u0 = *spec.parameter("u0", coords), vr = *spec.parameter("vr", coords);
        const double eps = *spec.parameter("eps", coords), w = *spec.parameter("w", coords);
        r.cells[k] = point(u0, vr, eps, w, spec.solver, MeasureOptions{});
        r.cells[k].coords = coords;
    });
}

bool stalled(const Cell& c) { return !c.failed && (c.regime == Regime::Stalled || c.vp <= 0.0); }

void force_velocity(SweepResult& r) {
    curve(r);
    const auto& spec = r.spec;
    const double u0 = spec.fixed.at("u0"), vr = spec.fixed.at("vr"), eps = spec.fixed.at("eps");
    if (eps >= kOverdampedEps) r.stall_load_theory = stall_force_strong_ratio(vr, eps);
    else if (eps > 0.0) r.stall_load_theory = stall_force_weak_ratio(vr, eps).load;
    if (eps == 0.0) return;

    for (std::size_t k = 0; k + 1 < r.cells.size(); ++k) {
        const Cell& a = r.cells[k];
        const Cell& b = r.cells[k + 1];
        if (a.failed || b.failed || !(a.vp > 0.0) || !stalled(b)) continue;
        double lo = a.coords[0], hi = b.coords[0];
        const MeasureOptions opts = measure_options(spec.solver, MeasureOptions{});
        while (hi - lo > 1e-6 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            const Cell c = simulated_point(u0, vr, eps, mid, opts);
            if (c.failed) break;
            (c.vp > 0.0 ? lo : hi) = mid;
        }
        r.stall_load = 0.5 * (lo + hi);
        return;
    }
}

}  // namespace

std::string_view sweep_kind_name(SweepKind k) noexcept {
    switch (k) {
        case SweepKind::PhaseDiagram: return "phase-diagram";
        case SweepKind::VpCurve: return "vp-curve";
        case SweepKind::ForceVelocity: return "force-velocity";
    }
    return "?";
}

std::string_view method_name(Method m) noexcept { return m == Method::Analytic ? "analytic" : "simulated"; }

std::vector<double> Axis::values() const {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = i + 1 == n ? max : min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<std::string> required_parameters(SweepKind kind) {
    switch (kind) {
        case SweepKind::PhaseDiagram: return {"u0", "vr", "eps", "w"};
        case SweepKind::VpCurve: return {"vr", "u0", "eps", "w"};
        case SweepKind::ForceVelocity: return {"w", "vr", "eps", "u0"};
    }
    return {};
}

void SweepSpec::validate() const {
    static const std::set<std::string> known{"u0", "vr", "eps", "w"};
    std::set<std::string> seen;
    for (const auto& a : axes) {
        if (!known.count(a.name)) throw DomainError("sweep: unknown axis '" + a.name + "'");
        if (a.n < 2) throw DomainError("sweep: axis '" + a.name + "' needs at least 2 points");
        if (!(a.max > a.min)) throw DomainError("sweep: axis '" + a.name + "' needs max > min");
        if (!seen.insert(a.name).second) throw DomainError("sweep: axis '" + a.name + "' given twice");
        if (fixed.count(a.name)) throw DomainError("sweep: '" + a.name + "' is both swept and fixed");
    }
    for (const auto& [name, _] : fixed)
        if (!known.count(name)) throw DomainError("sweep: unknown parameter '" + name + "'");
    const std::size_t want_axes = kind == SweepKind::PhaseDiagram ? 2 : 1;
    if (axes.size() != want_axes)
        throw DomainError("sweep: " + std::string(sweep_kind_name(kind)) + " takes " + std::to_string(want_axes) +
                          " axis/axes");
    const auto req = required_parameters(kind);
    for (std::size_t i = 0; i < want_axes; ++i)
        if (std::none_of(axes.begin(), axes.end(), [&](const Axis& a) { return a.name == req[i]; }))
            throw DomainError("sweep: " + std::string(sweep_kind_name(kind)) + " must sweep '" + req[i] + "'");
    std::string missing;
    for (const auto& p : req)
        if (!seen.count(p) && !fixed.count(p)) missing += " " + p;
    if (!missing.empty()) throw DomainError("sweep: missing parameters:" + missing);
    auto check = [&](const std::string& name, double lo, double hi) {
        if (auto it = fixed.find(name); it != fixed.end() && !(it->second >= lo && it->second <= hi))
            throw DomainError("sweep: parameter '" + name + "' out of range");
        for (const auto& a : axes)
            if (a.name == name && !(a.min >= lo && a.max <= hi))
                throw DomainError("sweep: axis '" + name + "' out of range");
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    check("vr", 0.0, inf);
    check("eps", 0.0, inf);
    check("w", 0.0, inf);
    check("u0", -inf, inf);
    if (!(solver.tol > 0.0)) throw DomainError("sweep: tolerance must be positive");
}

std::optional<double> SweepSpec::parameter(std::string_view name, const std::vector<double>& coords) const {
    for (std::size_t i = 0; i < axes.size() && i < coords.size(); ++i)
        if (axes[i].name == name) return coords[i];
    if (auto it = fixed.find(std::string(name)); it != fixed.end()) return it->second;
    return std::nullopt;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i; !failed && (i = next.fetch_add(1)) < count;) {
            try {
                job(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

Cell evaluate_point(double u0, double vr, double eps, double w, const SolverSettings& solver) {
    Cell c = point(u0, vr, eps, w, solver, MeasureOptions{});
    c.coords = {u0, vr};
    return c;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult r;
    r.spec = spec;
    switch (spec.kind) {
        case SweepKind::PhaseDiagram: phase_diagram(r); break;
        case SweepKind::VpCurve: curve(r); break;
        case SweepKind::ForceVelocity: force_velocity(r); break;
    }
    return r;
}

}  // namespace rackpinion
