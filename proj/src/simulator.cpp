#include "rackpinion/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "rackpinion/conservative.hpp"
#include "rackpinion/errors.hpp"
#include "rackpinion/kernels/kernels.hpp"
#include "rackpinion/special_functions.hpp"

namespace rackpinion {

namespace {

using std::numbers::pi;
constexpr double kTwoPi = 2.0 * pi;

struct Derivative {
    double du, dv;
};

struct Rhs {
    double eps, vr, w;
    Derivative operator()(double u, double v) const noexcept {
        return {v, -std::sin(u) - eps * (v + vr) - w};
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Dense {
    std::array<double, 5> u, v;
    double eval_u(double th) const noexcept {
        const double th1 = 1.0 - th;
        return u[0] + th * (u[1] + th1 * (u[2] + th * (u[3] + th1 * u[4])));
    }
    double eval_v(double th) const noexcept {
        const double th1 = 1.0 - th;
        return v[0] + th * (v[1] + th1 * (v[2] + th * (v[3] + th1 * v[4])));
    }
};

PhaseSample make_sample(double t, double u_local, double v, std::int64_t turns) {
    const double k = std::nearbyint(u_local / kTwoPi);
    return {t, u_local - k * kTwoPi, v, turns + static_cast<std::int64_t>(k)};
}

void validate_options(const IntegratorOptions& o) {
    if (!(o.tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
    if (!(o.output_interval > 0.0)) throw DomainError("integrate: output interval must be positive");
    if (o.method == Integrator::Rk4 && !(o.rk4_step > 0.0)) throw DomainError("integrate: RK4 step must be positive");
}

void run_rk45(Trajectory& traj, double t_end) {
    const auto& opt = traj.options;
    const Rhs f{traj.params.eps, traj.params.vr(), traj.params.w};
    const PhaseSample start = traj.samples.back();
    const double t0 = start.t;
    double t = t0;
    double u = start.u_wrapped, v = start.v;
    std::int64_t turns = start.turns;
    double h = traj.stats.last_step > 0.0 ? traj.stats.last_step : std::min(0.01, opt.output_interval);
    std::uint64_t out_n = 1;
    double next_out = t0 + opt.output_interval;

    Derivative k1 = f(u, v);
    bool last = false;
    while (!last) {
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        const Derivative k2 = f(u + h * (a21 * k1.du), v + h * (a21 * k1.dv));
        const Derivative k3 = f(u + h * (a31 * k1.du + a32 * k2.du), v + h * (a31 * k1.dv + a32 * k2.dv));
        const Derivative k4 = f(u + h * (a41 * k1.du + a42 * k2.du + a43 * k3.du),
                                v + h * (a41 * k1.dv + a42 * k2.dv + a43 * k3.dv));
        const Derivative k5 = f(u + h * (a51 * k1.du + a52 * k2.du + a53 * k3.du + a54 * k4.du),
                                v + h * (a51 * k1.dv + a52 * k2.dv + a53 * k3.dv + a54 * k4.dv));
        const Derivative k6 = f(u + h * (a61 * k1.du + a62 * k2.du + a63 * k3.du + a64 * k4.du + a65 * k5.du),
                                v + h * (a61 * k1.dv + a62 * k2.dv + a63 * k3.dv + a64 * k4.dv + a65 * k5.dv));
        const double un = u + h * (a71 * k1.du + a73 * k3.du + a74 * k4.du + a75 * k5.du + a76 * k6.du);
        const double vn = v + h * (a71 * k1.dv + a73 * k3.dv + a74 * k4.dv + a75 * k5.dv + a76 * k6.dv);
        const Derivative k7 = f(un, vn);

        const double err_u = h * (e1 * k1.du + e3 * k3.du + e4 * k4.du + e5 * k5.du + e6 * k6.du + e7 * k7.du);
        const double err_v = h * (e1 * k1.dv + e3 * k3.dv + e4 * k4.dv + e5 * k5.dv + e6 * k6.dv + e7 * k7.dv);
        const double v_scale = std::max({1.0, std::fabs(v), std::fabs(vn)});
        const double err = std::max(std::fabs(err_u) / opt.tol, std::fabs(err_v) / (opt.tol * v_scale));

        if (!(err <= 1.0)) {
            ++traj.stats.rejected;
            last = false;
            const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h *= std::min(fac, 0.9);
            if (h < opt.min_step) {
                throw IntegrationFailure("integrate: step size underflow at t = " + std::to_string(t),
                                         Trajectory(traj));
            }
            continue;
        }

        ++traj.stats.accepted;
        traj.stats.max_error = std::max(traj.stats.max_error, err);
        const double t_new = last ? t_end : t + h;

        if (next_out < t_new) {
            Dense d;
            const double du = un - u, dv = vn - v;
            const double bu = h * k1.du - du, bv = h * k1.dv - dv;
            d.u = {u, du, bu, du - h * k7.du - bu,
                   h * (d1 * k1.du + d3 * k3.du + d4 * k4.du + d5 * k5.du + d6 * k6.du + d7 * k7.du)};
            d.v = {v, dv, bv, dv - h * k7.dv - bv,
                   h * (d1 * k1.dv + d3 * k3.dv + d4 * k4.dv + d5 * k5.dv + d6 * k6.dv + d7 * k7.dv)};
            while (next_out < t_new) {
                const double th = (next_out - t) / h;
                traj.samples.push_back(make_sample(next_out, d.eval_u(th), d.eval_v(th), turns));
                ++out_n;
                next_out = t0 + static_cast<double>(out_n) * opt.output_interval;
            }
        }

        const double wraps = std::nearbyint(un / kTwoPi);
        u = un - wraps * kTwoPi;
        turns += static_cast<std::int64_t>(wraps);
        v = vn;
        t = t_new;
        k1 = wraps != 0.0 ? f(u, v) : k7;

        if (next_out <= t_new || last) {
            if (traj.samples.back().t < t) traj.samples.push_back(make_sample(t, u, v, turns));
            while (next_out <= t_new) {
                ++out_n;
                next_out = t0 + static_cast<double>(out_n) * opt.output_interval;
            }
        }

        if (!last) {
            const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            traj.stats.last_step = h * std::clamp(fac, 0.2, 5.0);
            h = traj.stats.last_step;
        }
    }
}

void run_rk4(Trajectory& traj, double t_end) {
    const auto& opt = traj.options;
    const PhaseSample start = traj.samples.back();
    const double span = t_end - start.t;
    const auto steps = static_cast<std::uint64_t>(std::ceil(span / opt.rk4_step - 1e-9));
    const double dt = span / static_cast<double>(steps);
    const auto per_sample =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(opt.output_interval / dt + 1e-9)));

    kernels::PendulumBatch lane(1);
    lane.u[0] = start.u_wrapped;
    lane.v[0] = start.v;
    lane.turns[0] = static_cast<double>(start.turns);
    lane.eps[0] = traj.params.eps;
    lane.drive[0] = traj.params.vr();
    lane.load[0] = traj.params.w;
    lane.reset_extent();

    std::uint64_t done = 0;
    while (done < steps) {
        const std::uint64_t chunk = std::min(per_sample, steps - done);
        kernels::scalar::pendulum_rk4(lane, dt, chunk);
        done += chunk;
        const double t = done == steps ? t_end : start.t + static_cast<double>(done) * dt;
        traj.samples.push_back(make_sample(t, lane.u[0], lane.v[0], static_cast<std::int64_t>(lane.turns[0])));
    }
    traj.stats.accepted += steps;
    traj.stats.last_step = dt;
}

void advance(Trajectory& traj, double t_end) {
    if (traj.options.method == Integrator::Rk45)
        run_rk45(traj, t_end);
    else
        run_rk4(traj, t_end);
}

double hermite(double g0, double g1, double s0, double s1, double th) {
    const double th2 = th * th, th3 = th2 * th;
    return (2 * th3 - 3 * th2 + 1) * g0 + (th3 - 2 * th2 + th) * s0 + (-2 * th3 + 3 * th2) * g1 +
           (th3 - th2) * s1;
}

struct WindowShape {
    double extent = 0.0;  ///< max - min of unwrapped u
    double net = 0.0;     ///< u(end) - u(start)
};

WindowShape shape(const Trajectory& traj, std::size_t i0, std::size_t i1) {
    WindowShape s;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) {
        const double g = traj.phase_change(i0, i);
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    s.extent = hi - lo;
    s.net = traj.phase_change(i0, i1);
    return s;
}

bool bounded(const WindowShape& s) { return s.extent < kTwoPi && std::fabs(s.net) < kTwoPi; }

}  // namespace

double PhaseSample::u() const noexcept { return u_wrapped + kTwoPi * static_cast<double>(turns); }

double Trajectory::phase_change(std::size_t from, std::size_t to) const noexcept {
    const auto& a = samples[from];
    const auto& b = samples[to];
    return kTwoPi * static_cast<double>(b.turns - a.turns) + (b.u_wrapped - a.u_wrapped);
}

std::size_t Trajectory::index_at(double time) const noexcept {
    auto it = std::lower_bound(samples.begin(), samples.end(), time,
                               [](const PhaseSample& s, double t) { return s.t < t; });
    return static_cast<std::size_t>(std::min(it - samples.begin(), static_cast<std::ptrdiff_t>(samples.size()) - 1));
}

Trajectory integrate(const PendulumParams& params, double duration, const IntegratorOptions& options) {
    if (!(duration > 0.0)) throw DomainError("integrate: duration must be positive");
    validate_options(options);
    if (!std::isfinite(params.u0) || !std::isfinite(params.v0) || !(params.eps >= 0.0) || !std::isfinite(params.w))
        throw DomainError("integrate: parameters must be finite with eps >= 0");
    Trajectory traj;
    traj.params = params;
    traj.options = options;
    const double k = std::nearbyint(params.u0 / kTwoPi);
    traj.samples.push_back({0.0, params.u0 - k * kTwoPi, params.v0, static_cast<std::int64_t>(k)});
    traj.samples.reserve(static_cast<std::size_t>(duration / options.output_interval) + 2);
    advance(traj, duration);
    return traj;
}

void extend(Trajectory& traj, double extra) {
    if (!(extra > 0.0)) throw DomainError("extend: extra duration must be positive");
    if (traj.samples.empty()) throw DomainError("extend: empty trajectory");
    advance(traj, traj.samples.back().t + extra);
}

double mean_phase_velocity(const Trajectory& traj, double t_begin, double t_end) {
    const std::size_t i0 = traj.index_at(t_begin);
    std::size_t i1 = traj.index_at(t_end);
    if (traj.samples[i1].t > t_end && i1 > 0) --i1;
    if (i1 <= i0) throw InsufficientData("mean_phase_velocity: window holds fewer than two samples");

    const double net = traj.phase_change(i0, i1);
    const int dir = std::fabs(net) >= kTwoPi ? (net > 0.0 ? 1 : -1) : -1;

    // Crossings of the section u = u(t_begin) (mod 2 pi) in direction `dir`.
    bool have_first = false;
    double t_first = 0.0, level_first = 0.0, t_last = 0.0, level_last = 0.0;
    double g_prev = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        const double g_next = traj.phase_change(i0, i + 1);
        const double n_prev = std::floor(g_prev / kTwoPi), n_next = std::floor(g_next / kTwoPi);
        const bool crossed = dir < 0 ? n_next < n_prev : n_next > n_prev;
        if (crossed) {
            const auto& a = traj.samples[i];
            const auto& b = traj.samples[i + 1];
            const double dt = b.t - a.t;
            const double first_level = dir < 0 ? n_prev : n_prev + 1.0;
            const double last_level = dir < 0 ? n_next + 1.0 : n_next;
            for (double n = first_level;; n += (dir < 0 ? -1.0 : 1.0)) {
                const double level = n * kTwoPi;
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = hermite(g_prev, g_next, dt * a.v, dt * b.v, mid) - level;
                    if ((fm < 0.0) == (dir < 0))
                        hi = mid;
                    else
                        lo = mid;
                }
                const double tc = a.t + 0.5 * (lo + hi) * dt;
                if (!have_first) {
                    have_first = true;
                    t_first = tc;
                    level_first = level;
                }
                t_last = tc;
                level_last = level;
                if (n == last_level) break;
            }
        }
        g_prev = g_next;
    }
    if (have_first && t_last > t_first) return (level_last - level_first) / (t_last - t_first);
    return net / (traj.samples[i1].t - traj.samples[i0].t);
}

double characteristic_period(const PendulumParams& p) {
    double h = 0.5 * p.v0 * p.v0 + 1.0 - std::cos(p.u0);
    if (std::fabs(h - 2.0) < 1e-6) h = h < 2.0 ? 2.0 - 1e-6 : 2.0 + 1e-6;
    double period = 2.0 * pi;
    if (h > 0.0 && h < 2.0)
        period = oscillation_period(h);
    else if (h > 2.0)
        period = rotation_period(h);
    if (p.eps > 0.0) {
        const double s = p.eps * p.vr() + p.w;
        if (s > 1.0) period = std::max(period, 2.0 * pi * p.eps / std::sqrt((s - 1.0) * (s + 1.0)));
    }
    return period;
}

double average_pinion_velocity(const Trajectory& traj, double rack_velocity, double skipping_velocity,
                               double min_periods) {
    if (traj.samples.size() < 2) throw InsufficientData("average_pinion_velocity: empty trajectory");
    const double t0 = traj.samples.front().t, t1 = traj.samples.back().t;
    const double ta = t0 + kTransientFraction * (t1 - t0);
    const double needed = min_periods * characteristic_period(traj.params);
    if (t1 - ta < needed)
        throw InsufficientData("average_pinion_velocity: averaging window spans " + std::to_string(t1 - ta) +
                               " time units, need " + std::to_string(needed));
    return rack_velocity + skipping_velocity * mean_phase_velocity(traj, ta, t1);
}

RegimeReport detect_regime(const Trajectory& traj, double rack_velocity, double skipping_velocity) {
    if (traj.samples.size() < 4) throw InsufficientData("detect_regime: trajectory too short");
    const double t0 = traj.samples.front().t, t1 = traj.samples.back().t;
    const double ta = t0 + kTransientFraction * (t1 - t0);
    const double tm = 0.5 * (ta + t1);
    const std::size_t ia = traj.index_at(ta), im = traj.index_at(tm), ib = traj.samples.size() - 1;
    if (!(ia < im && im < ib)) throw InsufficientData("detect_regime: window too short");

    const WindowShape whole = shape(traj, ia, ib);
    const WindowShape first = shape(traj, ia, im);
    const WindowShape second = shape(traj, im, ib);
    const double vr = rack_velocity / skipping_velocity;

    RegimeReport r;
    if (bounded(whole)) {
        r.regime = Regime::LockedIn;
        r.vp = vr;
        r.diagnostics = "bounded phase, extent " + std::to_string(whole.extent) + ", residual <v> " +
                        std::to_string(mean_phase_velocity(traj, ta, t1));
        return r;
    }
    if (bounded(first) != bounded(second)) {
        r.regime = Regime::Separatrix;
        const double v1 = vr + mean_phase_velocity(traj, ta, tm);
        const double v2 = vr + mean_phase_velocity(traj, tm, t1);
        r.candidates = bounded(first) ? std::pair{v1, v2} : std::pair{v2, v1};
        r.vp = vr + mean_phase_velocity(traj, ta, t1);
        r.diagnostics = std::string("window mixes bounded and winding epochs (") +
                        (bounded(first) ? "bounded then winding" : "winding then bounded") + ")";
        return r;
    }
    r.vp = vr + mean_phase_velocity(traj, ta, t1);
    r.regime = skipping_label(r.vp);
    r.diagnostics = "net winding " + std::to_string(whole.net / kTwoPi) + " turns";
    return r;
}

MeasureOptions classification_options() {
    MeasureOptions o;
    o.periods = 30.0;
    o.min_duration = 150.0;
    o.max_doublings = 2;
    o.convergence = 1e-2;
    return o;
}

Measurement measure(const PendulumParams& params, const MeasureOptions& options) {
    const double window_fraction = 1.0 - kTransientFraction;
    double duration = std::max(options.min_duration, options.periods * characteristic_period(params) / window_fraction);
    if (params.eps > 0.0) duration = std::max(duration, 10.0 / params.eps / kTransientFraction);
    duration = std::min(duration, options.max_duration);

    IntegratorOptions io = options.integrator;
    const double speed = 1.0 + std::max(std::fabs(params.v0), std::fabs(params.vr()));
    io.output_interval = std::min(io.output_interval, 0.5 / speed);
    // Keep the sample count bounded on long, slow runs.
    io.output_interval = std::max(io.output_interval, duration / 4e5);
    if (io.method == Integrator::Rk4) io.output_interval = std::max(io.output_interval, io.rk4_step);

    Measurement m;
    Trajectory traj = integrate(params, duration, io);
    const double vr = params.vr();
    for (;;) {
        m.report = detect_regime(traj, vr, 1.0);
        const double t0 = traj.samples.front().t, t1 = traj.samples.back().t;
        const double ta = t0 + kTransientFraction * (t1 - t0);
        const double tm = 0.5 * (ta + t1);
        const double a1 = mean_phase_velocity(traj, ta, tm);
        const double a2 = mean_phase_velocity(traj, tm, t1);
        const bool converged =
            std::fabs(a1 - a2) <= options.convergence * std::max({1.0, std::fabs(a1), std::fabs(a2)});
        if ((m.report.regime != Regime::Separatrix && converged) || m.doublings >= options.max_doublings) break;
        extend(traj, traj.duration());
        ++m.doublings;
    }
    m.duration = traj.duration();
    m.stats = traj.stats;
    if (options.keep_trajectory) m.trajectory = std::move(traj);
    return m;
}

double find_boundary(double u0, double eps, double w, std::pair<double, double> bracket, double resolution,
                     const MeasureOptions& options) {
    auto [lo, hi] = bracket;
    if (!(lo >= 0.0 && hi > lo)) throw DomainError("find_boundary: bracket must satisfy 0 <= lo < hi");
    auto skips = [&](double vr) {
        return measure(PendulumParams::rest_start(u0, vr, eps, w), options).report.regime != Regime::LockedIn;
    };
    const bool lo_skips = skips(lo), hi_skips = skips(hi);
    if (lo_skips == hi_skips)
        throw BracketError("find_boundary: both bracket ends are " +
                           std::string(lo_skips ? "skipping" : "locked in"));
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (skips(mid) == hi_skips)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rackpinion
