// rackpinion: command-line front end.
//
//   rackpinion simulate       integrate one trajectory, print regime and V_P
//   rackpinion phase-diagram  regime grid over (u0, V_R/V_S)
//   rackpinion vp-curve       V_P/V_S versus V_R/V_S
//   rackpinion force-velocity V_P/V_S versus W/F
//   rackpinion skip-velocity  V_S and V_S/R versus the gap H
//   rackpinion query          single-point report for a physical device
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "rackpinion/config.hpp"
#include "rackpinion/conservative.hpp"
#include "rackpinion/csv.hpp"
#include "rackpinion/dissipative.hpp"
#include "rackpinion/errors.hpp"
#include "rackpinion/simulator.hpp"
#include "rackpinion/sweep.hpp"
#include "rackpinion/units.hpp"

using namespace rackpinion;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config;
    std::string out;
    bool json = false;
    double tol = 1e-10;
    std::string grid;
    std::size_t workers = 0;
    std::string integrator = "rk45";
    double rk4_step = 0.01;
};

struct Reduced {
    std::optional<double> u0, vr, eps, w, v0;
};

std::pair<double, double> parse_range(const std::string& text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError(std::string(what) + ": expected min,max");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": cannot parse '" + text + "'");
    }
}

std::vector<std::size_t> parse_grid(const std::string& text, std::size_t dims) {
    std::vector<std::size_t> n;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        try {
            std::size_t used = 0;
            const long v = std::stol(part, &used);
            if (used != part.size() || v < 2) throw std::invalid_argument("");
            n.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw UsageError("--grid: '" + text + "' is not of the form <n1>x<n2> with n >= 2");
        }
    }
    if (n.size() == 1 && dims == 2) n.push_back(n[0]);
    if (n.size() != dims) throw UsageError("--grid: expected " + std::to_string(dims) + " dimension(s)");
    return n;
}

SolverSettings solver_settings(const Common& c) {
    SolverSettings s;
    if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
    s.tol = c.tol;
    s.workers = c.workers;
    s.rk4_step = c.rk4_step;
    if (c.integrator == "rk45") s.integrator = Integrator::Rk45;
    else if (c.integrator == "rk4") s.integrator = Integrator::Rk4;
    else throw UsageError("--integrator must be rk45 or rk4");
    return s;
}

// Physical device from --config, nondimensionalized up front.
struct DeviceContext {
    DeviceConfig cfg;
    DimensionlessParams dp;
    std::vector<std::string> advisories;
};

std::optional<DeviceContext> load_device(const std::string& path, bool require_full) {
    if (path.empty()) return std::nullopt;
    DeviceContext ctx;
    ctx.cfg = load_config(path);
    if (require_full) require_complete(ctx.cfg);
    try {
        ctx.advisories = ctx.cfg.device.validate();
        ctx.dp = nondimensionalize(ctx.cfg.device, ctx.cfg.x0_dot);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid device: ") + e.what());
    }
    return ctx;
}

/// Reduced parameters: explicit flags win over values derived from the config.
double pick(const std::optional<double>& flag, const std::optional<DeviceContext>& dev,
            double DimensionlessParams::*field, double fallback) {
    if (flag) return *flag;
    if (dev) return dev->dp.*field;
    return fallback;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file '" + path + "'");
    write(f);
}

std::string sibling(const std::string& path, const std::string& suffix) {
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
    return path.substr(0, dot) + suffix;
}

Metadata device_metadata(const std::optional<DeviceContext>& dev) {
    Metadata m;
    if (!dev) return m;
    m.emplace_back("device T_s", format_number(dev->dp.time_scale));
    m.emplace_back("device V_S_m_per_s", format_number(dev->dp.skipping_velocity));
    m.emplace_back("device F_N", format_number(dev->dp.force_amplitude));
    m.emplace_back("device F_D_N", format_number(dev->dp.dissipation_force));
    m.emplace_back("model", "perfect-metal lateral Casimir force, proximity force approximation");
    for (const auto& a : dev->advisories) m.emplace_back("advisory", a);
    return m;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Common& c, const Reduced& r, std::optional<double> duration) {
    const auto dev = load_device(c.config, false);
    const double vr = pick(r.vr, dev, &DimensionlessParams::rack_ratio, 0.0);
    const double eps = pick(r.eps, dev, &DimensionlessParams::epsilon, 0.0);
    const double w = pick(r.w, dev, &DimensionlessParams::load_ratio, 0.0);
    const double v0 = r.v0 ? *r.v0 : (dev && !r.vr ? dev->dp.v0 : -vr);
    if (vr < 0.0) throw UsageError("V_R/V_S must be non-negative (use u0 -> -u0 symmetry)");
    if (eps < 0.0 || w < 0.0) throw UsageError("eps and w must be non-negative");
    const SolverSettings s = solver_settings(c);

    PendulumParams p{r.u0.value_or(0.0), v0, eps, w, vr};
    Trajectory traj;
    RegimeReport report;
    try {
        if (duration) {
            if (!(*duration > 0.0)) throw UsageError("--duration must be positive");
            IntegratorOptions io;
            io.method = s.integrator;
            io.tol = s.tol;
            io.rk4_step = s.rk4_step;
            io.output_interval = std::min(io.output_interval, 0.5 / (1.0 + std::max(std::fabs(vr), std::fabs(v0))));
            io.output_interval = std::max(io.output_interval, *duration / 4e5);
            traj = integrate(p, *duration, io);
            report = detect_regime(traj, vr, 1.0);
        } else {
            MeasureOptions mo;
            mo.integrator.method = s.integrator;
            mo.integrator.tol = s.tol;
            mo.integrator.rk4_step = s.rk4_step;
            mo.keep_trajectory = true;
            Measurement m = measure(p, mo);
            traj = std::move(*m.trajectory);
            report = m.report;
        }
    } catch (const IntegrationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }

    Metadata extra{{"regime", std::string(regime_name(report.regime))},
                   {"V_P_over_V_S", format_number(report.vp)},
                   {"diagnostics", report.diagnostics}};
    if (report.candidates) {
        extra.emplace_back("V_P_over_V_S_bounded", format_number(report.candidates->first));
        extra.emplace_back("V_P_over_V_S_winding", format_number(report.candidates->second));
    }
    if (dev) extra.emplace_back("V_P_m_per_s", format_number(report.vp * dev->dp.skipping_velocity));
    if (!c.out.empty()) {
        emit(c.out, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
        emit(sibling(c.out, ".json"), [&](std::ostream& o) { o << trajectory_sidecar_json(traj, extra) << '\n'; });
    }

    if (c.json) {
        json j;
        for (const auto& [k, v] : extra) j[k] = v;
        j["V_P_over_V_S"] = report.vp;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "regime=" << regime_name(report.regime) << " V_P/V_S=" << format_number(report.vp) << '\n';
        if (report.candidates)
            std::cout << "candidates bounded=" << format_number(report.candidates->first)
                      << " winding=" << format_number(report.candidates->second) << '\n';
    }
    return 0;
}

int run_and_write(const SweepSpec& spec, const Common& c, const std::optional<DeviceContext>& dev) {
    const SweepResult result = run_sweep(spec);
    Metadata meta = sweep_metadata(spec);
    for (auto& kv : device_metadata(dev)) meta.push_back(std::move(kv));
    emit(c.out, [&](std::ostream& o) { write_sweep_csv(o, result, meta); });
    if (spec.boundary) {
        if (c.out.empty() || c.out == "-") {
            std::cout << '\n';
            write_boundary_csv(std::cout, result, meta);
        } else {
            emit(sibling(c.out, ".boundary.csv"), [&](std::ostream& o) { write_boundary_csv(o, result, meta); });
        }
    }
    if (spec.kind == SweepKind::ForceVelocity && (c.json || !c.out.empty())) {
        json j;
        j["stall_load_W_over_F"] = result.stall_load ? json(*result.stall_load) : json(nullptr);
        j["stall_load_theory_W_over_F"] =
            result.stall_load_theory ? json(*result.stall_load_theory) : json(nullptr);
        std::cerr << j.dump() << '\n';
    }
    return 0;
}

SweepSpec base_spec(SweepKind kind, const Common& c) {
    SweepSpec s;
    s.kind = kind;
    s.solver = solver_settings(c);
    return s;
}

int cmd_phase_diagram(const Common& c, const Reduced& r, const std::string& u0_range, const std::string& vr_range,
                      bool boundary) {
    const auto dev = load_device(c.config, false);
    SweepSpec spec = base_spec(SweepKind::PhaseDiagram, c);
    const auto n = parse_grid(c.grid.empty() ? "101x101" : c.grid, 2);
    const auto [u_lo, u_hi] = parse_range(u0_range, "--u0-range");
    const auto [v_lo, v_hi] = parse_range(vr_range, "--vr-range");
    spec.axes = {{"u0", u_lo, u_hi, n[0]}, {"vr", v_lo, v_hi, n[1]}};
    spec.fixed["eps"] = pick(r.eps, dev, &DimensionlessParams::epsilon, 0.0);
    spec.fixed["w"] = pick(r.w, dev, &DimensionlessParams::load_ratio, 0.0);
    spec.boundary = boundary;
    return run_and_write(spec, c, dev);
}

int cmd_vp_curve(const Common& c, const Reduced& r, const std::string& vr_range) {
    const auto dev = load_device(c.config, false);
    SweepSpec spec = base_spec(SweepKind::VpCurve, c);
    const auto n = parse_grid(c.grid.empty() ? "121" : c.grid, 1);
    const auto [lo, hi] = parse_range(vr_range, "--vr-range");
    spec.axes = {{"vr", lo, hi, n[0]}};
    spec.fixed["u0"] = r.u0.value_or(kPi / 4.0);
    spec.fixed["eps"] = pick(r.eps, dev, &DimensionlessParams::epsilon, 0.0);
    spec.fixed["w"] = pick(r.w, dev, &DimensionlessParams::load_ratio, 0.0);
    return run_and_write(spec, c, dev);
}

int cmd_force_velocity(const Common& c, const Reduced& r, const std::string& w_range) {
    const auto dev = load_device(c.config, false);
    SweepSpec spec = base_spec(SweepKind::ForceVelocity, c);
    const auto n = parse_grid(c.grid.empty() ? "81" : c.grid, 1);
    const auto [lo, hi] = parse_range(w_range, "--w-range");
    spec.axes = {{"w", lo, hi, n[0]}};
    spec.fixed["u0"] = r.u0.value_or(0.9 * kPi);
    spec.fixed["eps"] = pick(r.eps, dev, &DimensionlessParams::epsilon, 0.05);
    if (!r.vr && !dev) throw UsageError("force-velocity needs --vr or --config");
    spec.fixed["vr"] = pick(r.vr, dev, &DimensionlessParams::rack_ratio, 0.0);
    return run_and_write(spec, c, dev);
}

int cmd_skip_velocity(const Common& c, const std::string& h_range) {
    PfaInputs base;
    base.radius = 1e-6;
    base.length = 10e-6;
    base.wavelength = 1e-6;
    base.amp_pinion = 10e-9;
    base.amp_rack = 10e-9;
    base.density = 19300.0;
    Metadata meta;
    meta.emplace_back("tool", std::string("rackpinion ") + kToolVersion);
    meta.emplace_back("command", "skip-velocity");
    if (!c.config.empty()) {
        const DeviceConfig cfg = load_config(c.config);
        std::string missing;
        for (const char* k : {"R", "L", "lambda", "a1", "a2", "rho"})
            if (!cfg.present.count(k)) missing += std::string(" ") + k;
        if (!missing.empty()) throw ConfigError("missing required keys:" + missing);
        base = cfg.device.pfa_inputs();
        meta.emplace_back("geometry", "from " + c.config);
    } else {
        meta.emplace_back("geometry", "illustrative gold pinion defaults");
    }
    const auto n = parse_grid(c.grid.empty() ? "200" : c.grid, 1);
    const auto [lo, hi] = parse_range(h_range, "--h-range");
    for (const auto& [k, v] :
         Metadata{{"R_m", format_number(base.radius)},       {"L_m", format_number(base.length)},
                  {"lambda_m", format_number(base.wavelength)}, {"a1_m", format_number(base.amp_pinion)},
                  {"a2_m", format_number(base.amp_rack)},     {"rho_kg_per_m3", format_number(base.density)},
                  {"hbar_c_J_m", format_number(kHbarC)},
                  {"model", "perfect metals, PFA, empirical alpha(H/lambda)"}})
        meta.emplace_back(k, v);
    std::vector<SkipVelocityPoint> rows;
    try {
        rows = skip_velocity_scan(base, lo, hi, n[0]);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (lo < kPlasmaAdvisoryGap)
        meta.emplace_back("advisory", "gaps below ~1 um are subject to finite-conductivity (plasma wavelength) corrections");
    emit(c.out, [&](std::ostream& o) { write_skip_velocity_csv(o, rows, meta); });
    return 0;
}

int cmd_query(const Common& c, const Reduced& r) {
    if (c.config.empty()) throw UsageError("query needs --config");
    const auto dev = load_device(c.config, true);
    const auto& dp = dev->dp;
    const auto& d = dev->cfg.device;
    const double vr = dp.rack_ratio, eps = dp.epsilon, w = dp.load_ratio;
    const double u0 = r.u0.value_or(0.0);
    const SolverSettings s = solver_settings(c);

    json j;
    j["T_s"] = dp.time_scale;
    j["V_S_m_per_s"] = dp.skipping_velocity;
    j["omega_S_rad_per_s"] = dp.skipping_velocity / d.pinion_radius;
    j["epsilon"] = eps;
    j["w"] = w;
    j["F_N"] = dp.force_amplitude;
    j["F_D_N"] = dp.dissipation_force;
    j["I_kg_m2"] = dp.moment_of_inertia;
    j["V_R_over_V_S"] = vr;
    j["u0"] = u0;

    std::string regime, method, note;
    double vp = std::nan("");
    if (w >= 1.0) note = "NoLockedRegime: W >= F, the stable and saddle fixed points have merged";
    if (eps == 0.0) {
        method = "analytic";
        if (w >= 1.0) {
            regime = "NoLockedRegime";
        } else {
            const Cell cell = evaluate_point(u0, vr, 0.0, w, s);
            regime = std::string(regime_name(cell.regime));
            vp = cell.vp;
            if (!cell.reason.empty()) note = cell.reason;
        }
    } else if (eps >= kOverdampedEps) {
        method = "analytic";
        vp = overdamped_velocity_ratio(vr, w, eps);
        regime = std::string(eps * vr + w > 1.0 ? regime_name(skipping_label(vp)) : regime_name(Regime::LockedIn));
    } else {
        method = "simulated";
        const Cell cell = evaluate_point(u0, vr, eps, w, s);
        if (cell.failed) {
            std::cerr << "error: " << cell.reason << '\n';
            return kExitNumerical;
        }
        regime = std::string(regime_name(cell.regime));
        vp = cell.vp;
        // Both closed-form estimates alongside the simulation.
        try {
            const WeakResponse weak = weak_response(vr, w, eps);
            j["V_P_over_V_S_weak_theory"] = weak.vp;
            j["weak_theory_locked"] = weak.locked;
        } catch (const std::exception&) {
            j["V_P_over_V_S_weak_theory"] = nullptr;
        }
        j["V_P_over_V_S_overdamped_theory"] = overdamped_velocity_ratio(vr, w, eps);
    }
    j["regime"] = regime;
    j["V_P_over_V_S"] = std::isfinite(vp) ? json(vp) : json(nullptr);
    j["V_P_m_per_s"] = std::isfinite(vp) ? json(vp * dp.skipping_velocity) : json(nullptr);
    j["method"] = method;

    std::optional<double> stall;
    std::string stall_note;
    if (eps >= kOverdampedEps) {
        stall = stall_force_strong_ratio(vr, eps);
    } else if (eps > 0.0 && eps < 0.3) {
        const StallResult sr = stall_force_weak_ratio(vr, eps);
        stall = sr.load;
        if (!sr.load) stall_note = "V_P stays positive up to the weak-dissipation validity bound";
    } else if (eps == 0.0) {
        stall_note = "no steady state under load without dissipation";
    } else {
        stall_note = "crossover between weak and strong dissipation: both estimates reported";
    }
    if (eps >= 0.3 && eps < kOverdampedEps) {
        try {
            const StallResult sr = stall_force_weak_ratio(vr, eps);
            j["stall_load_weak_theory"] = sr.load ? json(*sr.load) : json(nullptr);
        } catch (const std::exception&) {
            j["stall_load_weak_theory"] = nullptr;
        }
        j["stall_load_strong_theory"] = stall_force_strong_ratio(vr, eps);
    }
    j["stall_load_W_over_F"] = stall ? json(*stall) : json(nullptr);
    j["stall_force_N"] = stall ? json(*stall * dp.force_amplitude) : json(nullptr);
    if (!stall_note.empty()) j["stall_note"] = stall_note;
    if (!note.empty()) j["note"] = note;
    j["advisories"] = dev->advisories;

    if (c.json) {
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    for (const auto& [k, v] : j.items()) {
        if (v.is_array()) {
            for (const auto& a : v) std::cout << "advisory=" << a.get<std::string>() << '\n';
        } else if (v.is_string()) {
            std::cout << k << '=' << v.get<std::string>() << '\n';
        } else if (v.is_null()) {
            std::cout << k << "=n/a\n";
        } else if (v.is_boolean()) {
            std::cout << k << '=' << (v.get<bool>() ? "true" : "false") << '\n';
        } else {
            std::cout << k << '=' << format_number(v.get<double>()) << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir rack-and-pinion simulation and analysis toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Common common;
    Reduced red;
    std::optional<double> duration;
    std::string u0_range = "-3.141592653589793,3.141592653589793", vr_range = "0,4", vr_curve = "0,6",
                w_range = "0,0.1", h_range = "1e-8,1e-6";
    bool boundary = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "Device config file (key = value)");
        sub->add_option("--out", common.out, "Output path (default stdout)");
        sub->add_flag("--json", common.json, "Machine-readable JSON report");
        sub->add_option("--tol", common.tol, "Integrator tolerance")->capture_default_str();
        sub->add_option("--grid", common.grid, "Grid size <n1>x<n2> (or <n> for curves)");
        sub->add_option("--workers", common.workers, "Worker threads (0 = all cores)");
        sub->add_option("--integrator", common.integrator, "rk45 (default) or rk4")->capture_default_str();
        sub->add_option("--rk4-step", common.rk4_step, "Step for --integrator rk4")->capture_default_str();
    };
    auto add_reduced = [&](CLI::App* sub, bool u0, bool vr, bool eps, bool w) {
        if (u0) sub->add_option("--u0", red.u0, "Initial phase mismatch u0 [rad]");
        if (vr) sub->add_option("--vr", red.vr, "Rack velocity V_R/V_S");
        if (eps) sub->add_option("--eps", red.eps, "Friction eps = sqrt(F_D/F)");
        if (w) sub->add_option("--w", red.w, "Load W/F");
    };

    auto* sim = app.add_subcommand("simulate", "Integrate one trajectory");
    add_common(sim);
    add_reduced(sim, true, true, true, true);
    sim->add_option("--v0", red.v0, "Initial du/dt (default: pinion at rest, -V_R/V_S)");
    sim->add_option("--duration", duration, "Duration in units of T (default: automatic)");

    auto* pd = app.add_subcommand("phase-diagram", "Regime grid over (u0, V_R/V_S)");
    add_common(pd);
    add_reduced(pd, false, false, true, true);
    pd->add_option("--u0-range", u0_range, "u0 axis min,max")->capture_default_str();
    pd->add_option("--vr-range", vr_range, "V_R/V_S axis min,max")->capture_default_str();
    pd->add_flag("--boundary", boundary, "Also write the skipping boundary polyline");

    auto* vp = app.add_subcommand("vp-curve", "V_P versus V_R");
    add_common(vp);
    add_reduced(vp, true, false, true, true);
    vp->add_option("--vr-range", vr_curve, "V_R/V_S axis min,max")->capture_default_str();

    auto* fv = app.add_subcommand("force-velocity", "V_P versus load");
    add_common(fv);
    add_reduced(fv, true, true, true, false);
    fv->add_option("--w-range", w_range, "W/F axis min,max")->capture_default_str();

    auto* sv = app.add_subcommand("skip-velocity", "Skipping velocity versus gap");
    add_common(sv);
    sv->add_option("--h-range", h_range, "Gap range min,max [m]")->capture_default_str();

    auto* q = app.add_subcommand("query", "Single-point report for a device config");
    add_common(q);
    add_reduced(q, true, false, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(common, red, duration);
        if (*pd) return cmd_phase_diagram(common, red, u0_range, vr_range, boundary);
        if (*vp) return cmd_vp_curve(common, red, vr_curve);
        if (*fv) return cmd_force_velocity(common, red, w_range);
        if (*sv) return cmd_skip_velocity(common, h_range);
        if (*q) return cmd_query(common, red);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NoLockedRegime& e) {
        std::cerr << "NoLockedRegime: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        // Parameter validation happens before any integration starts.
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
