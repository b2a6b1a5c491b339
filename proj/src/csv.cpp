#include "rackpinion/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <json.hpp>

namespace rackpinion {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_metadata(std::ostream& out, const Metadata& meta) {
    for (const auto& [k, v] : meta) out << "# " << k << ": " << v << '\n';
}

Metadata sweep_metadata(const SweepSpec& spec) {
    Metadata m;
    m.emplace_back("tool", std::string("rackpinion ") + kToolVersion);
    m.emplace_back("command", std::string(sweep_kind_name(spec.kind)));
    for (const auto& a : spec.axes)
        m.emplace_back("axis " + a.name,
                       format_number(a.min) + " .. " + format_number(a.max) + " (" + std::to_string(a.n) + " points)");
    for (const auto& [k, v] : spec.fixed) m.emplace_back("fixed " + k, format_number(v));
    m.emplace_back("integrator", spec.solver.integrator == Integrator::Rk45 ? "rk45" : "rk4");
    m.emplace_back("tol", format_number(spec.solver.tol));
    if (spec.solver.integrator == Integrator::Rk4) m.emplace_back("rk4_step", format_number(spec.solver.rk4_step));
    m.emplace_back("units", "u0 in rad; velocities in V_S; load in F");
    m.emplace_back("start", "pinion initially at rest (v0 = -V_R/V_S)");
    return m;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r, Metadata meta) {
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
        const auto& c = r.cells[i];
        if (c.failed) meta.emplace_back("failed cell " + std::to_string(i), c.reason);
        else if (!c.reason.empty()) meta.emplace_back("note cell " + std::to_string(i), c.reason);
    }
    for (const auto& n : r.notes) meta.emplace_back("note", n);
    if (r.stall_load) meta.emplace_back("stall_load_W_over_F", format_number(*r.stall_load));
    if (r.stall_load_theory) meta.emplace_back("stall_load_theory_W_over_F", format_number(*r.stall_load_theory));
    write_metadata(out, meta);

    auto regime = [](const Cell& c) { return c.failed ? std::string("failed") : std::string(regime_name(c.regime)); };
    switch (r.spec.kind) {
        case SweepKind::PhaseDiagram: {
            const bool u0_first = r.spec.axes[0].name == "u0";
            out << (u0_first ? "u0,V_R_over_V_S" : "V_R_over_V_S,u0") << ",regime,V_P_over_V_S,method\n";
            for (const auto& c : r.cells)
                out << format_number(c.coords[0]) << ',' << format_number(c.coords[1]) << ',' << regime(c) << ','
                    << format_number(c.vp) << ',' << method_name(c.method) << '\n';
            break;
        }
        case SweepKind::VpCurve:
            out << "V_R_over_V_S,V_P_over_V_S,regime,method\n";
            for (const auto& c : r.cells)
                out << format_number(c.coords[0]) << ',' << format_number(c.vp) << ',' << regime(c) << ','
                    << method_name(c.method) << '\n';
            break;
        case SweepKind::ForceVelocity:
            out << "W_over_F,V_P_over_V_S,stalled\n";
            for (const auto& c : r.cells) {
                const bool stalled = !c.failed && (c.regime == Regime::Stalled || c.vp <= 0.0);
                out << format_number(c.coords[0]) << ',' << format_number(c.vp) << ','
                    << (stalled ? "true" : "false") << '\n';
            }
            break;
    }
}

void write_boundary_csv(std::ostream& out, const SweepResult& r, Metadata meta) {
    meta.emplace_back("content", "skipping boundary polyline");
    write_metadata(out, meta);
    out << "u0,V_R_over_V_S,method\n";
    for (const auto& p : r.boundary)
        out << format_number(p.u0) << ',' << format_number(p.vr) << ',' << method_name(p.method) << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,u,v,u_wrapped\n";
    for (const auto& s : traj.samples)
        out << format_number(s.t) << ',' << format_number(s.u()) << ',' << format_number(s.v) << ','
            << format_number(s.u_wrapped) << '\n';
}

std::string trajectory_sidecar_json(const Trajectory& traj, const Metadata& extra) {
    nlohmann::ordered_json j;
    j["tool"] = std::string("rackpinion ") + kToolVersion;
    j["equation"] = "u' = v, v' = -sin u - eps (v + vr) - w";
    j["parameters"] = {{"u0", traj.params.u0},
                       {"v0", traj.params.v0},
                       {"eps", traj.params.eps},
                       {"w", traj.params.w},
                       {"vr", traj.params.vr()}};
    j["integrator"] = {{"method", traj.options.method == Integrator::Rk45 ? "rk45" : "rk4"},
                       {"tol", traj.options.tol},
                       {"output_interval", traj.options.output_interval},
                       {"rk4_step", traj.options.rk4_step}};
    j["statistics"] = {{"accepted_steps", traj.stats.accepted},
                       {"rejected_steps", traj.stats.rejected},
                       {"max_error_ratio", traj.stats.max_error},
                       {"samples", traj.samples.size()},
                       {"duration", traj.duration()}};
    for (const auto& [k, v] : extra) j["result"][k] = v;
    return j.dump(2);
}

void write_skip_velocity_csv(std::ostream& out, const std::vector<SkipVelocityPoint>& rows, Metadata meta) {
    write_metadata(out, meta);
    out << "H_m,V_S_m_per_s,omega_rad_per_s\n";
    for (const auto& p : rows)
        out << format_number(p.gap) << ',' << format_number(p.skipping_velocity) << ','
            << format_number(p.angular_velocity) << '\n';
}

}  // namespace rackpinion
