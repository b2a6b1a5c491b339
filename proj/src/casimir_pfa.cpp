#include "rackpinion/casimir_pfa.hpp"

#include <cmath>
#include <numbers>

#include "rackpinion/errors.hpp"

namespace rackpinion {

namespace {

using std::numbers::pi;

const double kAlphaRate = 12.0 * pi / std::sqrt(35.0);
const double kForcePrefactor = 7.0 * pi * pi * pi * pi * std::numbers::sqrt2 / 3072.0;
const double kVelocityPrefactor = std::sqrt(7.0 * pi * pi * std::numbers::sqrt2 / 3072.0);

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string("casimir_pfa: ") + name + " must be positive and finite");
}

void check(const PfaInputs& inp, bool need_length) {
    require_positive(inp.gap, "gap H");
    require_positive(inp.wavelength, "wavelength lambda");
    require_positive(inp.amp_pinion, "corrugation amplitude a1");
    require_positive(inp.amp_rack, "corrugation amplitude a2");
    require_positive(inp.radius, "radius R");
    if (need_length) require_positive(inp.length, "length L");
}

}  // namespace

double alpha_empirical(double x) {
    if (!(x >= 0.0)) throw DomainError("alpha_empirical: H/lambda must be non-negative");
    // cosh overflows near x ~ 110; the log form keeps the exponential tail finite.
    const double arg = kAlphaRate * x;
    if (arg < 20.0) return std::pow(std::cosh(arg), -4.0 / 9.0);
    return std::exp(-4.0 / 9.0 * (arg - std::log(2.0) + std::log1p(std::exp(-2.0 * arg))));
}

double alpha_factor(const PfaInputs& inp) {
    const double x = inp.gap / inp.wavelength;
    if (inp.alpha_override) {
        const double a = inp.alpha_override(x);
        if (!(a > 0.0)) throw DomainError("casimir_pfa: alpha override must return a positive value");
        return a;
    }
    return alpha_empirical(x);
}

double lateral_force_amplitude(const PfaInputs& inp) {
    check(inp, true);
    const double H = inp.gap;
    return kForcePrefactor * kHbarC * inp.amp_pinion * inp.amp_rack * inp.length * std::sqrt(inp.radius) /
           (inp.wavelength * std::pow(H, 4.5)) * alpha_factor(inp);
}

double skipping_velocity_physical(const PfaInputs& inp) {
    check(inp, false);
    require_positive(inp.density, "density rho");
    const double H = inp.gap;
    return kVelocityPrefactor * std::sqrt(kHbarC / (inp.density * H * H * H * H)) *
           std::sqrt(inp.amp_pinion * inp.amp_rack / (H * H)) * std::pow(H / inp.radius, 0.75) *
           std::sqrt(alpha_factor(inp));
}

std::vector<std::string> pfa_advisories(const PfaInputs& inp) {
    std::vector<std::string> out;
    if (inp.amp_pinion > inp.gap / 5.0 || inp.amp_rack > inp.gap / 5.0)
        out.emplace_back("corrugation amplitude exceeds H/5; the leading-order PFA force assumes a1, a2 << H");
    if (inp.gap > inp.radius)
        out.emplace_back("gap H exceeds pinion radius R; PFA is only trusted for H <~ R");
    if (inp.gap < kPlasmaAdvisoryGap)
        out.emplace_back("perfect-metal boundaries assumed; expect finite-conductivity corrections for gaps below the plasma wavelength");
    return out;
}

std::vector<SkipVelocityPoint> skip_velocity_scan(const PfaInputs& base, double h_min, double h_max,
                                                  std::size_t n_points) {
    require_positive(h_min, "scan h_min");
    if (!(h_max > h_min)) throw DomainError("skip_velocity_scan: gap range must be increasing");
    if (n_points < 2) throw DomainError("skip_velocity_scan: need at least two points");
    std::vector<SkipVelocityPoint> out;
    out.reserve(n_points);
    const double log_lo = std::log(h_min), log_hi = std::log(h_max);
    PfaInputs inp = base;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
        inp.gap = i + 1 == n_points ? h_max : std::exp(log_lo + t * (log_hi - log_lo));
        if (i == 0) inp.gap = h_min;
        const double vs = skipping_velocity_physical(inp);
        out.push_back({inp.gap, vs, vs / inp.radius});
    }
    return out;
}

}  // namespace rackpinion
