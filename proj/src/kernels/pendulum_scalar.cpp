#include <cmath>

#include "rackpinion/kernels/kernels.hpp"
#include "sin_poly.hpp"

namespace rackpinion::kernels {

void PendulumBatch::resize(std::size_t lanes) {
    for (auto* vec : {&u, &v, &turns, &lo, &hi, &eps, &drive, &load}) vec->resize(lanes, 0.0);
}

double PendulumBatch::unwrapped(std::size_t lane) const noexcept {
    return u[lane] + detail::kTwoPi * turns[lane];
}

void PendulumBatch::reset_extent() noexcept {
    for (std::size_t i = 0; i < size(); ++i) lo[i] = hi[i] = unwrapped(i);
}

namespace scalar {

namespace {

inline double horner(const double (&c)[6], double x) {
    return ((((c[0] * x + c[1]) * x + c[2]) * x + c[3]) * x + c[4]) * x + c[5];
}

inline double accel(double u, double v, double eps, double drive, double load) {
    return ((-scalar::sin(u)) - eps * (v + drive)) - load;
}

}  // namespace

double sin(double x) noexcept {
    using namespace detail;
    const double ax = std::fabs(x);
    double y = std::floor(ax * kFourOverPi);
    const double half = std::floor(y * 0.5);
    if (y - 2.0 * half == 1.0) y = y + 1.0;
    double j = y - 8.0 * std::floor(y * 0.125);
    bool neg = x < 0.0;
    if (j > 3.0) {
        neg = !neg;
        j = j - 4.0;
    }
    const double z = ((ax - y * kDp1) - y * kDp2) - y * kDp3;
    const double zz = z * z;
    const double s = z + z * zz * horner(kSinCoef, zz);
    const double c = (1.0 - 0.5 * zz) + zz * zz * horner(kCosCof, zz);
    const double r = (j == 2.0) ? c : s;
    return neg ? -r : r;
}

void pendulum_rk4(PendulumBatch& b, double dt, std::size_t steps) {
    const double half_dt = 0.5 * dt;
    const double sixth_dt = dt / 6.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        double u = b.u[i], v = b.v[i], turns = b.turns[i], lo = b.lo[i], hi = b.hi[i];
        const double eps = b.eps[i], drive = b.drive[i], load = b.load[i];
        for (std::size_t s = 0; s < steps; ++s) {
            const double k1u = v;
            const double k1v = accel(u, v, eps, drive, load);
            const double k2u = v + half_dt * k1v;
            const double k2v = accel(u + half_dt * k1u, k2u, eps, drive, load);
            const double k3u = v + half_dt * k2v;
            const double k3v = accel(u + half_dt * k2u, k3u, eps, drive, load);
            const double k4u = v + dt * k3v;
            const double k4v = accel(u + dt * k3u, k4u, eps, drive, load);
            u = u + sixth_dt * (((k1u + 2.0 * k2u) + 2.0 * k3u) + k4u);
            v = v + sixth_dt * (((k1v + 2.0 * k2v) + 2.0 * k3v) + k4v);

            const double wraps = std::nearbyint(u * detail::kInvTwoPi);
            u = u - wraps * detail::kTwoPi;
            turns = turns + wraps;
            const double uw = u + detail::kTwoPi * turns;
            lo = uw < lo ? uw : lo;
            hi = uw > hi ? uw : hi;
        }
        b.u[i] = u;
        b.v[i] = v;
        b.turns[i] = turns;
        b.lo[i] = lo;
        b.hi[i] = hi;
    }
}

}  // namespace scalar
}  // namespace rackpinion::kernels
