#include <immintrin.h>

#include "avx2_common.hpp"
#include "rackpinion/kernels/kernels.hpp"

namespace rackpinion::kernels::avx2 {

using namespace detail;

namespace {

inline __m256d accel(__m256d u, __m256d v, __m256d eps, __m256d drive, __m256d load) {
    const __m256d minus_sin = _mm256_xor_pd(detail::sin(u), set1(-0.0));
    return _mm256_sub_pd(_mm256_sub_pd(minus_sin, _mm256_mul_pd(eps, _mm256_add_pd(v, drive))), load);
}

}  // namespace

void pendulum_rk4(PendulumBatch& b, double dt, std::size_t steps) {
    const std::size_t n = b.size();
    const std::size_t blocks = n / 4 * 4;
    const __m256d vdt = set1(dt);
    const __m256d half_dt = set1(0.5 * dt);
    const __m256d sixth_dt = set1(dt / 6.0);
    const __m256d two = set1(2.0);
    const __m256d two_pi = set1(kTwoPi);
    const __m256d inv_two_pi = set1(kInvTwoPi);

    for (std::size_t i = 0; i < blocks; i += 4) {
        __m256d u = _mm256_loadu_pd(b.u.data() + i);
        __m256d v = _mm256_loadu_pd(b.v.data() + i);
        __m256d turns = _mm256_loadu_pd(b.turns.data() + i);
        __m256d lo = _mm256_loadu_pd(b.lo.data() + i);
        __m256d hi = _mm256_loadu_pd(b.hi.data() + i);
        const __m256d eps = _mm256_loadu_pd(b.eps.data() + i);
        const __m256d drive = _mm256_loadu_pd(b.drive.data() + i);
        const __m256d load = _mm256_loadu_pd(b.load.data() + i);

        for (std::size_t s = 0; s < steps; ++s) {
            const __m256d k1u = v;
            const __m256d k1v = accel(u, v, eps, drive, load);
            const __m256d k2u = _mm256_add_pd(v, _mm256_mul_pd(half_dt, k1v));
            const __m256d k2v = accel(_mm256_add_pd(u, _mm256_mul_pd(half_dt, k1u)), k2u, eps, drive, load);
            const __m256d k3u = _mm256_add_pd(v, _mm256_mul_pd(half_dt, k2v));
            const __m256d k3v = accel(_mm256_add_pd(u, _mm256_mul_pd(half_dt, k2u)), k3u, eps, drive, load);
            const __m256d k4u = _mm256_add_pd(v, _mm256_mul_pd(vdt, k3v));
            const __m256d k4v = accel(_mm256_add_pd(u, _mm256_mul_pd(vdt, k3u)), k4u, eps, drive, load);

            const __m256d su = _mm256_add_pd(
                _mm256_add_pd(_mm256_add_pd(k1u, _mm256_mul_pd(two, k2u)), _mm256_mul_pd(two, k3u)), k4u);
            const __m256d sv = _mm256_add_pd(
                _mm256_add_pd(_mm256_add_pd(k1v, _mm256_mul_pd(two, k2v)), _mm256_mul_pd(two, k3v)), k4v);
            u = _mm256_add_pd(u, _mm256_mul_pd(sixth_dt, su));
            v = _mm256_add_pd(v, _mm256_mul_pd(sixth_dt, sv));

            const __m256d wraps =
                _mm256_round_pd(_mm256_mul_pd(u, inv_two_pi), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
            u = _mm256_sub_pd(u, _mm256_mul_pd(wraps, two_pi));
            turns = _mm256_add_pd(turns, wraps);
            const __m256d uw = _mm256_add_pd(u, _mm256_mul_pd(two_pi, turns));
            lo = _mm256_min_pd(uw, lo);
            hi = _mm256_max_pd(uw, hi);
        }
        _mm256_storeu_pd(b.u.data() + i, u);
        _mm256_storeu_pd(b.v.data() + i, v);
        _mm256_storeu_pd(b.turns.data() + i, turns);
        _mm256_storeu_pd(b.lo.data() + i, lo);
        _mm256_storeu_pd(b.hi.data() + i, hi);
    }

    if (blocks < n) {
        // Tail lanes go through the scalar reference on a compact copy.
        PendulumBatch tail(n - blocks);
        for (std::size_t i = blocks; i < n; ++i) {
            const std::size_t t = i - blocks;
            tail.u[t] = b.u[i];
            tail.v[t] = b.v[i];
            tail.turns[t] = b.turns[i];
            tail.lo[t] = b.lo[i];
            tail.hi[t] = b.hi[i];
            tail.eps[t] = b.eps[i];
            tail.drive[t] = b.drive[i];
            tail.load[t] = b.load[i];
        }
        scalar::pendulum_rk4(tail, dt, steps);
        for (std::size_t i = blocks; i < n; ++i) {
            const std::size_t t = i - blocks;
            b.u[i] = tail.u[t];
            b.v[i] = tail.v[t];
            b.turns[i] = tail.turns[t];
            b.lo[i] = tail.lo[t];
            b.hi[i] = tail.hi[t];
        }
    }
}

}  // namespace rackpinion::kernels::avx2
