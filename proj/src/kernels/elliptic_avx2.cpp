#include <immintrin.h>

#include <limits>

#include "avx2_common.hpp"
#include "rackpinion/kernels/kernels.hpp"

namespace rackpinion::kernels::avx2 {

using namespace detail;

void elliptic_ke(std::span<const double> k, std::span<double> K, std::span<double> E) {
    const std::size_t n = k.size();
    const std::size_t blocks = n / 4 * 4;
    const __m256d one = set1(1.0);
    const __m256d inf = set1(std::numeric_limits<double>::infinity());
    const __m256d tol = set1(kAgmTol);

    for (std::size_t i = 0; i < blocks; i += 4) {
        const __m256d kv = _mm256_loadu_pd(k.data() + i);
        const __m256d at_one = _mm256_cmp_pd(kv, one, _CMP_GE_OQ);
        __m256d a = one;
        __m256d b = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_sub_pd(one, kv), _mm256_add_pd(one, kv)));
        __m256d sum = _mm256_mul_pd(set1(0.5), _mm256_mul_pd(kv, kv));
        __m256d weight = set1(0.5);
        __m256d active = _mm256_andnot_pd(at_one, _mm256_cmp_pd(_mm256_sub_pd(a, b), _mm256_mul_pd(tol, a), _CMP_GT_OQ));
        for (int it = 0; it < kAgmMaxIter && _mm256_movemask_pd(active) != 0; ++it) {
            const __m256d an = _mm256_mul_pd(set1(0.5), _mm256_add_pd(a, b));
            const __m256d bn = _mm256_sqrt_pd(_mm256_mul_pd(a, b));
            const __m256d c = _mm256_mul_pd(set1(0.5), _mm256_sub_pd(a, b));
            const __m256d wn = _mm256_mul_pd(weight, set1(2.0));
            const __m256d sn = _mm256_add_pd(sum, _mm256_mul_pd(wn, _mm256_mul_pd(c, c)));
            weight = _mm256_blendv_pd(weight, wn, active);
            sum = _mm256_blendv_pd(sum, sn, active);
            a = _mm256_blendv_pd(a, an, active);
            b = _mm256_blendv_pd(b, bn, active);
            active = _mm256_and_pd(active, _mm256_cmp_pd(_mm256_sub_pd(a, b), _mm256_mul_pd(tol, a), _CMP_GT_OQ));
        }
        __m256d kk = _mm256_div_pd(set1(kHalfPi), a);
        __m256d ee = _mm256_mul_pd(kk, _mm256_sub_pd(one, sum));
        kk = _mm256_blendv_pd(kk, inf, at_one);
        ee = _mm256_blendv_pd(ee, one, at_one);
        _mm256_storeu_pd(K.data() + i, kk);
        _mm256_storeu_pd(E.data() + i, ee);
    }
    if (blocks < n) scalar::elliptic_ke(k.subspan(blocks), K.subspan(blocks), E.subspan(blocks));
}

void sin(std::span<const double> x, std::span<double> out) {
    const std::size_t blocks = x.size() / 4 * 4;
    for (std::size_t i = 0; i < blocks; i += 4)
        _mm256_storeu_pd(out.data() + i, detail::sin(_mm256_loadu_pd(x.data() + i)));
    for (std::size_t i = blocks; i < x.size(); ++i) out[i] = scalar::sin(x[i]);
}

}  // namespace rackpinion::kernels::avx2
