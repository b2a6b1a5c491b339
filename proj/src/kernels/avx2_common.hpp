#pragma once
// AVX2 helpers mirroring the scalar reference operation-for-operation.

#include <immintrin.h>

#include "sin_poly.hpp"

namespace rackpinion::kernels::avx2::detail {

using namespace rackpinion::kernels::detail;

inline __m256d set1(double x) { return _mm256_set1_pd(x); }

inline __m256d horner(const double (&c)[6], __m256d x) {
    __m256d r = _mm256_add_pd(_mm256_mul_pd(set1(c[0]), x), set1(c[1]));
    r = _mm256_add_pd(_mm256_mul_pd(r, x), set1(c[2]));
    r = _mm256_add_pd(_mm256_mul_pd(r, x), set1(c[3]));
    r = _mm256_add_pd(_mm256_mul_pd(r, x), set1(c[4]));
    return _mm256_add_pd(_mm256_mul_pd(r, x), set1(c[5]));
}

inline __m256d sin(__m256d x) {
    const __m256d sign_bit = set1(-0.0);
    const __m256d ax = _mm256_andnot_pd(sign_bit, x);
    __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, set1(kFourOverPi)));
    const __m256d half = _mm256_floor_pd(_mm256_mul_pd(y, set1(0.5)));
    const __m256d odd =
        _mm256_cmp_pd(_mm256_sub_pd(y, _mm256_mul_pd(set1(2.0), half)), set1(1.0), _CMP_EQ_OQ);
    y = _mm256_blendv_pd(y, _mm256_add_pd(y, set1(1.0)), odd);
    __m256d j = _mm256_sub_pd(y, _mm256_mul_pd(set1(8.0), _mm256_floor_pd(_mm256_mul_pd(y, set1(0.125)))));
    const __m256d neg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
    const __m256d upper = _mm256_cmp_pd(j, set1(3.0), _CMP_GT_OQ);
    const __m256d flip = _mm256_xor_pd(neg, upper);
    j = _mm256_blendv_pd(j, _mm256_sub_pd(j, set1(4.0)), upper);

    __m256d z = _mm256_sub_pd(ax, _mm256_mul_pd(y, set1(kDp1)));
    z = _mm256_sub_pd(z, _mm256_mul_pd(y, set1(kDp2)));
    z = _mm256_sub_pd(z, _mm256_mul_pd(y, set1(kDp3)));
    const __m256d zz = _mm256_mul_pd(z, z);
    const __m256d s = _mm256_add_pd(z, _mm256_mul_pd(_mm256_mul_pd(z, zz), horner(kSinCoef, zz)));
    const __m256d c = _mm256_add_pd(_mm256_sub_pd(set1(1.0), _mm256_mul_pd(set1(0.5), zz)),
                                    _mm256_mul_pd(_mm256_mul_pd(zz, zz), horner(kCosCof, zz)));
    const __m256d use_cos = _mm256_cmp_pd(j, set1(2.0), _CMP_EQ_OQ);
    const __m256d r = _mm256_blendv_pd(s, c, use_cos);
    return _mm256_xor_pd(r, _mm256_and_pd(flip, sign_bit));
}

}  // namespace rackpinion::kernels::avx2::detail
