#pragma once
// Shared constants for the polynomial sine used by the pendulum kernels.
// Cody-Waite reduction by pi/4 with a three-part split of pi/4, then the
// minimax sine/cosine polynomials on [-pi/4, pi/4] (Cephes sin.c).

namespace rackpinion::kernels::detail {

inline constexpr double kFourOverPi = 1.27323954473516268615;
inline constexpr double kDp1 = 7.85398125648498535156e-1;
inline constexpr double kDp2 = 3.77489470793079817668e-8;
inline constexpr double kDp3 = 2.69515142907905952645e-15;

inline constexpr double kSinCoef[6] = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
    -1.98412698295895385996e-4, 8.33333333332211858878e-3,  -1.66666666666666307295e-1,
};
inline constexpr double kCosCof[6] = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
    2.48015872888517045348e-5,   -1.38888888888730564116e-3, 4.16666666666665929218e-2,
};

inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr double kInvTwoPi = 0.159154943091895335769;

/// AGM stops once a - b <= kAgmTol * a.
inline constexpr double kAgmTol = 4.440892098500626e-16;
inline constexpr int kAgmMaxIter = 64;
inline constexpr double kHalfPi = 1.57079632679489661923;

}  // namespace rackpinion::kernels::detail
