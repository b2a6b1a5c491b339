#pragma once
// Complete elliptic integrals in the modulus convention:
//   K(m) = int_0^{pi/2} (1 - m^2 sin^2 t)^{-1/2} dt
//   E(m) = int_0^{pi/2} (1 - m^2 sin^2 t)^{1/2} dt
// computed by the arithmetic-geometric mean.

#include <span>

namespace rackpinion {

/// 0 <= m < 1. Throws DivergenceError for m >= 1, DomainError for m < 0 or NaN.
double ellip_K(double m);

/// 0 <= m <= 1. Throws DomainError outside.
double ellip_E(double m);

/// Batched K and E through the SIMD kernels. Every modulus must lie in
/// [0, 1]; K is +inf where m == 1.
void ellip_KE(std::span<const double> m, std::span<double> K, std::span<double> E);

}  // namespace rackpinion
