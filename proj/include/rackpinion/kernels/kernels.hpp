#pragma once
// Data-parallel inner loops with a scalar reference and an AVX2 variant.
//
// The scalar functions are the reference. The AVX2 functions process four
// lanes per instruction and must produce bit-identical results (the project
// is compiled with -ffp-contract=off and the vector code mirrors the scalar
// operation order). The top-level functions dispatch at runtime.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rackpinion::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Variant used by the dispatching entry points. Defaults to the widest
/// available; the environment variable RACKPINION_ISA=scalar forces scalar.
Isa active_isa() noexcept;

/// Test hook: pin the dispatch target (std::nullopt restores auto-detection).
/// Requesting an unavailable variant falls back to scalar.
void override_isa(std::optional<Isa> isa) noexcept;

// ---------------------------------------------------------------------------
// Complete elliptic integrals K(k), E(k) in the modulus convention
// (k^2 appears under the root). Precondition 0 <= k <= 1; k == 1 yields
// K = +inf and E = 1.
// ---------------------------------------------------------------------------

void elliptic_ke(std::span<const double> k, std::span<double> K, std::span<double> E);

namespace scalar {
void elliptic_ke(std::span<const double> k, std::span<double> K, std::span<double> E);
double sin(double x) noexcept;
}  // namespace scalar

namespace avx2 {
void elliptic_ke(std::span<const double> k, std::span<double> K, std::span<double> E);
void sin(std::span<const double> x, std::span<double> out);
}  // namespace avx2

// ---------------------------------------------------------------------------
// Lock-step fixed-step RK4 for independent pendulum lanes:
//   u' = v,  v' = -sin u - eps (v + drive) - load
// Structure-of-arrays. u is kept wrapped to [-pi, pi]; whole turns are
// accumulated in `turns` so the unwrapped phase is u + 2 pi turns.
// lo/hi track the unwrapped extent visited since the caller last reset them.
// ---------------------------------------------------------------------------

struct PendulumBatch {
    std::vector<double> u, v, turns, lo, hi;
    std::vector<double> eps, drive, load;

    explicit PendulumBatch(std::size_t lanes = 0) { resize(lanes); }
    void resize(std::size_t lanes);
    std::size_t size() const noexcept { return u.size(); }

    double unwrapped(std::size_t lane) const noexcept;
    /// Sets lo = hi = current unwrapped phase for every lane.
    void reset_extent() noexcept;
};

void pendulum_rk4(PendulumBatch& batch, double dt, std::size_t steps);

namespace scalar {
void pendulum_rk4(PendulumBatch& batch, double dt, std::size_t steps);
}
namespace avx2 {
void pendulum_rk4(PendulumBatch& batch, double dt, std::size_t steps);
}

}  // namespace rackpinion::kernels
