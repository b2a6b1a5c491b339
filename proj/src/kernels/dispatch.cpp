#include <atomic>
#include <cstdlib>
#include <cstring>

#include "rackpinion/kernels/kernels.hpp"

namespace rackpinion::kernels {

namespace {

constexpr int kAuto = -1;
std::atomic<int> g_override{kAuto};

bool cpu_has_avx2() noexcept {
#if defined(RACKPINION_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() noexcept {
    if (const char* env = std::getenv("RACKPINION_ISA"); env && std::strcmp(env, "scalar") == 0)
        return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

const char* isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    return isa == Isa::Scalar || cpu_has_avx2();
}

Isa active_isa() noexcept {
    const int o = g_override.load(std::memory_order_relaxed);
    if (o != kAuto) return static_cast<Isa>(o);
    static const Isa detected = detect();
    return detected;
}

void override_isa(std::optional<Isa> isa) noexcept {
    if (!isa) {
        g_override.store(kAuto);
        return;
    }
    g_override.store(static_cast<int>(isa_available(*isa) ? *isa : Isa::Scalar));
}

void elliptic_ke(std::span<const double> k, std::span<double> K, std::span<double> E) {
    if (active_isa() == Isa::Avx2)
        avx2::elliptic_ke(k, K, E);
    else
        scalar::elliptic_ke(k, K, E);
}

void pendulum_rk4(PendulumBatch& batch, double dt, std::size_t steps) {
    if (active_isa() == Isa::Avx2)
        avx2::pendulum_rk4(batch, dt, steps);
    else
        scalar::pendulum_rk4(batch, dt, steps);
}

#if !defined(RACKPINION_HAVE_AVX2)
// Builds without the AVX2 translation units route the avx2 names to scalar.
namespace avx2 {
void elliptic_ke(std::span<const double> k, std::span<double> K, std::span<double> E) {
    scalar::elliptic_ke(k, K, E);
}
void sin(std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = scalar::sin(x[i]);
}
void pendulum_rk4(PendulumBatch& batch, double dt, std::size_t steps) {
    scalar::pendulum_rk4(batch, dt, steps);
}
}  // namespace avx2
#endif

}  // namespace rackpinion::kernels
