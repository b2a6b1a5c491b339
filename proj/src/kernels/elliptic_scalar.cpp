#include "rackpinion/kernels/kernels.hpp"

#include <cmath>
#include <limits>

#include "sin_poly.hpp"

namespace rackpinion::kernels::scalar {

namespace {

void ke_one(double k, double& K, double& E) {
    if (k >= 1.0) {
        K = std::numeric_limits<double>::infinity();
        E = 1.0;
        return;
    }
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    double sum = 0.5 * (k * k);
    double weight = 0.5;
    for (int it = 0; it < detail::kAgmMaxIter; ++it) {
        if (!(a - b > detail::kAgmTol * a)) break;
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        const double c = 0.5 * (a - b);
        weight = weight * 2.0;
        sum = sum + weight * (c * c);
        a = an;
        b = bn;
    }
    K = detail::kHalfPi / a;
    E = K * (1.0 - sum);
}

}  // namespace

void elliptic_ke(std::span<const double> k, std::span<double> K, std::span<double> E) {
    for (std::size_t i = 0; i < k.size(); ++i) ke_one(k[i], K[i], E[i]);
}

}  // namespace rackpinion::kernels::scalar
