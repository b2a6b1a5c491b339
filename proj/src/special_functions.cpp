#include "rackpinion/special_functions.hpp"

#include <cmath>
#include <string>

#include "rackpinion/errors.hpp"
#include "rackpinion/kernels/kernels.hpp"

namespace rackpinion {

namespace {

void check_modulus(double m, const char* who) {
    if (!(m >= 0.0 && m <= 1.0))
        throw DomainError(std::string(who) + ": modulus must lie in [0, 1], got " + std::to_string(m));
}

}  // namespace

double ellip_K(double m) {
    check_modulus(m, "ellip_K");
    if (m == 1.0) throw DivergenceError("ellip_K: K(1) diverges");
    double k = 0.0, e = 0.0;
    kernels::scalar::elliptic_ke({&m, 1}, {&k, 1}, {&e, 1});
    return k;
}

double ellip_E(double m) {
    check_modulus(m, "ellip_E");
    double k = 0.0, e = 0.0;
    kernels::scalar::elliptic_ke({&m, 1}, {&k, 1}, {&e, 1});
    return e;
}

void ellip_KE(std::span<const double> m, std::span<double> K, std::span<double> E) {
    if (K.size() != m.size() || E.size() != m.size())
        throw DomainError("ellip_KE: output spans must match the input length");
    for (double x : m) check_modulus(x, "ellip_KE");
    kernels::elliptic_ke(m, K, E);
}

}  // namespace rackpinion
