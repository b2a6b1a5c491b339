#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rackpinion/errors.hpp"
#include "rackpinion/special_functions.hpp"

using namespace rackpinion;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Defining integrals by adaptive Gauss-Kronrod quadrature.
double quad_K(double m) {
    auto f = [m](double t) {
        const double s = std::sin(t);
        return 1.0 / std::sqrt(1.0 - m * m * s * s);
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, kHalfPi, 8, 1e-14);
}

double quad_E(double m) {
    auto f = [m](double t) {
        const double s = std::sin(t);
        return std::sqrt(1.0 - m * m * s * s);
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, kHalfPi, 8, 1e-14);
}

}  // namespace

TEST_CASE("closed values") {
    CHECK(ellip_K(0.0) == doctest::Approx(kHalfPi).epsilon(1e-16));
    CHECK(ellip_E(0.0) == doctest::Approx(kHalfPi).epsilon(1e-16));
    CHECK(ellip_E(1.0) == 1.0);
}

TEST_CASE("frozen high-precision values") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(ellip_K(r) == doctest::Approx(1.854074677301371918).epsilon(1e-14));
    CHECK(ellip_K(0.2) == doctest::Approx(1.586867847454166237).epsilon(1e-14));
    CHECK(ellip_E(r) == doctest::Approx(1.350643881047675503).epsilon(1e-14));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(ellip_K(1.0), DivergenceError);
    CHECK_THROWS_AS(ellip_K(1.5), DomainError);
    CHECK_THROWS_AS(ellip_K(-0.1), DomainError);
    CHECK_THROWS_AS(ellip_K(std::nan("")), DomainError);
    CHECK_THROWS_AS(ellip_E(1.0000001), DomainError);
    CHECK_THROWS_AS(ellip_E(-1e-9), DomainError);
}

TEST_CASE("agreement with the quadrature oracle on random moduli") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> m(0.0, 0.99);
    for (int i = 0; i < 100; ++i) {
        const double k = m(rng);
        CHECK(std::fabs(ellip_K(k) - quad_K(k)) < 1e-12);
        CHECK(std::fabs(ellip_E(k) - quad_E(k)) < 1e-12);
    }
}

TEST_CASE("Legendre relation") {
    for (int i = 1; i <= 9; ++i) {
        const double m = 0.1 * i;
        const double mp = std::sqrt(1.0 - m * m);
        const double lhs = ellip_E(m) * ellip_K(mp) + ellip_E(mp) * ellip_K(m) - ellip_K(m) * ellip_K(mp);
        CHECK(std::fabs(lhs - kHalfPi) < 1e-12);
    }
}

TEST_CASE("monotone in the modulus") {
    double K_prev = ellip_K(0.0), E_prev = ellip_E(0.0);
    for (int i = 1; i < 10000; ++i) {
        const double m = i / 10000.0;
        const double K = ellip_K(m), E = ellip_E(m);
        CHECK(K > K_prev);
        CHECK(E < E_prev);
        K_prev = K;
        E_prev = E;
    }
}

TEST_CASE("batched evaluation matches the scalar entry points") {
    std::vector<double> m(257), K(257), E(257);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<double>(i) / 256.0;
    ellip_KE(m, K, E);
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        CHECK(K[i] == ellip_K(m[i]));
        CHECK(E[i] == ellip_E(m[i]));
    }
    CHECK(std::isinf(K.back()));
    CHECK(E.back() == 1.0);

    std::vector<double> bad{0.5, 1.2};
    std::vector<double> K2(2), E2(2);
    CHECK_THROWS_AS(ellip_KE(bad, K2, E2), DomainError);
}

TEST_CASE("near-singular modulus keeps relative accuracy") {
    // K(k) = L + (k'^2 / 4)(L - 1) + O(k'^4 L), L = ln(4/k'), as k -> 1.
    for (int e : {30, 40, 50}) {
        const double k = 1.0 - std::ldexp(1.0, -e);
        const double kp = std::sqrt((1.0 - k) * (1.0 + k));
        const double L = std::log(4.0 / kp);
        CHECK(ellip_K(k) == doctest::Approx(L + 0.25 * kp * kp * (L - 1.0)).epsilon(1e-12));
    }
}
