#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "lceit/device.hpp"
#include "lceit/errors.hpp"

using namespace lceit;
using namespace lceit::device;

TEST_SUITE("device") {

TEST_CASE("effective Josephson energy") {
    DeviceParams p;
    p.phi_minus = 0.0;
    auto e = effective_ej(p);
    CHECK(e.e_prime == doctest::Approx(70.0));
    CHECK(e.phi0 == 0.0);
    p.phi_minus = std::numbers::pi / 3.0;
    e = effective_ej(p);
    CHECK(e.e_prime == doctest::Approx(35.0).epsilon(1e-14));
    p.d0 = 0.999999;
    p.phi_minus = 0.7;
    CHECK(effective_ej(p).e_prime == doctest::Approx(70.0).epsilon(1e-5));
}

TEST_CASE("phase guard near pi/2 with asymmetry") {
    DeviceParams p;
    p.d0 = 0.1;
    p.phi_minus = std::numbers::pi / 2.0;
    CHECK_THROWS_AS((void)effective_ej(p), DomainError);
    p.d0 = 1.2;
    CHECK_THROWS_AS((void)p.validate(), DomainError);
}

TEST_CASE("flux slope reduces to the symmetric closed form") {
    std::mt19937_64 rng(5);
    // Closed form holds for cos(phi_minus) > 0.
    std::uniform_real_distribution<double> u(0.01, std::numbers::pi / 2.0 - 0.01);
    DeviceParams p;
    for (int k = 0; k < 100; ++k) {
        p.phi_minus = u(rng);
        const double closed = -std::numbers::pi * p.ej_sum * std::sin(p.phi_minus) * p.b_field * p.xi * p.length /
                              constants::kFluxQuantum;
        CHECK(std::abs(flux_slope(p) - closed) <= 1e-12 * std::abs(closed));
    }
    p.b_field = 0.0;
    CHECK(flux_slope(p) == 0.0);
}

TEST_CASE("symmetric slope magnitude peaks at pi/2") {
    DeviceParams p;
    double best = 0.0;
    double arg = 0.0;
    for (int k = 1; k < 1000; ++k) {
        p.phi_minus = std::numbers::pi * k / 1000.0;
        const double v = std::abs(flux_slope(p));
        if (v > best) {
            best = v;
            arg = p.phi_minus;
        }
    }
    CHECK(arg == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-3));
}

TEST_CASE("flux-qubit gap") {
    CHECK(flux_qubit_g(0.5) == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(std::abs(flux_qubit_gap(100.0, 2.0, 1.0 / std::sqrt(2.0))) < 1e-12);
    CHECK_THROWS_AS((void)flux_qubit_gap(100.0, 2.0, 1.2), DomainError);
    // The gap opens from zero at 1/sqrt(2), peaks near alpha = 0.75, then falls.
    CHECK(flux_qubit_gap(100.0, 2.0, 0.73) > flux_qubit_gap(100.0, 2.0, 0.72));
    double prev = flux_qubit_gap(100.0, 2.0, 0.76);
    for (double a = 0.77; a <= 0.95; a += 0.01) {
        const double g = flux_qubit_gap(100.0, 2.0, a);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("gap sensitivity is field independent and step converged") {
    DeviceParams p;
    p.ej0 = 80.0;
    p.phi_minus = 0.3;
    const double alpha = effective_ej(p).e_prime / p.ej0;
    REQUIRE(alpha > 0.5);
    REQUIRE(alpha < 1.0);
    const auto a = gap_sensitivity(p, alpha);
    p.b_field = 1e-3;
    CHECK(gap_sensitivity(p, alpha).per_radian == a.per_radian);
    const auto half = gap_sensitivity(p, alpha, 5e-7);
    CHECK(std::abs(half.per_radian - a.per_radian) <= 1e-6 * std::abs(a.per_radian));
}

TEST_CASE("transmon frequency and sensitivity") {
    CHECK(transmon_freq(2.0, 35.0) == doctest::Approx(std::sqrt(560.0) - 2.0));
    CHECK(transmon_freq(2.0, 0.25) == doctest::Approx(0.0));
    CHECK(transmon_freq(2.0, 70.0) + 2.0 == doctest::Approx(std::sqrt(2.0) * (transmon_freq(2.0, 35.0) + 2.0)).epsilon(1e-12));
    const auto r = transmon_sensitivity(2.0, 70.0, std::numbers::pi / 3.0);
    CHECK(r.per_radian == doctest::Approx(20.49).epsilon(1e-3));
    CHECK(std::abs(r.per_mphi0 - 0.064) <= 0.02 * 0.064);
    CHECK(transmon_sensitivity(8.0, 70.0, 0.5).per_radian ==
          doctest::Approx(2.0 * transmon_sensitivity(2.0, 70.0, 0.5).per_radian));
    CHECK_THROWS_AS((void)transmon_sensitivity(2.0, 70.0, std::numbers::pi / 2.0), DomainError);
}

TEST_CASE("transmon sensitivity is the derivative of E01") {
    DeviceParams p;
    const double phi = 0.9;
    const double h = 1e-6;
    auto e01 = [&](double x) {
        p.phi_minus = x;
        return transmon_freq(p.ec, effective_ej(p).e_prime);
    };
    const double fd = (e01(phi + h) - e01(phi - h)) / (2.0 * h);
    CHECK(std::abs(std::abs(fd) - transmon_sensitivity(p.ec, p.ej_sum, phi).per_radian) <
          1e-6 * transmon_sensitivity(p.ec, p.ej_sum, phi).per_radian);
}

TEST_CASE("zero-point motion") {
    const double x0 = zero_point(4e-21, 100.0);
    CHECK(std::abs(x0 - 4.58e-12) <= 0.01 * 4.58e-12);
    CHECK(zero_point(16e-21, 100.0) == doctest::Approx(x0 / 2.0));
    CHECK(zero_point(4e-21, 400.0) == doctest::Approx(x0 / 2.0));
}

TEST_CASE("coupling amplitude") {
    DeviceParams p;
    const auto g = coupling_amplitude(0.25, p);
    CHECK(g.convention == kDefaultCouplingConvention);
    CHECK(g.g_mhz > 1.0);
    CHECK(g.g_mhz < 64.0);
    p.b_field *= 2.0;
    CHECK(coupling_amplitude(0.25, p).g_mhz == doctest::Approx(2.0 * g.g_mhz));
}

}
