#include "lceit/device.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "lceit/errors.hpp"

namespace lceit::device {

namespace {

constexpr double kPi = std::numbers::pi;

// Distance from phi to the nearest pi/2 + k pi.
double distance_to_half_pi(double phi) {
    const double shifted = std::remainder(phi - kPi / 2.0, kPi);
    return std::abs(shifted);
}

void check_phase(const DeviceParams& p) {
    if (p.d0 > 0.0 && distance_to_half_pi(p.phi_minus) < p.phase_guard) {
        throw DomainError("phi_minus = " + std::to_string(p.phi_minus) + " is within " +
                          std::to_string(p.phase_guard) + " rad of pi/2 with d0 > 0 (singular phase)");
    }
}

}  // namespace

void DeviceParams::validate() const {
    if (!(d0 >= 0.0 && d0 < 1.0)) throw DomainError("d0 must lie in [0, 1)");
    if (!(ej_sum > 0.0)) throw DomainError("ej_sum must be positive");
    if (!(ec > 0.0)) throw DomainError("ec must be positive");
    if (!(mass > 0.0)) throw DomainError("mass must be positive");
    if (!(omega_m > 0.0)) throw DomainError("omega_m must be positive");
    if (!(phase_guard >= 0.0)) throw DomainError("phase_guard must be non-negative");
}

EffectiveJosephson effective_ej(const DeviceParams& p) {
    check_phase(p);
    const double c = std::cos(p.phi_minus);
    const double s = std::sin(p.phi_minus);
    return {p.ej_sum * std::sqrt(c * c + p.d0 * p.d0 * s * s), std::atan(p.d0 * std::tan(p.phi_minus))};
}

double effective_ej_phase_derivative(const DeviceParams& p) {
    check_phase(p);
    const double d2 = p.d0 * p.d0;
    if (p.d0 == 0.0) {
        // E' = E |cos phi|
        const double c = std::cos(p.phi_minus);
        return -p.ej_sum * std::sin(p.phi_minus) * (c < 0.0 ? -1.0 : 1.0);
    }
    const double c = std::cos(p.phi_minus);
    return -p.ej_sum * std::sin(2.0 * p.phi_minus) * (1.0 - d2) / (2.0 * std::sqrt((1.0 - d2) * c * c + d2));
}

double flux_slope(const DeviceParams& p) {
    const double dphi_dz = kPi * p.b_field * p.xi * p.length / constants::kFluxQuantum;
    return effective_ej_phase_derivative(p) * dphi_dz;
}

double flux_qubit_g(double alpha) {
    if (!(alpha >= 0.5)) throw DomainError("flux_qubit_g: alpha must be >= 0.5");
    const double q = 1.0 / (4.0 * alpha);
    return std::sqrt(1.0 - q * q) - std::acos(1.0 / (2.0 * alpha)) / (2.0 * alpha);
}

double flux_qubit_gap(double ej0, double ec, double alpha, GapExponentEnergy exponent) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw DomainError("flux_qubit_gap: alpha = " + std::to_string(alpha) + " outside (0.5, 1)");
    }
    if (!(ej0 > 0.0 && ec > 0.0)) throw DomainError("flux_qubit_gap: energies must be positive");
    double prefactor = 2.0 * alpha * alpha - 1.0;
    if (prefactor < 0.0 && prefactor > -1e-12) prefactor = 0.0;  // alpha = 1/sqrt(2) up to rounding
    if (prefactor < 0.0) {
        throw DomainError("flux_qubit_gap: alpha = " + std::to_string(alpha) +
                          " below 1/sqrt(2), the tight-binding prefactor is negative");
    }
    const double ej = exponent == GapExponentEnergy::ej0 ? ej0 : alpha * ej0;
    const double amplitude = std::sqrt(4.0 * ej0 * ec * prefactor / alpha);
    return amplitude * std::exp(-flux_qubit_g(alpha) * std::sqrt(4.0 * alpha * (1.0 + 2.0 * alpha) * ej / ec));
}

double flux_qubit_gap_alpha_derivative(double ej0, double ec, double alpha, double step,
                                       GapExponentEnergy exponent) {
    auto central = [&](double h) {
        return (flux_qubit_gap(ej0, ec, alpha + h, exponent) - flux_qubit_gap(ej0, ec, alpha - h, exponent)) /
               (2.0 * h);
    };
    return (4.0 * central(step / 2.0) - central(step)) / 3.0;
}

Sensitivity gap_sensitivity(const DeviceParams& p, double alpha, double step, GapExponentEnergy exponent) {
    const double dgap_dalpha = flux_qubit_gap_alpha_derivative(p.ej0, p.ec, alpha, step, exponent);
    const double dalpha_de = 1.0 / p.ej0;
    const double de_dphi = effective_ej_phase_derivative(p);
    const double r = dgap_dalpha * dalpha_de * de_dphi;
    return {r, per_mphi0_from_per_radian(r)};
}

double transmon_freq(double ec, double e_prime) {
    if (!(ec > 0.0 && e_prime > 0.0)) throw DomainError("transmon_freq: energies must be positive");
    if (e_prime / ec < 10.0) {
        std::clog << "warning: transmon_freq: E'/E_C = " << e_prime / ec
                  << " < 10, outside the transmon regime\n";
    }
    return std::sqrt(8.0 * ec * e_prime) - ec;
}

Sensitivity transmon_sensitivity(double ec, double ej_sum, double phi_minus) {
    if (!(ec > 0.0 && ej_sum > 0.0)) throw DomainError("transmon_sensitivity: energies must be positive");
    if (!(phi_minus >= 0.0 && phi_minus < kPi / 2.0)) {
        throw DomainError("transmon_sensitivity: phi_minus must lie in [0, pi/2)");
    }
    const double r = std::sqrt(2.0 * ec * ej_sum * std::sin(phi_minus) * std::tan(phi_minus));
    return {r, per_mphi0_from_per_radian(r)};
}

double zero_point(double mass, double omega_m_mhz) {
    if (!(mass > 0.0 && omega_m_mhz > 0.0)) throw DomainError("zero_point: mass and frequency must be positive");
    const double omega = 2.0 * kPi * omega_m_mhz * 1e6;
    return std::sqrt(constants::kHbar / (2.0 * mass * omega));
}

CouplingAmplitude coupling_amplitude(double r_sens_per_mphi0, const DeviceParams& p, double convention) {
    if (!(r_sens_per_mphi0 >= 0.0)) throw DomainError("coupling_amplitude: sensitivity must be non-negative");
    if (!(p.b_field >= 0.0 && p.xi > 0.0 && p.length > 0.0)) {
        throw DomainError("coupling_amplitude: field, xi and length must be positive");
    }
    const double x0 = zero_point(p.mass, p.omega_m);
    const double flux = p.b_field * p.xi * p.length * x0 / constants::kFluxQuantum * 1e3;
    const double g_ghz = r_sens_per_mphi0 * flux * convention;
    return {ghz_to_mhz(g_ghz), flux, x0, convention};
}

}  // namespace lceit::device
