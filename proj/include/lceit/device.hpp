#pragma once

// Circuit-level estimates for a SQUID-embedded nanomechanical resonator:
// effective Josephson energy, flux- and transmon-qubit gaps, their flux
// sensitivities and the achievable longitudinal coupling amplitude.
//
// Units: energies in GHz (ordinary frequency), lengths in metres, field in
// tesla, masses in kg. Conversions into the simulator's MHz convention go
// through the explicit helpers at the bottom of this header.

#include <numbers>

namespace lceit::device {

namespace constants {
inline constexpr double kFluxQuantum = 2.067833848e-15;  // Wb
inline constexpr double kHbar = 1.054571817e-34;         // J s
}  // namespace constants

struct DeviceParams {
    double ej_sum = 70.0;        // E_J-sigma, GHz
    double ej0 = 70.0;           // E_J0 of the two large flux-qubit junctions, GHz
    double ec = 2.0;             // E_C, GHz
    double d0 = 0.0;             // junction asymmetry, [0, 1)
    double phi_minus = std::numbers::pi / 3.0;  // rad
    double b_field = 800e-6;     // |B(omega')|, T
    double xi = 0.9;             // geometric constant
    double length = 3e-6;        // resonator length, m
    double mass = 4e-21;         // kg
    double omega_m = 100.0;      // omega_m / 2pi, MHz
    double phase_guard = 1e-3;   // minimum distance of phi_minus from pi/2 when d0 > 0, rad

    /// Throws DomainError on violated invariants.
    void validate() const;
    friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

struct EffectiveJosephson {
    double e_prime;  // GHz
    double phi0;     // rad
};

EffectiveJosephson effective_ej(const DeviceParams& p);

/// dE'/dphi_minus, GHz per radian.
double effective_ej_phase_derivative(const DeviceParams& p);

/// dE'/d(Delta z), GHz per metre.
double flux_slope(const DeviceParams& p);

/// Which energy sits inside the tunnelling exponent of the gap formula.
enum class GapExponentEnergy { ej0, e_prime };

/// g(alpha) = sqrt(1 - 1/(4 alpha)^2) - arccos(1/(2 alpha)) / (2 alpha).
double flux_qubit_g(double alpha);

/// Tight-binding gap of the gap-tunable flux qubit, GHz. Requires 1/sqrt(2) <= alpha < 1.
double flux_qubit_gap(double ej0, double ec, double alpha,
                      GapExponentEnergy exponent = GapExponentEnergy::ej0);

/// dDelta_t/dalpha by Richardson-extrapolated central differences.
double flux_qubit_gap_alpha_derivative(double ej0, double ec, double alpha, double step = 1e-6,
                                       GapExponentEnergy exponent = GapExponentEnergy::ej0);

struct Sensitivity {
    double per_radian;  // GHz / rad
    double per_mphi0;   // GHz / mPhi0
};

/// GHz/rad -> GHz/mPhi0 (phi_minus = pi Phi_x / Phi_0).
constexpr double per_mphi0_from_per_radian(double v) { return v * std::numbers::pi * 1e-3; }

/// R_f = dDelta_t/dalpha * dalpha/dE' * dE'/dphi_minus.
Sensitivity gap_sensitivity(const DeviceParams& p, double alpha, double step = 1e-6,
                            GapExponentEnergy exponent = GapExponentEnergy::ej0);

/// E01 = sqrt(8 E_C E') - E_C, GHz.
double transmon_freq(double ec, double e_prime);

/// R_t = sqrt(2 E_C E_J-sigma sin(phi) tan(phi)) for a symmetric SQUID.
Sensitivity transmon_sensitivity(double ec, double ej_sum, double phi_minus);

/// x0 = sqrt(hbar / (2 m omega_m)), metres; omega_m given as omega_m / 2pi in MHz.
double zero_point(double mass, double omega_m_mhz);

/// Default convention factor: pi from phi_minus = pi Phi_x / Phi_0 is already in
/// R (GHz/mPhi0); 2 from B e^{-iwt} + B* e^{iwt}; the remaining pi turns the
/// ordinary-frequency sensitivity into an angular amplitude quoted over 2 pi.
inline constexpr double kDefaultCouplingConvention = 2.0 * std::numbers::pi;

struct CouplingAmplitude {
    double g_mhz;            // g(omega') / 2pi, MHz
    double flux_mphi0;       // delta Phi_pp = B xi l x0 / Phi_0, mPhi0
    double x0;               // m
    double convention;       // the factor actually applied
};

CouplingAmplitude coupling_amplitude(double r_sens_per_mphi0, const DeviceParams& p,
                                     double convention = kDefaultCouplingConvention);

constexpr double ghz_to_mhz(double ghz) { return ghz * 1e3; }
constexpr double mhz_to_ghz(double mhz) { return mhz * 1e-3; }

}  // namespace lceit::device
