#pragma once

// Qubit-resonator model with a sinusoidally modulated longitudinal coupling:
// drive-frame Hamiltonian, polaron displacement beta(t), sideband rates,
// Stark-shift helpers, effective Hamiltonians, dark state and dissipators.
//
// SystemParams stores ordinary frequencies in MHz. Every operator returned here
// is in angular units (rad/us); use angular() for the conversion.

#include <numbers>
#include <string>
#include <vector>

#include "lceit/harmonic.hpp"
#include "lceit/operators.hpp"

namespace lceit {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// MHz (ordinary) -> rad/us.
constexpr double angular(double mhz) { return kTwoPi * mhz; }
/// rad/us -> MHz (ordinary).
constexpr double ordinary(double rad_per_us) { return rad_per_us / kTwoPi; }

struct SystemParams {
    double omega_m = 100.0;
    double delta0 = 0.0;     // qubit-drive detuning
    double g0 = 8.0;
    double omega_g = 4.0;
    double omega_drv = 10.0;
    double omega_pr = 0.2;
    double delta = 0.0;      // probe-drive detuning
    double gamma_d = 3.0;
    double gamma_phi = 0.25;
    double kappa = 0.001;
    double n_th = 0.0;
    std::size_t ncut = 6;
    double n_rate = -1.0;    // N = <b^dag b> - 1 in the sideband rates

    /// Throws DomainError/DimensionError on hard violations.
    void validate() const;
    /// Non-fatal diagnostics (e.g. a large polaron displacement).
    [[nodiscard]] std::vector<std::string> warnings() const;

    [[nodiscard]] std::size_t dim() const noexcept { return 2 * ncut; }
    /// Gamma_f = Gamma_d / 2 + 2 Gamma_phi, MHz.
    [[nodiscard]] double gamma_f() const noexcept { return gamma_d / 2.0 + 2.0 * gamma_phi; }
    /// Dressed qubit-drive detuning sqrt(Delta0^2 + 4 Omega_drv^2), MHz.
    [[nodiscard]] double delta_tilde() const;
    /// delta_s = Delta_tilde - omega_m, MHz.
    [[nodiscard]] double sideband_detuning() const { return delta_tilde() - omega_m; }

    /// Operating point of the single-colour EIT figure: delta_s = -omega_g and the
    /// probe on the C1+ dip, delta = omega_m - omega_g.
    static SystemParams single_color_defaults();

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// |beta| warning threshold.
inline constexpr double kBetaWarnThreshold = 0.2;

/// Minimum |omega_m - omega_g| in MHz before beta(t) is treated as singular.
inline constexpr double kPoleGuard = 1e-9;

/// Operators promoted to the 2 x ncut product space.
struct ProductOperators {
    Operator sz, sx, sp, sm, b, bd, n, id;
    explicit ProductOperators(std::size_t ncut);
};

/// Free energies of H0 = Delta0/2 sigma_z + omega_m b^dag b, rad/us, in basis order.
std::vector<double> free_energies(const SystemParams& p);

/// Drive-frame Hamiltonian as static part plus harmonic terms (rad/us).
HarmonicHamiltonian drive_frame_hamiltonian(const SystemParams& p);
Operator hamiltonian_drive_frame(const SystemParams& p, double t);

/// beta(t) with C0 = 0. Dimensionless.
cplx beta(const SystemParams& p, double t);
/// d beta / dt, rad/us.
cplx beta_derivative(const SystemParams& p, double t);
/// eta(t) = g(t) - omega_m beta(t) + i dbeta/dt, rad/us; vanishes identically.
cplx eta(const SystemParams& p, double t);
/// g0 sqrt(omega_m^2 + omega_g^2) / (omega_m^2 - omega_g^2).
double beta_bound(const SystemParams& p);

struct SidebandRates {
    double c1_plus;
    double c1_minus;
    double c3_plus;
    double c3_minus;
};

/// First- and third-order sideband rates with N = p.n_rate, MHz.
SidebandRates sideband_rates(const SystemParams& p);

/// sqrt(delta0^2 + 4 omega_drv^2), MHz.
double stark_detuning(double delta0, double omega_drv);
/// Inverse of stark_detuning; throws DomainError if delta_tilde < 2 omega_drv.
double delta0_for(double delta_tilde, double omega_drv);

enum class Branch { plus, minus };

/// Magnitude of the dynamical Stark shift for one branch:
/// (omega_m -+ omega_g) - sqrt((omega_m -+ omega_g)^2 - 4 omega_drv^2), MHz.
double stark_shift(const SystemParams& p, Branch branch);

/// p with delta0 chosen so that delta_tilde = omega_m + delta_s.
SystemParams with_sideband_detuning(SystemParams p, double delta_s);

/// C1 sigma_+ b - Omega_pr sigma_+ + h.c. for the chosen branch (rad/us).
Operator effective_hamiltonian_single(const SystemParams& p, Branch branch);

/// sum_j C1j sigma_+ b e^{j i omega_g t} - Omega_pr sigma_+ e^{i(omega_m - delta)t} + h.c.
HarmonicHamiltonian twocolor_hamiltonian(const SystemParams& p);
Operator effective_hamiltonian_twocolor(const SystemParams& p, double t);

/// lambda = Omega_pr / C1+.
double dark_state_lambda(const SystemParams& p);
/// |g> (x) |alpha> with alpha = lambda * phase.
Ket dark_state(const SystemParams& p, cplx phase = 1.0);

struct CollapseChannel {
    Operator op;
    double rate;  // rad/us
    std::string name;
};

/// sigma_-, sigma_z, b, b^dag with rates Gamma_d, Gamma_phi, (n_th+1) kappa, n_th kappa.
std::vector<CollapseChannel> collapse_ops(const SystemParams& p);

}  // namespace lceit
