#include "lceit/model.hpp"

#include <cmath>
#include <sstream>

#include "lceit/errors.hpp"

namespace lceit {

namespace {

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0)) throw DomainError(std::string(name) + " must be non-negative and finite");
}

void require_pole_guard(const SystemParams& p) {
    if (!(p.omega_g < p.omega_m) || std::abs(p.omega_m - p.omega_g) < kPoleGuard) {
        throw DomainError("omega_g must be strictly below omega_m (beta(t) pole)");
    }
}

}  // namespace

void SystemParams::validate() const {
    const double all[] = {omega_m, delta0, g0, omega_g, omega_drv, omega_pr, delta, gamma_d, gamma_phi, kappa, n_th, n_rate};
    for (double v : all) {
        if (!std::isfinite(v)) throw DomainError("SystemParams: non-finite field");
    }
    if (!(omega_m > 0.0)) throw DomainError("omega_m must be positive");
    require_nonnegative(omega_g, "omega_g");
    require_pole_guard(*this);
    require_nonnegative(gamma_d, "gamma_d");
    require_nonnegative(gamma_phi, "gamma_phi");
    require_nonnegative(kappa, "kappa");
    require_nonnegative(n_th, "n_th");
    if (ncut < 4) throw DimensionError("ncut must be >= 4, got " + std::to_string(ncut));
}

std::vector<std::string> SystemParams::warnings() const {
    std::vector<std::string> out;
    if (omega_g < omega_m) {
        const double bound = beta_bound(*this);
        if (bound >= kBetaWarnThreshold) {
            std::ostringstream os;
            os << "polaron displacement bound " << bound << " >= " << kBetaWarnThreshold
               << "; the sideband expansion is unreliable";
            out.push_back(os.str());
        }
    }
    return out;
}

double SystemParams::delta_tilde() const { return stark_detuning(delta0, omega_drv); }

SystemParams SystemParams::single_color_defaults() {
    SystemParams p;
    p = with_sideband_detuning(p, -p.omega_g);
    p.delta = p.omega_m - p.omega_g;
    return p;
}

ProductOperators::ProductOperators(std::size_t ncut)
    : sz(kron(sigma_z(), Operator::identity(ncut))),
      sx(kron(sigma_x(), Operator::identity(ncut))),
      sp(kron(sigma_plus(), Operator::identity(ncut))),
      sm(kron(sigma_minus(), Operator::identity(ncut))),
      b(kron(Operator::identity(2), annihilation(ncut))),
      bd(kron(Operator::identity(2), creation(ncut))),
      n(kron(Operator::identity(2), number_operator(ncut))),
      id(Operator::identity(2 * ncut)) {}

std::vector<double> free_energies(const SystemParams& p) {
    std::vector<double> e(p.dim());
    const double half = angular(p.delta0) / 2.0;
    const double wm = angular(p.omega_m);
    for (std::size_t n = 0; n < p.ncut; ++n) {
        e[kQubitExcited * p.ncut + n] = half + wm * static_cast<double>(n);
        e[kQubitGround * p.ncut + n] = -half + wm * static_cast<double>(n);
    }
    return e;
}

HarmonicHamiltonian drive_frame_hamiltonian(const SystemParams& p) {
    p.validate();
    const ProductOperators o(p.ncut);
    Operator h0 = 0.5 * angular(p.delta0) * o.sz + angular(p.omega_m) * o.n - angular(p.omega_drv) * o.sx;
    const Operator coupling = o.sz * (o.b + o.bd);
    const double g_half = 0.5 * angular(p.g0);
    if (p.omega_g == 0.0) h0 += 2.0 * g_half * coupling;
    HarmonicHamiltonian h(std::move(h0));
    if (p.omega_g != 0.0) {
        h.add_term(coupling, g_half, angular(p.omega_g));
        h.add_term(coupling, g_half, -angular(p.omega_g));
    }
    h.add_hermitian_pair(o.sp, -angular(p.omega_pr), -angular(p.delta));
    return h;
}

Operator hamiltonian_drive_frame(const SystemParams& p, double t) { return drive_frame_hamiltonian(p).at(t); }

cplx beta(const SystemParams& p, double t) {
    require_pole_guard(p);
    const double wm = angular(p.omega_m);
    const double wg = angular(p.omega_g);
    const double g = angular(p.g0) / 2.0;
    return g * (std::polar(1.0, wg * t) / (wm + wg) + std::polar(1.0, -wg * t) / (wm - wg));
}

cplx beta_derivative(const SystemParams& p, double t) {
    require_pole_guard(p);
    const double wm = angular(p.omega_m);
    const double wg = angular(p.omega_g);
    const double g = angular(p.g0) / 2.0;
    const cplx i{0.0, 1.0};
    return g * i * wg * (std::polar(1.0, wg * t) / (wm + wg) - std::polar(1.0, -wg * t) / (wm - wg));
}

cplx eta(const SystemParams& p, double t) {
    const double g_t = angular(p.g0) * std::cos(angular(p.omega_g) * t);
    return g_t - angular(p.omega_m) * beta(p, t) + cplx{0.0, 1.0} * beta_derivative(p, t);
}

double beta_bound(const SystemParams& p) {
    require_pole_guard(p);
    const double wm2 = p.omega_m * p.omega_m;
    const double wg2 = p.omega_g * p.omega_g;
    return p.g0 * std::sqrt(wm2 + wg2) / (wm2 - wg2);
}

SidebandRates sideband_rates(const SystemParams& p) {
    require_pole_guard(p);
    const double wm = p.omega_m;
    const double wg = p.omega_g;
    const double g = p.g0;
    const double od = p.omega_drv;
    const double n = p.n_rate;
    const double diff2 = wm * wm - wg * wg;
    const double cubic = 4.0 * n * g * g * g * od / 3.0;
    SidebandRates r{};
    r.c1_plus = g * od / (wm - wg) - cubic * (3.0 * wm - wg) / (diff2 * diff2);
    r.c1_minus = g * od / (wm + wg) - cubic * (3.0 * wm + wg) / (diff2 * diff2);
    r.c3_plus = cubic / (diff2 * (wm - wg));
    r.c3_minus = cubic / (diff2 * (wm + wg));
    return r;
}

double stark_detuning(double delta0, double omega_drv) { return std::hypot(delta0, 2.0 * omega_drv); }

double delta0_for(double delta_tilde, double omega_drv) {
    const double two_o = 2.0 * std::abs(omega_drv);
    if (!(delta_tilde >= two_o)) {
        throw DomainError("delta0_for: dressed detuning " + std::to_string(delta_tilde) + " below 2 omega_drv = " +
                          std::to_string(two_o));
    }
    return std::sqrt((delta_tilde - two_o) * (delta_tilde + two_o));
}

double stark_shift(const SystemParams& p, Branch branch) {
    const double w = branch == Branch::plus ? p.omega_m - p.omega_g : p.omega_m + p.omega_g;
    return w - delta0_for(w, p.omega_drv);
}

SystemParams with_sideband_detuning(SystemParams p, double delta_s) {
    p.delta0 = delta0_for(p.omega_m + delta_s, p.omega_drv);
    return p;
}

Operator effective_hamiltonian_single(const SystemParams& p, Branch branch) {
    const ProductOperators o(p.ncut);
    const auto rates = sideband_rates(p);
    const double c1 = angular(branch == Branch::plus ? rates.c1_plus : rates.c1_minus);
    const Operator a = c1 * (o.sp * o.b) - angular(p.omega_pr) * o.sp;
    return a + a.adjoint();
}

HarmonicHamiltonian twocolor_hamiltonian(const SystemParams& p) {
    const ProductOperators o(p.ncut);
    const auto rates = sideband_rates(p);
    const Operator spb = o.sp * o.b;
    const double wg = angular(p.omega_g);
    HarmonicHamiltonian h(Operator(p.dim()));
    h.add_hermitian_pair(spb, angular(rates.c1_plus), wg);
    h.add_hermitian_pair(spb, angular(rates.c1_minus), -wg);
    h.add_hermitian_pair(o.sp, -angular(p.omega_pr), angular(p.omega_m - p.delta));
    return h;
}

Operator effective_hamiltonian_twocolor(const SystemParams& p, double t) { return twocolor_hamiltonian(p).at(t); }

double dark_state_lambda(const SystemParams& p) {
    const double c1 = sideband_rates(p).c1_plus;
    if (c1 == 0.0) throw DomainError("dark_state: C1+ = 0, the dark state is undefined");
    return p.omega_pr / c1;
}

Ket dark_state(const SystemParams& p, cplx phase) {
    const double lambda = dark_state_lambda(p);
    return kron(qubit_ground(), coherent_ket(lambda * phase, p.ncut));
}

std::vector<CollapseChannel> collapse_ops(const SystemParams& p) {
    const ProductOperators o(p.ncut);
    return {
        {o.sm, angular(p.gamma_d), "sigma_minus"},
        {o.sz, angular(p.gamma_phi), "sigma_z"},
        {o.b, angular((p.n_th + 1.0) * p.kappa), "b"},
        {o.bd, angular(p.n_th * p.kappa), "b_dag"},
    };
}

}  // namespace lceit
