#include "doctest.h"

#include <cmath>
#include <random>

#include "lceit/errors.hpp"
#include "lceit/lindblad.hpp"

using namespace lceit;

namespace {

Operator random_hermitian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Operator h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = d(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = {d(rng), d(rng)};
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

DensityMatrix random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Operator a(n);
    for (std::size_t i = 0; i < n * n; ++i) a.data()[i] = {d(rng), d(rng)};
    Operator rho = a * a.adjoint();
    rho *= 1.0 / rho.trace().real();
    return DensityMatrix(rho);
}

std::vector<CollapseChannel> all_channels(std::size_t ncut) {
    const ProductOperators o(ncut);
    return {{o.sm, 0.7, "sigma_minus"}, {o.sz, 0.3, "sigma_z"}, {o.b, 0.4, "b"}, {o.bd, 0.15, "b_dag"}};
}

}  // namespace

TEST_SUITE("lindblad") {

TEST_CASE("fast generator matches the direct right-hand side") {
    std::mt19937_64 rng(7);
    SystemParams p = SystemParams::single_color_defaults();
    p.ncut = 5;
    p.n_th = 0.5;
    const auto h = drive_frame_hamiltonian(p);
    const auto c = collapse_ops(p);
    LindbladGenerator gen(h, c);
    const auto rho = random_state(p.dim(), rng);
    for (double t : {0.0, 0.037, 1.2}) {
        Operator fast(p.dim());
        gen(t, rho.matrix(), fast);
        const Operator ref = lindblad_rhs(h.at(t), c, rho);
        CHECK((fast - ref).max_abs() < 1e-10 * (1.0 + ref.max_abs()));
        CHECK(fast.is_hermitian(1e-12));
        CHECK(std::abs(fast.trace()) < 1e-10);
    }
}

TEST_CASE("evolution matches the Liouvillian exponential on a random 2x3 system") {
    std::mt19937_64 rng(2024);
    const std::size_t ncut = 3;
    const Operator h = random_hermitian(2 * ncut, rng);
    const auto c = all_channels(ncut);
    const auto rho0 = random_state(2 * ncut, rng);
    const auto oracle = oracle_propagate(rho0, h, c, 5.0);
    StepControl ctrl;
    ctrl.method = Integrator::dopri45;
    ctrl.atol = 1e-13;
    ctrl.rtol = 1e-12;
    const auto traj = evolve(rho0, HarmonicHamiltonian(h), c, 5.0, {}, ctrl);
    CHECK((traj.final_state.matrix() - oracle.matrix()).frobenius_norm() < 1e-8);

    StepControl rk;
    rk.dt = 2e-4;
    const auto traj_rk = evolve(rho0, HarmonicHamiltonian(h), c, 5.0, {}, rk);
    CHECK((traj_rk.final_state.matrix() - oracle.matrix()).frobenius_norm() < 1e-8);
}

TEST_CASE("spontaneous emission decays as exp(-Gamma t)") {
    SystemParams p;
    p.ncut = 4;
    const ProductOperators o(p.ncut);
    const double gamma = angular(3.0);
    const std::vector<CollapseChannel> c = {{o.sm, gamma, "sigma_minus"}};
    StepControl ctrl;
    ctrl.dt = 1e-4;
    const auto traj = evolve(excited_state(p), HarmonicHamiltonian(Operator(p.dim())), c, 1.0 / gamma,
                             {expectation_observable("pe", o.sp * o.sm)}, ctrl);
    CHECK(std::abs(traj.records[0].back().real() - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("coherence decays at Gamma_f = Gamma_d / 2 + 2 Gamma_phi") {
    SystemParams p;
    p.ncut = 4;
    const ProductOperators o(p.ncut);
    const double gd = angular(p.gamma_d);
    const double gp = angular(p.gamma_phi);
    const double gf = angular(p.gamma_f());
    CHECK(gf == doctest::Approx(gd / 2.0 + 2.0 * gp));
    const std::vector<CollapseChannel> c = {{o.sm, gd, "sigma_minus"}, {o.sz, gp, "sigma_z"}};
    Ket plus = kron(Ket(std::vector<cplx>{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}), Ket::basis(p.ncut, 0));
    StepControl ctrl;
    ctrl.dt = 1e-4;
    const double t = 1.0 / gf;
    const auto traj = evolve(DensityMatrix::pure(plus), HarmonicHamiltonian(Operator(p.dim())), c,
                             std::round(t / ctrl.dt) * ctrl.dt, {expectation_observable("sm", o.sm)}, ctrl);
    const double tf = traj.times.back();
    CHECK(std::abs(std::abs(traj.records[0].back()) - 0.5 * std::exp(-gf * tf)) < 1e-6);
}

TEST_CASE("drive and interaction frames agree") {
    SystemParams p = SystemParams::single_color_defaults();
    p.ncut = 4;
    StepControl ctrl;
    ctrl.dt = 2e-5;
    const auto a = evolve(make_problem(p, FrameChoice::drive), initial_state(p), 0.0, 0.5, {}, ctrl);
    const auto b = evolve(make_problem(p, FrameChoice::interaction), initial_state(p), 0.0, 0.5, {}, ctrl);
    CHECK((a.final_state.matrix() - b.final_state.matrix()).max_abs() < 1e-7);
    CHECK(a.final_state.check(1e-10, 1e-8, 1e-8).ok);
}

TEST_CASE("records land on the requested grid") {
    SystemParams p = SystemParams::single_color_defaults();
    p.ncut = 4;
    const ProductOperators o(p.ncut);
    const auto traj = evolve(make_problem(p), initial_state(p), 0.0, 0.1, {expectation_observable("sz", o.sz)},
                             StepControl{}, 0.01);
    REQUIRE(traj.times.size() == 11);
    CHECK(traj.times[10] == doctest::Approx(0.1));
    CHECK(traj.records[0][0].real() == doctest::Approx(-1.0));
}

TEST_CASE("unsafe fixed step is refused") {
    SystemParams p = SystemParams::single_color_defaults();
    p.ncut = 4;
    StepControl ctrl;
    ctrl.dt = 0.01;
    CHECK_THROWS_AS((void)evolve(make_problem(p, FrameChoice::drive), initial_state(p), 0.0, 0.1, {}, ctrl), DomainError);
}

TEST_CASE("oracle cost guard") {
    const std::size_t ncut = 7;
    CHECK_THROWS_AS((void)oracle_propagate(DensityMatrix(Operator::identity(2 * ncut)), Operator(2 * ncut), {}, 1.0),
                    DimensionError);
}

TEST_CASE("starting truncation grows with the thermal occupation") {
    SystemParams p = SystemParams::single_color_defaults();
    CHECK(start_ncut(p) == 6);
    p.n_th = 300.0;
    CHECK(start_ncut(p) > 6);
}

TEST_CASE("quasi-steady response at the single-colour dip") {
    const SystemParams p = SystemParams::single_color_defaults();
    const auto r = quasi_steady(p, p.delta);
    CHECK(r.converged);
    CHECK(r.commensurate_window);
    CHECK(r.amplitude.imag() == doctest::Approx(9e-3).epsilon(0.3));
    const auto f = fidelity_dark(r.state, p, r.t_end);
    CHECK(f.maximized >= f.raw);
    CHECK(f.maximized > 0.95);
}

}
