#include "doctest.h"

#include <cmath>

#include "lceit/errors.hpp"
#include "lceit/model.hpp"

using namespace lceit;

TEST_SUITE("model") {

TEST_CASE("first-order sideband rates at the single-colour operating point") {
    SystemParams p;
    p.n_rate = 0.0;
    const auto r = sideband_rates(p);
    CHECK(r.c1_plus == doctest::Approx(10.0 * 8.0 / 96.0).epsilon(1e-14));
    CHECK(r.c1_minus == doctest::Approx(10.0 * 8.0 / 104.0).epsilon(1e-14));
    CHECK(std::abs(r.c1_plus - 0.8333) < 5e-5);
    CHECK(std::abs(r.c1_minus - 0.7692) < 5e-5);
    CHECK(r.c3_plus == 0.0);
    CHECK(r.c3_minus == 0.0);
}

TEST_CASE("third-order rates stay small for low phonon numbers") {
    SystemParams p;
    for (double n = -1.0; n <= 3.0; n += 0.25) {
        p.n_rate = n;
        const auto r = sideband_rates(p);
        CHECK(std::abs(r.c3_plus) / r.c1_plus < 0.05);
        CHECK(std::abs(r.c3_minus) / r.c1_minus < 0.05);
    }
}

TEST_CASE("polaron displacement removes the longitudinal term") {
    const SystemParams p;
    double max_beta = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double t = 0.0173 * k;
        CHECK(std::abs(eta(p, t)) < 1e-10);
        max_beta = std::max(max_beta, std::abs(beta(p, t)));
    }
    CHECK(beta_bound(p) == doctest::Approx(0.0802).epsilon(1e-3));
    CHECK(max_beta <= beta_bound(p) * (1.0 + 1e-12));
}

TEST_CASE("beta derivative agrees with a finite difference") {
    const SystemParams p;
    const double t = 0.123;
    const double h = 1e-6;
    const cplx fd = (beta(p, t + h) - beta(p, t - h)) / (2.0 * h);
    CHECK(std::abs(fd - beta_derivative(p, t)) < 1e-6 * std::abs(beta_derivative(p, t)) + 1e-9);
}

TEST_CASE("Stark relation and its inverse") {
    const double w = 10.0;
    for (double d0 : {0.0, 3.0, 47.5, 91.2}) {
        CHECK(delta0_for(stark_detuning(d0, w), w) == doctest::Approx(d0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(delta0_for(19.0, w), DomainError);
    const SystemParams p = with_sideband_detuning(SystemParams{}, -2.5);
    CHECK(p.sideband_detuning() == doctest::Approx(-2.5).epsilon(1e-12));
    CHECK(stark_shift(p, Branch::plus) > 0.0);
}

TEST_CASE("single-colour defaults") {
    const auto p = SystemParams::single_color_defaults();
    CHECK(p.sideband_detuning() == doctest::Approx(-p.omega_g).epsilon(1e-12));
    CHECK(p.delta == p.omega_m - p.omega_g);
    CHECK(p.gamma_f() == doctest::Approx(2.0));
}

TEST_CASE("validation") {
    SystemParams p;
    p.omega_g = p.omega_m;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("pole"), DomainError);
    p = SystemParams{};
    p.kappa = -1.0;
    CHECK_THROWS_AS((void)p.validate(), DomainError);
    p = SystemParams{};
    p.ncut = 3;
    CHECK_THROWS_AS((void)p.validate(), DimensionError);
    p = SystemParams{};
    p.g0 = 30.0;
    CHECK(!p.warnings().empty());
    CHECK(SystemParams{}.warnings().empty());
}

TEST_CASE("drive-frame Hamiltonian is Hermitian with the expected dimension") {
    SystemParams p = SystemParams::single_color_defaults();
    p.ncut = 5;
    const Operator h = hamiltonian_drive_frame(p, 0.31);
    CHECK(h.dim() == 10);
    CHECK(h.is_hermitian(1e-12));
}

TEST_CASE("dark state is annihilated by the effective Hamiltonian") {
    SystemParams p = SystemParams::single_color_defaults();
    p.ncut = 12;
    const Ket ds = dark_state(p);
    const Ket hds = effective_hamiltonian_single(p, Branch::plus) * ds;
    // The remainder comes from the coherent-state truncation only.
    CHECK(hds.norm() < 1e-6);
    CHECK(dark_state_lambda(p) == doctest::Approx(p.omega_pr / sideband_rates(p).c1_plus));
    SystemParams off = p;
    off.omega_drv = 0.0;
    CHECK_THROWS_AS((void)dark_state_lambda(off), DomainError);
}

TEST_CASE("collapse channels") {
    SystemParams p;
    p.n_th = 2.0;
    const auto c = collapse_ops(p);
    REQUIRE(c.size() == 4);
    CHECK(c[0].rate == doctest::Approx(angular(p.gamma_d)));
    CHECK(c[1].rate == doctest::Approx(angular(p.gamma_phi)));
    CHECK(c[2].rate == doctest::Approx(angular(3.0 * p.kappa)));
    CHECK(c[3].rate == doctest::Approx(angular(2.0 * p.kappa)));
}

TEST_CASE("two-colour effective Hamiltonian carries both sidebands") {
    SystemParams p;
    p.ncut = 4;
    const auto h = twocolor_hamiltonian(p);
    CHECK(h.at(0.2).is_hermitian(1e-12));
    CHECK(h.max_frequency() == doctest::Approx(angular(std::abs(p.omega_m - p.delta))));
}

}
