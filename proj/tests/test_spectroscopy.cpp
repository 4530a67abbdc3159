#include "doctest.h"

#include <cmath>

#include "lceit/errors.hpp"
#include "lceit/spectroscopy.hpp"

using namespace lceit;

TEST_SUITE("spectroscopy") {

TEST_CASE("reflection from the dipole component") {
    SystemParams p;
    const cplx s{0.01, -0.02};
    const cplx r = reflection(s, p);
    const cplx expect = -cplx{0.0, 1.0} * p.gamma_d * s / (2.0 * p.omega_pr);
    CHECK(std::abs(r - expect) < 1e-15);
    p.omega_pr = 0.0;
    CHECK_THROWS_AS((void)reflection(s, p), DomainError);
}

TEST_CASE("single-colour closed form") {
    const SystemParams p = SystemParams::single_color_defaults();
    const double c1 = sideband_rates(p).c1_plus;
    const cplx centre = r_eff_single(p, p.omega_m - p.omega_g, Branch::plus);
    CHECK(centre.imag() == doctest::Approx(0.0));
    CHECK(centre.real() == doctest::Approx(p.gamma_d / (2.0 * p.gamma_f() + 4.0 * c1 * c1 / p.kappa)));
    CHECK(centre.real() < 0.01);

    SystemParams bare = p;
    bare.g0 = 0.0;
    CHECK(r_eff_single(bare, bare.omega_m - bare.omega_g).real() == doctest::Approx(0.75));

    SystemParams wide = p;
    wide.kappa = 1e12;
    const double d = p.omega_m - p.omega_g + 1.3;
    const cplx lorentz = p.gamma_d / (2.0 * p.gamma_f() - 2.0 * cplx{0.0, 1.0} * 1.3);
    CHECK(std::abs(r_eff_single(wide, d) - lorentz) < 1e-9);

    const cplx minus_centre = r_eff_single(p, p.omega_m + p.omega_g, Branch::minus);
    const double cm = sideband_rates(p).c1_minus;
    CHECK(minus_centre.real() == doctest::Approx(p.gamma_d / (2.0 * p.gamma_f() + 4.0 * cm * cm / p.kappa)));
}

TEST_CASE("two-colour closed forms") {
    SystemParams p;
    p = with_sideband_detuning(p, 0.0);
    // The mechanical pole of each branch sits omega_g away from the qubit line.
    CHECK(r_eff_pm(p, p.omega_m + p.omega_g, Branch::plus).real() < 0.05);
    CHECK(r_eff_pm(p, p.omega_m - p.omega_g, Branch::minus).real() < 0.05);
    CHECK(r_eff_pm(p, p.omega_m, Branch::plus).real() > 0.5);

    const double d = p.omega_m + 0.7;
    CHECK(std::abs(r_c(p, d) - 0.5 * (r_eff_pm(p, d, Branch::plus) + r_eff_pm(p, d, Branch::minus))) < 1e-15);

    // Local minima of Re r_c near omega_m +- omega_g.
    std::vector<double> xs;
    std::vector<double> re;
    for (int k = -2000; k <= 2000; ++k) {
        xs.push_back(p.omega_m + 0.005 * k);
        re.push_back(r_c(p, xs.back()).real());
    }
    std::vector<double> minima;
    for (std::size_t i = 1; i + 1 < re.size(); ++i) {
        if (re[i] < re[i - 1] && re[i] < re[i + 1]) minima.push_back(xs[i] - p.omega_m);
    }
    REQUIRE(minima.size() == 2);
    CHECK(minima[0] == doctest::Approx(-p.omega_g).epsilon(0.02));
    CHECK(minima[1] == doctest::Approx(p.omega_g).epsilon(0.02));
}

TEST_CASE("omega_g = 0 reductions") {
    SystemParams p;
    p.omega_g = 0.0;
    p = with_sideband_detuning(p, 0.0);
    const auto rates = sideband_rates(p);
    CHECK(rates.c1_plus == doctest::Approx(rates.c1_minus));
    for (double x : {-3.0, -0.4, 0.0, 0.25, 2.0}) {
        const double d = p.omega_m + x;
        CHECK(std::abs(r_eff_pm(p, d, Branch::plus) - r_eff_single(p, d, Branch::plus)) < 1e-12);
        CHECK(std::abs(r_c(p, d) - r_eff_pm(p, d, Branch::plus)) < 1e-9);
    }
}

TEST_CASE("axis values") {
    const Axis a{"delta", 1.0, 2.0, 5};
    const auto v = a.values();
    REQUIRE(v.size() == 5);
    CHECK(v[2] == doctest::Approx(1.5));
    CHECK(v.back() == 2.0);
    CHECK(Axis{"delta", 3.0, 9.0, 1}.values() == std::vector<double>{3.0});
}

TEST_CASE("grid resolution order and probe modes") {
    SweepSpec s;
    s.base = SystemParams::single_color_defaults();
    s.axes = {{"omega_g", 1.0, 2.0, 2}, {"delta_s", -1.0, 1.0, 3}};
    s.probe = ProbeMode::resonant;
    s.probe_offset = 0.5;
    const auto grid = resolve_grid(s);
    REQUIRE(grid.size() == 6);
    CHECK(grid[1].coords == std::vector<double>{1.0, 0.0});
    CHECK(grid[3].coords == std::vector<double>{2.0, -1.0});
    for (const auto& g : grid) {
        CHECK(g.error.empty());
        CHECK(g.params.omega_g == g.coords[0]);
        CHECK(g.params.sideband_detuning() == doctest::Approx(g.coords[1]));
        CHECK(g.params.delta == doctest::Approx(g.params.omega_m + g.coords[1] + 0.5));
    }
    CHECK(grid[0].analytic == AnalyticKind::single_plus);
    CHECK(grid[1].analytic == AnalyticKind::two_color);
    CHECK(grid[2].analytic == AnalyticKind::single_minus);
    CHECK(grid[4].analytic == AnalyticKind::two_color);
}

TEST_CASE("grid validation") {
    SweepSpec s;
    s.axes = {{"bogus", 0.0, 1.0, 2}};
    CHECK_THROWS_AS((void)resolve_grid(s), DomainError);
    s.axes = {{"delta", 0.0, 1.0, 1}};
    CHECK_THROWS_AS((void)resolve_grid(s), DomainError);
    s.axes = {{"delta", 0.0, 1.0, 2}};
    s.probe = ProbeMode::resonant;
    CHECK_THROWS_AS((void)resolve_grid(s), DomainError);
}

TEST_CASE("unreachable drive detuning is recorded per point") {
    SweepSpec s;
    s.base = SystemParams::single_color_defaults();
    s.axes = {{"delta_s", -95.0, -94.0, 2}};
    const auto grid = resolve_grid(s);
    REQUIRE(grid.size() == 2);
    CHECK_FALSE(grid[0].error.empty());

    SweepOptions o;
    o.truncation.enabled = false;
    const auto t = sweep(s, o);
    REQUIRE(t.points.size() == 2);
    CHECK_FALSE(t.points[0].ok);
    CHECK_FALSE(t.points[0].error.empty());
    CHECK_FALSE(t.all_converged());
}

TEST_CASE("one-point sweep reproduces the direct steady-state run") {
    SweepSpec s;
    s.base = SystemParams::single_color_defaults();
    SweepOptions o;
    o.truncation.enabled = false;
    const auto t = sweep(s, o);
    REQUIRE(t.points.size() == 1);
    const auto& pt = t.points[0];
    REQUIRE(pt.ok);
    const auto direct = quasi_steady(s.base, s.base.delta);
    CHECK(pt.sigma_component == direct.amplitude);
    CHECK(pt.r_num == reflection(direct.amplitude, s.base));
    REQUIRE(pt.r_analytic.has_value());
    MESSAGE("r_num = " << pt.r_num << ", r_eff = " << *pt.r_analytic);
    CHECK(pt.converged);
}

TEST_CASE("worker count does not change results") {
    SweepSpec s;
    s.base = SystemParams::single_color_defaults();
    s.axes = {{"delta", s.base.delta - 2.0, s.base.delta + 2.0, 3}};
    SweepOptions o;
    o.truncation.enabled = false;
    const auto one = sweep(s, o);
    s.threads = 2;
    const auto two = sweep(s, o);
    REQUIRE(one.points.size() == two.points.size());
    for (std::size_t i = 0; i < one.points.size(); ++i) {
        CHECK(one.points[i].r_num == two.points[i].r_num);
        CHECK(one.points[i].coords == two.points[i].coords);
    }
}

}
