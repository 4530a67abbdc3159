// Acceptance run: executes the figure presets and checks criteria 1-12.
// Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lceit/device.hpp"
#include "lceit/emit.hpp"
#include "lceit/lindblad.hpp"
#include "lceit/model.hpp"
#include "lceit/presets.hpp"
#include "lceit/spectroscopy.hpp"

using namespace lceit;
using namespace lceit::cli;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// (x, Re r_num) for one sweep, skipping failed points.
struct Curve {
    std::vector<double> x;
    std::vector<double> re;
    std::vector<double> im;
};

Curve curve(const SweepTable& st, double x_offset) {
    Curve c;
    for (const auto& p : st.points) {
        if (!p.ok) continue;
        c.x.push_back(p.coords.front() - x_offset);
        c.re.push_back(p.r_num.real());
        c.im.push_back(p.r_num.imag());
    }
    return c;
}

std::vector<std::size_t> local_minima(const std::vector<double>& y) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] < y[i - 1] && y[i] < y[i + 1]) out.push_back(i);
    }
    return out;
}

std::size_t nearest(const std::vector<double>& x, double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (std::abs(x[i] - target) < std::abs(x[best] - target)) best = i;
    }
    return best;
}

// Linear crossing of f between samples i and j (f[i], f[j] of opposite sign).
double crossing(const std::vector<double>& x, const std::vector<double>& f, std::size_t i, std::size_t j) {
    return x[i] + (x[j] - x[i]) * f[i] / (f[i] - f[j]);
}

// Width of the region around i where f < 0; NaN if it reaches the grid edge.
double width_below(const std::vector<double>& x, const std::vector<double>& f, std::size_t i) {
    if (!(f[i] < 0.0)) return 0.0;
    std::size_t l = i;
    while (l > 0 && f[l - 1] < 0.0) --l;
    std::size_t r = i;
    while (r + 1 < f.size() && f[r + 1] < 0.0) ++r;
    if (l == 0 || r + 1 == f.size()) return std::nan("");
    return crossing(x, f, r, r + 1) - crossing(x, f, l - 1, l);
}

struct Runs {
    std::map<std::string, PresetResult> results;
    std::map<std::string, std::vector<OutputFile>> files;
};

const SweepTable& sweep_of(const PresetResult& r, const std::string& label) {
    for (const auto& [l, st] : r.sweeps) {
        if (l == label) return st;
    }
    throw std::runtime_error("no sweep '" + label + "' in " + r.name);
}

// --- criteria ---------------------------------------------------------------

Outcome c1(const PresetResult& r) {
    const auto& st = r.sweeps.front().second;
    const SystemParams& base = st.points.front().params;
    const Curve c = curve(st, base.omega_m - base.omega_g);
    const std::size_t mid = nearest(c.x, 0.0);
    double left = -1.0;
    double right = -1.0;
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        if (c.x[i] < 0.0) left = std::max(left, c.re[i]);
        if (c.x[i] > 0.0) right = std::max(right, c.re[i]);
    }
    const bool centre_ok = std::abs(c.x[mid]) < 1e-9 && c.re[mid] < 0.02;
    const bool sides_ok = left >= 0.6 && left <= 0.8 && right >= 0.6 && right <= 0.8;

    // Initial-state independence: the centre point again, started from |e,0>.
    const SpectrumPoint& centre = st.points[st.points.size() / 2];
    SteadyOptions o;
    o.start_excited = true;
    SystemParams p = centre.params;
    p.ncut = centre.ncut_used;
    const cplx r_exc = reflection(quasi_steady(p, p.delta, o).amplitude, p);
    const double init_diff = std::abs(r_exc - centre.r_num);
    const bool init_ok = init_diff < 1e-3;

    std::ostringstream d;
    d << "centre Re r=" << fmt("%.4g", c.re[mid]) << " (< 0.02), side maxima " << fmt("%.3f", left) << " / "
      << fmt("%.3f", right) << " (in [0.6, 0.8]), |r(e0) - r(g0)|=" << fmt("%.2g", init_diff) << " (< 1e-3)";
    return {centre_ok && sides_ok && init_ok && !c.x.empty(), d.str()};
}

Outcome c2(const PresetResult& r) {
    double dre = 0.0;
    double dim = 0.0;
    std::size_t n = 0;
    for (const auto& p : r.sweeps.front().second.points) {
        if (!p.ok || !p.r_analytic) return {false, "missing point or closed form"};
        dre = std::max(dre, std::abs(p.r_num.real() - p.r_analytic->real()));
        dim = std::max(dim, std::abs(p.r_num.imag() - p.r_analytic->imag()));
        ++n;
    }
    std::ostringstream d;
    d << "max |dRe|=" << fmt("%.4f", dre) << ", max |dIm|=" << fmt("%.4f", dim) << " over " << n
      << " points (< 0.05)";
    return {n > 0 && dre < 0.05 && dim < 0.05, d.str()};
}

Outcome c3(const PresetResult& r) {
    const double f = r.summary.at("f_ds_settled_mean").get<double>();
    const double dc = r.summary.at("im_sigma_minus_dc").get<double>();
    std::ostringstream d;
    d << "settled F_ds=" << fmt("%.4f", f) << " (>= 0.97; min over tail "
      << fmt("%.4f", r.summary.at("f_ds_settled_min").get<double>()) << "), Im<sigma_-(0)>=" << fmt("%.4g", dc)
      << " (9e-3 +- 30%)";
    return {f >= 0.97 && std::abs(dc - 9e-3) <= 0.3 * 9e-3 && r.all_converged, d.str()};
}

Outcome c4() {
    SystemParams p = SystemParams::single_color_defaults();
    p.n_rate = 0.0;
    const auto r0 = sideband_rates(p);
    bool ratio_ok = true;
    double worst = 0.0;
    for (int k = 0; k <= 40; ++k) {
        p.n_rate = -1.0 + 0.1 * k;
        const auto r = sideband_rates(p);
        const double q = std::abs(r.c3_plus / r.c1_plus);
        worst = std::max(worst, q);
        ratio_ok = ratio_ok && q < 0.05;
    }
    const bool ok = std::abs(r0.c1_plus - 0.8333) < 5e-5 && std::abs(r0.c1_minus - 0.7692) < 5e-5 &&
                    std::abs(r0.c3_plus) < 1e-12 && std::abs(r0.c3_minus) < 1e-12 && ratio_ok;
    std::ostringstream d;
    d << "C1+=" << fmt("%.5f", r0.c1_plus) << " C1-=" << fmt("%.5f", r0.c1_minus) << " C3+=" << fmt("%.2g", r0.c3_plus)
      << " C3-=" << fmt("%.2g", r0.c3_minus) << ", max C3+/C1+ on N in [-1,3]=" << fmt("%.4f", worst);
    return {ok, d.str()};
}

Outcome c5(const PresetResult& r) {
    const auto& st = r.sweeps.front().second;
    const SystemParams& base = st.points.front().params;
    const Curve c = curve(st, base.omega_m);
    const double step = c.x.size() > 1 ? c.x[1] - c.x[0] : 0.0;
    std::optional<std::size_t> lo;
    std::optional<std::size_t> hi;
    for (std::size_t i : local_minima(c.re)) {
        if (c.x[i] < 0.0 && (!lo || c.re[i] < c.re[*lo])) lo = i;
        if (c.x[i] > 0.0 && (!hi || c.re[i] < c.re[*hi])) hi = i;
    }
    if (!lo || !hi) return {false, "fewer than two dips found"};
    const double w = base.omega_g;
    const bool placed = std::abs(c.x[*lo] + w) <= step + 1e-9 && std::abs(c.x[*hi] - w) <= step + 1e-9;

    double dre = 0.0;
    double dim = 0.0;
    for (const auto& p : st.points) {
        if (!p.ok || !p.r_analytic) return {false, "missing point or closed form"};
        dre = std::max(dre, std::abs(p.r_num.real() - p.r_analytic->real()));
        dim = std::max(dim, std::abs(p.r_num.imag() - p.r_analytic->imag()));
    }
    const bool overlay = dre < 0.05 && dim < 0.05;

    // C1+ drives the dip at delta - omega_m = -omega_g; it must be the deeper one.
    const auto rates = sideband_rates(base);
    const bool asym = rates.c1_plus > rates.c1_minus && c.re[*lo] < c.re[*hi];

    std::ostringstream d;
    d << "dips at " << fmt("%+.2f", c.x[*lo]) << " / " << fmt("%+.2f", c.x[*hi]) << " MHz (Re "
      << fmt("%.4f", c.re[*lo]) << " / " << fmt("%.4f", c.re[*hi]) << "), overlay max |dRe|=" << fmt("%.4f", dre)
      << " |dIm|=" << fmt("%.4f", dim) << " (< 0.05), C1+=" << fmt("%.4f", rates.c1_plus)
      << " C1-=" << fmt("%.4f", rates.c1_minus);
    return {placed && overlay && asym, d.str()};
}

Outcome c6(const PresetResult& r) {
    const auto& st = r.sweeps.front().second;
    const Curve c = curve(st, 0.0);
    const auto minima = local_minima(c.re);
    const double tol = 0.5;  // MHz, "near"
    std::map<double, std::optional<std::size_t>> found;
    for (double target : {-4.5, -1.5, 1.5, 4.5}) {
        std::optional<std::size_t> best;
        for (std::size_t i : minima) {
            if (std::abs(c.x[i] - target) <= tol && (!best || c.re[i] < c.re[*best])) best = i;
        }
        found[target] = best;
    }
    std::ostringstream d;
    bool all = true;
    for (const auto& [t, i] : found) {
        d << fmt("%+.1f", t) << ": ";
        if (i) {
            d << "x=" << fmt("%+.2f", c.x[*i]) << " Re=" << fmt("%.4f", c.re[*i]) << "; ";
        } else {
            d << "none; ";
            all = false;
        }
    }
    bool shallower = false;
    if (all) {
        const double inner = std::max(c.re[*found[-1.5]], c.re[*found[1.5]]);
        shallower = c.re[*found[-4.5]] > inner && c.re[*found[4.5]] > inner;
    }
    d << "outer dips shallower: " << (shallower ? "yes" : "no");
    return {all && shallower, d.str()};
}

struct DipShape {
    double re_centre = 0.0;
    double depth = 0.0;
    double width = 0.0;
};

DipShape dip_shape(const SweepTable& st) {
    const SystemParams& base = st.points.front().params;
    const Curve c = curve(st, base.omega_m - base.omega_g);
    const std::size_t mid = nearest(c.x, 0.0);
    const double top = *std::max_element(c.re.begin(), c.re.end());
    DipShape s;
    s.re_centre = c.re[mid];
    s.depth = top - c.re[mid];
    const double half = c.re[mid] + 0.5 * s.depth;
    std::vector<double> f(c.re.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = c.re[i] - half;
    s.width = width_below(c.x, f, mid);
    return s;
}

Outcome c7(const PresetResult& r) {
    std::vector<DipShape> shapes;
    std::ostringstream d;
    for (const char* label : {"n_th=0", "n_th=10", "n_th=30"}) {
        const DipShape s = dip_shape(sweep_of(r, label));
        shapes.push_back(s);
        d << label << ": depth " << fmt("%.4f", s.depth) << " FWHM " << fmt("%.3f", s.width) << " MHz; ";
    }
    bool mono = true;
    for (std::size_t i = 1; i < shapes.size(); ++i) {
        mono = mono && shapes[i].depth < shapes[i - 1].depth && shapes[i].width > shapes[i - 1].width;
    }
    const double dev = std::abs(shapes[2].re_centre - shapes[0].re_centre) / std::abs(shapes[0].re_centre);
    d << "dip Re deviation n_th=30 vs 0: " << fmt("%.1f", 100.0 * dev) << "% (< 20%)";
    return {mono && dev < 0.2, d.str()};
}

Outcome c8(const PresetResult& r) {
    std::ostringstream d;
    std::vector<double> sep;
    std::vector<double> wlo;
    std::vector<double> whi;
    bool found = true;
    for (const char* label : {"omega_drv=5", "omega_drv=10", "omega_drv=15", "omega_drv=20"}) {
        const auto& st = sweep_of(r, label);
        const SystemParams& base = st.points.front().params;
        const Curve c = curve(st, base.omega_m);
        std::optional<std::size_t> lo;
        std::optional<std::size_t> hi;
        for (std::size_t i : local_minima(c.re)) {
            if (c.x[i] < 0.0 && (!lo || c.re[i] < c.re[*lo])) lo = i;
            if (c.x[i] > 0.0 && (!hi || c.re[i] < c.re[*hi])) hi = i;
        }
        if (!lo || !hi) {
            d << label << ": dips not resolved; ";
            found = false;
            continue;
        }
        // Half-depth relative to the bare qubit Lorentzian background.
        const double gf = base.gamma_f();
        std::vector<double> f(c.re.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double bg = base.gamma_d * 2.0 * gf / (4.0 * gf * gf + 4.0 * c.x[i] * c.x[i]);
            f[i] = c.re[i] - 0.5 * bg;
        }
        sep.push_back(c.x[*hi] - c.x[*lo]);
        wlo.push_back(width_below(c.x, f, *lo));
        whi.push_back(width_below(c.x, f, *hi));
        d << label << ": sep " << fmt("%.2f", sep.back()) << " widths " << fmt("%.3f", wlo.back()) << "/"
          << fmt("%.3f", whi.back()) << "; ";
    }
    bool ok = found;
    for (std::size_t i = 1; ok && i < sep.size(); ++i) {
        ok = sep[i] <= sep[i - 1] + 1e-9 && wlo[i] >= wlo[i - 1] && whi[i] >= whi[i - 1];
    }
    return {ok, d.str()};
}

Operator random_hermitian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Operator h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = {g(rng), g(rng)};
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

Outcome c9() {
    std::mt19937_64 rng(20240611);
    const std::size_t ncut = 3;
    const ProductOperators o(ncut);
    const Operator h = random_hermitian(2 * ncut, rng);
    const std::vector<CollapseChannel> all = {
        {o.sm, 0.7, "sigma_minus"}, {o.sz, 0.3, "sigma_z"}, {o.b, 0.4, "b"}, {o.bd, 0.15, "b_dag"}};
    std::normal_distribution<double> g;
    Operator a(2 * ncut);
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = {g(rng), g(rng)};
    Operator m = a * a.adjoint();
    m *= 1.0 / m.trace().real();
    const DensityMatrix rho0(m);
    StepControl ctrl;
    ctrl.method = Integrator::dopri45;
    ctrl.atol = 1e-13;
    ctrl.rtol = 1e-12;
    const auto traj = evolve(rho0, HarmonicHamiltonian(h), all, 5.0, {}, ctrl);
    const double frob = (traj.final_state.matrix() - oracle_propagate(rho0, h, all, 5.0).matrix()).frobenius_norm();

    SystemParams p;
    p.ncut = 4;
    const ProductOperators q(p.ncut);
    StepControl fixed;
    fixed.dt = 1e-4;
    const double gd = angular(p.gamma_d);
    const auto decay = evolve(excited_state(p), HarmonicHamiltonian(Operator(p.dim())), {{q.sm, gd, "sigma_minus"}},
                              1.0 / gd, {expectation_observable("pe", q.sp * q.sm)}, fixed);
    const double e1 = std::abs(decay.records[0].back().real() - std::exp(-gd * decay.times.back()));

    const double gp = angular(p.gamma_phi);
    const double gf = gd / 2.0 + 2.0 * gp;
    const double s = 1.0 / std::sqrt(2.0);
    const Ket plus = kron(Ket(std::vector<cplx>{s, s}), Ket::basis(p.ncut, 0));
    const auto coh = evolve(DensityMatrix::pure(plus), HarmonicHamiltonian(Operator(p.dim())),
                            {{q.sm, gd, "sigma_minus"}, {q.sz, gp, "sigma_z"}}, std::round(1.0 / gf / fixed.dt) * fixed.dt,
                            {expectation_observable("sm", q.sm)}, fixed);
    const double cf = std::abs(std::abs(coh.records[0].back()) - 0.5 * std::exp(-gf * coh.times.back()));

    std::ostringstream d;
    d << "oracle Frobenius " << fmt("%.2g", frob) << " (< 1e-8), exp(-1) decay error " << fmt("%.2g", e1)
      << ", coherence error " << fmt("%.2g", cf) << " (< 1e-6)";
    return {frob < 1e-8 && e1 < 1e-6 && cf < 1e-6, d.str()};
}

Outcome c10() {
    using namespace device;
    const auto rt = transmon_sensitivity(2.0, 70.0, std::numbers::pi / 3.0);
    const double x0 = zero_point(4e-21, 100.0);
    DeviceParams p;
    p.d0 = 0.0;
    double worst = 0.0;
    for (int k = 1; k < 100; ++k) {
        p.phi_minus = 0.5 * std::numbers::pi * k / 100.0;
        const double closed =
            -std::numbers::pi * p.ej_sum * std::sin(p.phi_minus) * p.b_field * p.xi * p.length / constants::kFluxQuantum;
        worst = std::max(worst, std::abs(flux_slope(p) - closed) / std::abs(closed));
    }
    std::ostringstream d;
    d << "R_t=" << fmt("%.5f", rt.per_mphi0) << " GHz/mPhi0 (0.064 +- 2%), x0=" << fmt("%.4g", x0)
      << " m (4.58e-12 +- 1%), flux_slope rel. error " << fmt("%.2g", worst);
    return {std::abs(rt.per_mphi0 - 0.064) <= 0.02 * 0.064 && std::abs(x0 - 4.58e-12) <= 0.01 * 4.58e-12 &&
                worst < 1e-13,
            d.str()};
}

Outcome c11() {
    const SystemParams p = SystemParams::single_color_defaults();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    double eta_max = 0.0;
    double beta_max = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double t = u(rng);
        eta_max = std::max(eta_max, std::abs(eta(p, t)));
        beta_max = std::max(beta_max, std::abs(beta(p, t)));
    }
    const double bound = beta_bound(p);
    std::ostringstream d;
    d << "max |eta|=" << fmt("%.2g", eta_max) << " (< 1e-10), max |beta|=" << fmt("%.5f", beta_max)
      << " <= bound " << fmt("%.5f", bound) << " (0.0802)";
    return {eta_max < 1e-10 && beta_max <= bound * (1.0 + 1e-12) && std::abs(bound - 0.0802) < 5e-5, d.str()};
}

Outcome c12(const Runs& runs, const PresetOptions& opts) {
    std::ostringstream d;
    bool ok = true;
    for (const auto& name : preset_names()) {
        std::cerr << "[acceptance] re-running " << name << std::endl;
        const auto again = preset_files(run_preset(name, opts), false, true, false);
        const auto& first = runs.files.at(name);
        std::size_t n = 0;
        bool same = first.size() == again.size();
        for (std::size_t i = 0; same && i < first.size(); ++i) {
            if (first[i].name.ends_with(".csv")) {
                ++n;
                same = first[i].name == again[i].name && first[i].bytes == again[i].bytes;
            }
        }
        d << name << ":" << (same ? "identical" : "DIFFERENT") << "(" << n << " csv) ";
        ok = ok && same && n > 0;
    }
    return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance run over the figure presets"};
    std::string out = "acceptance_out";
    std::size_t threads = 1;
    app.add_option("--out", out, "directory for the preset outputs");
    app.add_option("--threads", threads, "sweep workers")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    PresetOptions opts;
    opts.threads = threads;

    Runs runs;
    for (const auto& name : preset_names()) {
        std::cerr << "[acceptance] running " << name << std::endl;
        const auto t0 = std::chrono::steady_clock::now();
        PresetResult r = run_preset(name, opts);
        auto files = preset_files(r, false, true, false);
        write_files(files, out);
        std::cerr << "[acceptance] " << name << " done in "
                  << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s" << std::endl;
        runs.files[name] = std::move(files);
        runs.results[name] = std::move(r);
    }

    std::vector<Outcome> outcomes;
    auto guarded = [](auto&& fn) {
        try {
            return fn();
        } catch (const std::exception& e) {
            return Outcome{false, std::string("exception: ") + e.what()};
        }
    };
    outcomes.push_back(guarded([&] { return c1(runs.results.at("fig4a")); }));
    outcomes.push_back(guarded([&] { return c2(runs.results.at("fig4a")); }));
    outcomes.push_back(guarded([&] { return c3(runs.results.at("fig4b")); }));
    outcomes.push_back(guarded([] { return c4(); }));
    outcomes.push_back(guarded([&] { return c5(runs.results.at("fig7")); }));
    outcomes.push_back(guarded([&] { return c6(runs.results.at("fig6b")); }));
    outcomes.push_back(guarded([&] { return c7(runs.results.at("fig5")); }));
    outcomes.push_back(guarded([&] { return c8(runs.results.at("fig8")); }));
    outcomes.push_back(guarded([] { return c9(); }));
    outcomes.push_back(guarded([] { return c10(); }));
    outcomes.push_back(guarded([] { return c11(); }));
    outcomes.push_back(guarded([&] { return c12(runs, opts); }));

    std::size_t failed = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        std::cout << "criterion " << (i + 1) << ": " << (outcomes[i].pass ? "PASS" : "FAIL") << "  "
                  << outcomes[i].detail << "\n";
        if (!outcomes[i].pass) ++failed;
    }
    std::cout << (outcomes.size() - failed) << "/" << outcomes.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
