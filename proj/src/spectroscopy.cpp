#include "lceit/spectroscopy.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "lceit/errors.hpp"

namespace lceit {

namespace {

const cplx kI{0.0, 1.0};

cplx lorentz_eit(const SystemParams& p, double x_qubit, double c1, double x_mech) {
    return p.gamma_d / (2.0 * p.gamma_f() - 2.0 * kI * x_qubit + 4.0 * c1 * c1 / (p.kappa - 2.0 * kI * x_mech));
}

double* param_field(SystemParams& p, const std::string& name) {
    if (name == "omega_m") return &p.omega_m;
    if (name == "delta0") return &p.delta0;
    if (name == "g0") return &p.g0;
    if (name == "omega_g") return &p.omega_g;
    if (name == "omega_drv") return &p.omega_drv;
    if (name == "omega_pr") return &p.omega_pr;
    if (name == "delta") return &p.delta;
    if (name == "gamma_d") return &p.gamma_d;
    if (name == "gamma_phi") return &p.gamma_phi;
    if (name == "kappa") return &p.kappa;
    if (name == "n_th") return &p.n_th;
    if (name == "n_rate") return &p.n_rate;
    return nullptr;
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b)); }

SpectrumPoint run_point(const ResolvedPoint& rp, const SweepOptions& opts, const TruncationPolicy& policy) {
    SpectrumPoint sp;
    sp.coords = rp.coords;
    sp.params = rp.params;
    sp.delta_s = rp.delta_s;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (!rp.error.empty()) throw DomainError(rp.error);
        const auto res = quasi_steady_truncated(rp.params, rp.params.delta, opts.steady, policy);
        sp.params.ncut = res.ncut;
        sp.sigma_component = res.result.amplitude;
        sp.r_num = reflection(res.result.amplitude, rp.params);
        sp.r_analytic = analytic_reflection(rp);
        sp.converged = res.result.converged;
        sp.truncation_converged = res.truncation_converged;
        sp.ncut_used = res.ncut;
        sp.windows = res.result.windows;
        sp.ok = true;
    } catch (const std::exception& e) {
        sp.ok = false;
        sp.error = e.what();
    }
    sp.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sp;
}

}  // namespace

cplx reflection(cplx sigma_minus_component, const SystemParams& p) {
    if (p.omega_pr == 0.0) throw DomainError("reflection: Omega_pr = 0, the probe response is undefined");
    return -kI * p.gamma_d * sigma_minus_component / (2.0 * p.omega_pr);
}

cplx r_eff_single(const SystemParams& p, double delta, Branch branch) {
    const auto rates = sideband_rates(p);
    const bool plus = branch == Branch::plus;
    const double x = delta - p.omega_m + (plus ? p.omega_g : -p.omega_g);
    return lorentz_eit(p, x, plus ? rates.c1_plus : rates.c1_minus, x);
}

cplx r_eff_pm(const SystemParams& p, double delta, Branch branch) {
    const auto rates = sideband_rates(p);
    const bool plus = branch == Branch::plus;
    const double x = delta - p.omega_m;
    const double xm = x + (plus ? -p.omega_g : p.omega_g);
    return lorentz_eit(p, x, plus ? rates.c1_plus : rates.c1_minus, xm);
}

cplx r_c(const SystemParams& p, double delta) {
    return 0.5 * (r_eff_pm(p, delta, Branch::plus) + r_eff_pm(p, delta, Branch::minus));
}

std::vector<double> Axis::values() const {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = start;
        return v;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) v[k] = k + 1 == count ? stop : start + static_cast<double>(k) * step;
    return v;
}

const std::vector<std::string>& sweep_axis_names() {
    static const std::vector<std::string> names = {"omega_m",   "delta0", "g0",    "omega_g", "omega_drv",
                                                   "omega_pr",  "delta",  "gamma_d", "gamma_phi", "kappa",
                                                   "n_th",      "n_rate", "delta_s", "probe_offset"};
    return names;
}

void SweepSpec::validate() const {
    const auto& names = sweep_axis_names();
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto& a = axes[i];
        if (std::find(names.begin(), names.end(), a.name) == names.end()) {
            throw DomainError("sweep axis '" + a.name + "' is not a parameter name");
        }
        if (a.count < 2) throw DomainError("sweep axis '" + a.name + "' needs at least 2 points");
        if (!std::isfinite(a.start) || !std::isfinite(a.stop)) throw DomainError("sweep axis bounds must be finite");
        for (std::size_t j = 0; j < i; ++j) {
            if (axes[j].name == a.name) throw DomainError("duplicate sweep axis '" + a.name + "'");
        }
        if (a.name == "delta0" && (delta_s || std::any_of(axes.begin(), axes.end(), [](const Axis& x) {
                                       return x.name == "delta_s";
                                   }))) {
            throw DomainError("delta0 and delta_s cannot both be set; delta0 is derived from delta_s");
        }
        if (a.name == "delta" && probe == ProbeMode::resonant) {
            throw DomainError("a delta axis requires probe = fixed");
        }
        if (a.name == "probe_offset" && probe != ProbeMode::resonant) {
            throw DomainError("a probe_offset axis requires probe = resonant");
        }
    }
    if (threads == 0) throw DomainError("threads must be >= 1");
    base.validate();
}

std::size_t SweepSpec::size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
}

std::vector<ResolvedPoint> resolve_grid(const SweepSpec& spec) {
    spec.validate();
    std::vector<std::vector<double>> values;
    for (const auto& a : spec.axes) values.push_back(a.values());
    const std::size_t total = spec.size();
    std::vector<ResolvedPoint> out;
    out.reserve(total);
    std::vector<std::size_t> idx(spec.axes.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t d = spec.axes.size(); d-- > 0;) {
            idx[d] = rem % spec.axes[d].count;
            rem /= spec.axes[d].count;
        }
        ResolvedPoint rp;
        rp.params = spec.base;
        std::optional<double> delta_s = spec.delta_s;
        double offset = spec.probe_offset;
        for (std::size_t d = 0; d < spec.axes.size(); ++d) {
            const double v = values[d][idx[d]];
            rp.coords.push_back(v);
            const auto& name = spec.axes[d].name;
            if (name == "delta_s") {
                delta_s = v;
            } else if (name == "probe_offset") {
                offset = v;
            } else {
                *param_field(rp.params, name) = v;
            }
        }
        try {
            if (delta_s) {
                rp.params = with_sideband_detuning(rp.params, *delta_s);
                rp.delta_s = *delta_s;
            } else {
                rp.delta_s = rp.params.sideband_detuning();
            }
            rp.params.validate();
        } catch (const std::exception& e) {
            rp.error = e.what();
            if (delta_s) rp.delta_s = *delta_s;
        }
        if (spec.probe == ProbeMode::resonant) rp.params.delta = rp.params.omega_m + rp.delta_s + offset;
        if (same(rp.delta_s, -rp.params.omega_g)) {
            rp.analytic = AnalyticKind::single_plus;
        } else if (same(rp.delta_s, rp.params.omega_g)) {
            rp.analytic = AnalyticKind::single_minus;
        } else if (std::abs(rp.delta_s) <= 1e-12) {
            rp.analytic = AnalyticKind::two_color;
        }
        if (rp.params.omega_g == 0.0 && rp.analytic == AnalyticKind::single_plus) rp.analytic = AnalyticKind::two_color;
        out.push_back(std::move(rp));
    }
    return out;
}

std::optional<cplx> analytic_reflection(const ResolvedPoint& point) {
    switch (point.analytic) {
        case AnalyticKind::single_plus: return r_eff_single(point.params, point.params.delta, Branch::plus);
        case AnalyticKind::single_minus: return r_eff_single(point.params, point.params.delta, Branch::minus);
        case AnalyticKind::two_color: return r_c(point.params, point.params.delta);
        case AnalyticKind::none: break;
    }
    return std::nullopt;
}

bool SweepTable::all_converged() const {
    return std::all_of(points.begin(), points.end(),
                       [](const SpectrumPoint& p) { return p.ok && p.converged && p.truncation_converged; });
}

SweepTable sweep(const SweepSpec& spec, const SweepOptions& opts) {
    const auto grid = resolve_grid(spec);
    SweepTable table;
    for (const auto& a : spec.axes) table.axis_names.push_back(a.name);
    table.points.resize(grid.size());

    TruncationPolicy policy = opts.truncation;
    bool shared_truncation_ok = true;
    if (opts.check == TruncationCheck::representative && policy.enabled && !grid.empty()) {
        const auto& rep = grid[grid.size() / 2];
        policy.enabled = false;
        shared_truncation_ok = false;
        if (rep.error.empty()) {
            try {
                const auto res = quasi_steady_truncated(rep.params, rep.params.delta, opts.steady, opts.truncation);
                shared_truncation_ok = res.truncation_converged;
                policy.start_ncut = res.ncut;
            } catch (const std::exception&) {
                // Points still run at the base cutoff; their rows carry truncation_converged = false.
            }
        }
    }
    auto resolved = grid;
    if (opts.check != TruncationCheck::every_point) {
        for (auto& g : resolved) {
            if (policy.start_ncut > 0) g.params.ncut = policy.start_ncut;
        }
        policy.enabled = false;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= resolved.size()) return;
            SpectrumPoint sp = run_point(resolved[i], opts, policy);
            if (opts.check != TruncationCheck::every_point) sp.truncation_converged = shared_truncation_ok;
            table.points[i] = std::move(sp);
            const std::size_t d = done.fetch_add(1) + 1;
            if (opts.progress) {
                const std::lock_guard<std::mutex> lock(progress_mutex);
                opts.progress(d, resolved.size());
            }
        }
    };
    const std::size_t n_threads = std::min(spec.threads, std::max<std::size_t>(1, resolved.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return table;
}

}  // namespace lceit
