#include "lceit/lindblad.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "lceit/errors.hpp"
#include "lceit/fourier.hpp"
#include "lceit/simd/kernels.hpp"

namespace lceit {

namespace {

const cplx kI{0.0, 1.0};

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
};
constexpr double kE[7] = {71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0,
                          -1.0 / 40.0};

void require_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

double spectral_bound(const HarmonicHamiltonian& h) {
    // Max absolute row sum of |static| + sum_k |term_k|.
    const std::size_t n = h.dim();
    std::vector<double> rows(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) rows[r] += std::abs(h.static_part()(r, c));
    }
    for (const auto& term : h.terms()) {
        for (const auto& e : term.entries) rows[e.row] += std::abs(term.amplitude * e.value);
    }
    return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

double automatic_step(const HarmonicHamiltonian& h) {
    double dt = 1e-3;
    if (h.max_frequency() > 0.0) dt = std::min(dt, kTwoPi / h.max_frequency() / 40.0);
    const double bound = spectral_bound(h);
    if (bound > 0.0) dt = std::min(dt, 0.25 / bound);
    return dt;
}

bool all_finite(const Operator& m) {
    for (const auto& v : m.entries()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

}  // namespace

Operator lindblad_rhs(const Operator& h, const std::vector<CollapseChannel>& collapses, const Operator& rho) {
    require_dim(h.dim(), rho.dim(), "lindblad_rhs");
    Operator out = (h * rho - rho * h) * (-kI);
    for (const auto& c : collapses) {
        require_dim(c.op.dim(), rho.dim(), "lindblad_rhs collapse");
        if (c.rate == 0.0) continue;
        const Operator ad = c.op.adjoint();
        const Operator ada = ad * c.op;
        Operator d = c.op * rho * ad - 0.5 * (ada * rho) - 0.5 * (rho * ada);
        out += c.rate * d;
    }
    return out;
}

Operator lindblad_rhs(const Operator& h, const std::vector<CollapseChannel>& collapses, const DensityMatrix& rho) {
    return lindblad_rhs(h, collapses, rho.matrix());
}

LindbladGenerator::LindbladGenerator(const HarmonicHamiltonian& h, const std::vector<CollapseChannel>& collapses)
    : h_(&h), dim_(h.dim()), heff_static_(h.static_part()), heff_(h.dim()), x_(h.dim()), tmp_(h.dim()) {
    for (const auto& c : collapses) {
        require_dim(c.op.dim(), dim_, "LindbladGenerator collapse");
        if (c.rate < 0.0) throw DomainError("collapse rate must be non-negative: " + c.name);
        if (c.rate == 0.0) continue;
        const Operator ad = c.op.adjoint();
        heff_static_ -= (ad * c.op) * cplx(0.0, 0.5 * c.rate);
        Jump j{c.rate, nonzero_entries(c.op), false, c.op, ad};
        const double nnz = static_cast<double>(j.entries.size());
        const double n = static_cast<double>(dim_);
        j.dense = nnz * nnz > n * n * n;
        jumps_.push_back(std::move(j));
    }
}

void LindbladGenerator::operator()(double t, const Operator& rho, Operator& drho) {
    ++evaluations_;
    const std::size_t n = dim_;
    const auto& k = simd::active_kernels();
    if (!cache_valid_ || t != cached_t_) {
        std::copy(heff_static_.data(), heff_static_.data() + heff_static_.size(), heff_.data());
        h_->accumulate_terms(t, heff_);
        cached_t_ = t;
        cache_valid_ = true;
    }
    if (drho.dim() != n) drho = Operator(n);

    // drho = -i H_eff rho + i (H_eff rho)^dag
    k.gemm(n, heff_.data(), rho.data(), x_.data());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx a = x_(i, j);
            const cplx b = x_(j, i);
            drho(i, j) = cplx(a.imag() + b.imag(), b.real() - a.real());
        }
    }

    // + sum rate A rho A^dag on the upper triangle, then mirrored.
    for (const auto& jump : jumps_) {
        if (jump.dense) {
            k.gemm(n, jump.op.data(), rho.data(), tmp_.data());
            k.gemm(n, tmp_.data(), jump.op_dag.data(), x_.data());
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i; j < n; ++j) drho(i, j) += jump.rate * x_(i, j);
            }
            continue;
        }
        for (const auto& e1 : jump.entries) {
            const cplx s = jump.rate * e1.value;
            for (const auto& e2 : jump.entries) {
                if (e2.row < e1.row) continue;
                drho(e1.row, e2.row) += s * rho(e1.col, e2.col) * std::conj(e2.value);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        drho(i, i) = cplx(drho(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) drho(j, i) = std::conj(drho(i, j));
    }
}

Problem make_problem(const SystemParams& p, FrameChoice frame) {
    HarmonicHamiltonian h = drive_frame_hamiltonian(p);
    if (frame == FrameChoice::drive) return {std::move(h), collapse_ops(p), InteractionFrame{}};
    auto energies = free_energies(p);
    HarmonicHamiltonian hi = h.in_frame(energies);
    return {std::move(hi), collapse_ops(p), InteractionFrame(std::move(energies))};
}

double default_step(const SystemParams& p, const HarmonicHamiltonian& h) {
    double shortest = 1.0 / p.omega_m;
    if (p.delta != 0.0) shortest = std::min(shortest, 1.0 / std::abs(p.delta));
    double dt = shortest / 40.0;
    if (h.max_frequency() > 0.0) dt = std::min(dt, kTwoPi / h.max_frequency() / 40.0);
    return dt;
}

Observable expectation_observable(std::string name, const Operator& op) {
    Operator opt = op.transpose();
    return {std::move(name), [opt = std::move(opt)](double, const Operator& rho) {
                require_dim(rho.dim(), opt.dim(), "expectation_observable");
                return simd::active_kernels().dotu(rho.size(), rho.data(), opt.data());
            }};
}

Propagator::Propagator(const Problem& problem, const DensityMatrix& rho0, double t0, const StepControl& ctrl)
    : problem_(&problem),
      gen_(problem.hamiltonian, problem.collapses),
      ctrl_(ctrl),
      rho_(problem.frame.from_lab(rho0.matrix(), t0)),
      t_(t0),
      dt_(ctrl.dt > 0.0 ? ctrl.dt : automatic_step(problem.hamiltonian)),
      k_(ctrl.method == Integrator::rk4 ? 4 : 7, Operator(rho0.dim())),
      ytmp_(rho0.dim()),
      lab_(rho0.dim()) {
    require_dim(rho0.dim(), problem.hamiltonian.dim(), "Propagator");
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw DomainError("Propagator: step must be positive");
    if (ctrl.method == Integrator::rk4) {
        const double wmax = problem.hamiltonian.max_frequency();
        if (wmax > 0.0) {
            const double limit = ctrl.max_step_fraction * kTwoPi / wmax;
            if (dt_ > limit * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "step " << dt_ << " us exceeds " << ctrl.max_step_fraction
                   << " of the fastest Hamiltonian period (limit " << limit << " us)";
                throw DomainError(os.str());
            }
        }
    }
    stats_.dt = dt_;
    stats_.ncut = rho0.dim() / 2;
    stats_.integrator = ctrl.method == Integrator::rk4 ? "rk4" : "dopri45";
    stats_.kernels = std::string(simd::active_kernels().name);
}

DensityMatrix Propagator::state() const { return DensityMatrix(problem_->frame.to_lab(rho_, t_)); }

void Propagator::rk4_step(double t, double dt) {
    const auto& kern = simd::active_kernels();
    const std::size_t len = rho_.size();
    gen_(t, rho_, k_[0]);
    kern.axpby(len, rho_.data(), 0.5 * dt, k_[0].data(), ytmp_.data());
    gen_(t + 0.5 * dt, ytmp_, k_[1]);
    kern.axpby(len, rho_.data(), 0.5 * dt, k_[1].data(), ytmp_.data());
    gen_(t + 0.5 * dt, ytmp_, k_[2]);
    kern.axpby(len, rho_.data(), dt, k_[2].data(), ytmp_.data());
    gen_(t + dt, ytmp_, k_[3]);
    // rho += dt/6 (k1 + 2 k2 + 2 k3 + k4)
    kern.axpy(len, dt / 6.0, k_[0].data(), rho_.data());
    kern.axpy(len, dt / 3.0, k_[1].data(), rho_.data());
    kern.axpy(len, dt / 3.0, k_[2].data(), rho_.data());
    kern.axpy(len, dt / 6.0, k_[3].data(), rho_.data());
    stats_.rhs_evaluations += 4;
}

bool Propagator::dopri_step(double t, double dt, double& err) {
    const auto& kern = simd::active_kernels();
    const std::size_t len = rho_.size();
    if (!fsal_valid_) {
        gen_(t, rho_, k_[0]);
        ++stats_.rhs_evaluations;
    }
    for (int s = 1; s < 7; ++s) {
        std::copy(rho_.data(), rho_.data() + len, ytmp_.data());
        for (int j = 0; j < s; ++j) {
            if (kA[s][j] != 0.0) kern.axpy(len, dt * kA[s][j], k_[j].data(), ytmp_.data());
        }
        gen_(t + kC[s] * dt, ytmp_, k_[s]);
        ++stats_.rhs_evaluations;
    }
    // ytmp now holds the 5th-order solution (stage 7 abscissa equals the update).
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        cplx e{};
        for (int s = 0; s < 7; ++s) e += kE[s] * k_[s].data()[i];
        e *= dt;
        const double scale =
            ctrl_.atol + ctrl_.rtol * std::max(std::abs(rho_.data()[i]), std::abs(ytmp_.data()[i]));
        const double q = std::abs(e) / scale;
        acc += q * q;
    }
    err = std::sqrt(acc / static_cast<double>(len));
    if (!std::isfinite(err)) throw NumericalError("dopri45: non-finite error estimate at t = " + std::to_string(t));
    if (err <= 1.0) {
        std::swap(rho_, ytmp_);
        std::swap(k_[0], k_[6]);
        fsal_valid_ = true;
        return true;
    }
    fsal_valid_ = true;  // k_[0] still matches rho_ at t
    return false;
}

void Propagator::health_check(double t) {
    const cplx tr = rho_.trace();
    if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag()) ||
        (stats_.steps % 64 == 0 && !all_finite(rho_))) {
        std::ostringstream os;
        os << "non-finite density matrix at t = " << t << " us after " << stats_.steps << " steps (dt = " << dt_
           << ", integrator " << stats_.integrator << ")";
        throw NumericalError(os.str());
    }
    const double drift = std::abs(tr - 1.0);
    stats_.max_trace_drift = std::max(stats_.max_trace_drift, drift);
    if (drift > ctrl_.trace_tol) {
        rho_ *= 1.0 / tr.real();
        ++stats_.renormalizations;
        fsal_valid_ = false;
        std::clog << "warning: trace drift " << drift << " at t = " << t << " us; state renormalized\n";
    }
}

void Propagator::emit(double t, const std::function<void(double, const Operator&)>& on_record) {
    if (!on_record) return;
    problem_->frame.to_lab(rho_, t, lab_);
    on_record(t, lab_);
}

void Propagator::advance(double t_end, double record_interval,
                         const std::function<void(double, const Operator&)>& on_record) {
    const double t_start = t_;
    const double span = t_end - t_start;
    if (span < 0.0) throw DomainError("Propagator::advance: t_end precedes the current time");
    if (span == 0.0) return;
    if (record_interval < 0.0) throw DomainError("Propagator::advance: negative record interval");

    std::size_t n_rec = 0;
    if (record_interval > 0.0) {
        const double ratio = span / record_interval;
        n_rec = static_cast<std::size_t>(std::llround(ratio));
        if (n_rec == 0 || std::abs(ratio - static_cast<double>(n_rec)) > 1e-9 * std::max(1.0, ratio)) {
            throw DomainError("Propagator::advance: span is not a whole number of record intervals");
        }
    }

    if (ctrl_.method == Integrator::rk4) {
        std::size_t per_rec = 1;
        std::size_t n_steps = 0;
        double h = 0.0;
        if (record_interval > 0.0) {
            per_rec = static_cast<std::size_t>(std::ceil(record_interval / dt_ - 1e-9));
            n_steps = per_rec * n_rec;
            h = record_interval / static_cast<double>(per_rec);
        } else {
            n_steps = static_cast<std::size_t>(std::ceil(span / dt_ - 1e-9));
            h = span / static_cast<double>(n_steps);
        }
        if (stats_.steps + n_steps > ctrl_.max_steps) throw NumericalError("Propagator: step budget exceeded");
        stats_.dt = h;
        for (std::size_t s = 1; s <= n_steps; ++s) {
            const double t_prev = t_start + static_cast<double>(s - 1) * h;
            rk4_step(t_prev, h);
            ++stats_.steps;
            t_ = s == n_steps ? t_end : t_start + static_cast<double>(s) * h;
            health_check(t_);
            if (s % per_rec == 0) emit(t_, on_record);
        }
        return;
    }

    // Adaptive: sub-step between record targets.
    const std::size_t n_targets = record_interval > 0.0 ? n_rec : 1;
    for (std::size_t r = 1; r <= n_targets; ++r) {
        const double target = r == n_targets ? t_end : t_start + static_cast<double>(r) * record_interval;
        while (t_ < target) {
            const double remaining = target - t_;
            const bool last = dt_ >= remaining * (1.0 - 1e-12);
            const double h = last ? remaining : dt_;
            double err = 0.0;
            const bool ok = dopri_step(t_, h, err);
            if (ok) {
                ++stats_.steps;
                t_ = last ? target : t_ + h;
                const double e = std::max(err, 1e-10);
                double fac = 0.9 * std::pow(e, -0.17) * std::pow(err_prev_, 0.04);
                fac = std::clamp(fac, 0.2, 10.0);
                err_prev_ = e;
                if (!last || fac < 1.0) dt_ = h * fac;
                stats_.dt = h;
                health_check(t_);
                if (record_interval == 0.0 && t_ < target) emit(t_, on_record);
            } else {
                ++stats_.rejected_steps;
                dt_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
                if (dt_ < 1e-14 * std::max(1.0, std::abs(t_))) {
                    throw NumericalError("dopri45: step size underflow at t = " + std::to_string(t_));
                }
            }
            if (stats_.steps + stats_.rejected_steps > ctrl_.max_steps) {
                throw NumericalError("Propagator: step budget exceeded");
            }
        }
        emit(t_, on_record);
    }
}

Trajectory evolve(const Problem& problem, const DensityMatrix& rho0, double t0, double t_final,
                  const std::vector<Observable>& observables, const StepControl& ctrl, double record_interval) {
    Trajectory tr;
    for (const auto& o : observables) tr.names.push_back(o.name);
    tr.records.resize(observables.size());
    auto record = [&](double t, const Operator& rho) {
        tr.times.push_back(t);
        for (std::size_t i = 0; i < observables.size(); ++i) tr.records[i].push_back(observables[i].eval(t, rho));
    };
    record(t0, rho0.matrix());
    Propagator prop(problem, rho0, t0, ctrl);
    prop.advance(t_final, record_interval, record);
    tr.final_state = prop.state();
    tr.stats = prop.stats();
    return tr;
}

Trajectory evolve(const DensityMatrix& rho0, const HarmonicHamiltonian& h, const std::vector<CollapseChannel>& collapses,
                  double t_final, const std::vector<Observable>& observables, const StepControl& ctrl,
                  double record_interval) {
    const Problem problem{h, collapses, InteractionFrame{}};
    return evolve(problem, rho0, 0.0, t_final, observables, ctrl, record_interval);
}

DensityMatrix initial_state(const SystemParams& p) {
    const DensityMatrix phonons = DensityMatrix::thermal_phonons(p.n_th, p.ncut);
    return DensityMatrix(kron(qubit_ground().projector(), phonons.matrix()));
}

DensityMatrix excited_state(const SystemParams& p) {
    return DensityMatrix::pure(kron(qubit_excited(), Ket::basis(p.ncut, 0)));
}

SteadyResult quasi_steady(const SystemParams& p, double extraction_freq_mhz, const SteadyOptions& opts) {
    p.validate();
    const Problem problem = make_problem(p, opts.frame);
    const DensityMatrix rho0 = opts.start_excited ? excited_state(p) : initial_state(p);

    SteadyResult res;
    if (opts.window > 0.0) {
        res.window = opts.window;
    } else {
        const double base[] = {extraction_freq_mhz, p.delta, p.omega_g};
        const WindowChoice w = analysis_window(base, opts.min_window, opts.max_window);
        res.window = w.length;
        res.commensurate_window = w.commensurate;
    }

    StepControl ctrl = opts.step;
    const double dt0 = ctrl.dt > 0.0 ? ctrl.dt : default_step(p, problem.hamiltonian);
    const auto n_samples = static_cast<std::size_t>(std::ceil(res.window / dt0 - 1e-9));
    const double dt = res.window / static_cast<double>(n_samples);
    ctrl.dt = dt;

    const double transient = opts.transient > 0.0 ? opts.transient : 10.0 / angular(p.gamma_f());
    Propagator prop(problem, rho0, 0.0, ctrl);
    prop.advance(transient, 0.0);

    const Operator sm_t = ProductOperators(p.ncut).sm.transpose();
    const auto& kern = simd::active_kernels();
    std::vector<cplx> samples;
    std::vector<double> times;
    samples.reserve(n_samples);
    times.reserve(n_samples);
    auto on_record = [&](double t, const Operator& rho) {
        times.push_back(t);
        samples.push_back(kern.dotu(rho.size(), rho.data(), sm_t.data()));
    };
    const double sample_interval = ctrl.method == Integrator::rk4 ? 0.0 : dt;

    double t = transient;
    for (std::size_t w = 1; w <= opts.max_windows; ++w) {
        samples.clear();
        times.clear();
        // Uniform sample times t + k dt (k = 1..n) are rebuilt exactly after the run.
        prop.advance(t + res.window, sample_interval, on_record);
        for (std::size_t k = 0; k < times.size(); ++k) times[k] = t + static_cast<double>(k + 1) * dt;
        t += res.window;
        if (samples.size() != n_samples) throw NumericalError("quasi_steady: unexpected sample count");
        const cplx a = fourier_component(samples, times, extraction_freq_mhz);
        res.history.push_back(a);
        res.windows = w;
        res.amplitude = a;
        if (w < 2) continue;
        const double d = std::abs(a - res.history[w - 2]);
        res.residuals.push_back(d);
        const double thr = std::max(opts.rel_tol * std::abs(a), opts.abs_tol);
        if (w < opts.min_windows || d >= thr) continue;
        bool ok = true;
        if (opts.tail_check && d > 1e-3 * thr) {
            ok = false;
            if (res.residuals.size() >= 2) {
                const double prev = res.residuals[res.residuals.size() - 2];
                const double q = prev > 0.0 ? d / prev : 0.0;
                ok = q < 1.0 && d * q / (1.0 - q) < thr;
            }
        }
        if (ok) {
            res.converged = true;
            break;
        }
    }
    res.t_end = t;
    res.state = prop.state();
    res.stats = prop.stats();
    return res;
}

std::size_t start_ncut(const SystemParams& p) {
    double n_est = 0.0;
    if (p.n_th > 0.0) {
        const double c = sideband_rates(p).c1_plus;
        const double cool = p.gamma_f() > 0.0 ? c * c / p.gamma_f() : 0.0;
        n_est = p.n_th * p.kappa / (p.kappa + cool);
    }
    const double rule = std::ceil(n_est + 6.0 * std::sqrt(n_est + 1.0));
    return std::max<std::size_t>(6, static_cast<std::size_t>(rule));
}

TruncatedSteadyResult quasi_steady_truncated(SystemParams p, double extraction_freq_mhz, const SteadyOptions& opts,
                                             const TruncationPolicy& policy) {
    TruncatedSteadyResult out;
    if (!policy.enabled) {
        out.result = quasi_steady(p, extraction_freq_mhz, opts);
        out.ncut = p.ncut;
        out.truncation_converged = true;
        return out;
    }
    const double scale = p.omega_pr > 0.0 ? p.gamma_d / (2.0 * p.omega_pr) : 1.0;
    std::size_t n = policy.start_ncut > 0 ? policy.start_ncut : start_ncut(p);
    n = std::max<std::size_t>(n, 4);
    while (true) {
        p.ncut = n;
        SteadyResult base = quasi_steady(p, extraction_freq_mhz, opts);
        const auto bigger = static_cast<std::size_t>(std::ceil(policy.growth_check * static_cast<double>(n)));
        p.ncut = bigger;
        const SteadyResult check = quasi_steady(p, extraction_freq_mhz, opts);
        const double delta = std::abs(base.amplitude - check.amplitude) * scale;
        out.result = std::move(base);
        out.ncut = n;
        out.truncation_delta = delta;
        if (delta < policy.tol) {
            out.truncation_converged = true;
            return out;
        }
        if (2 * n > policy.max_ncut) {
            out.truncation_converged = false;
            return out;
        }
        n *= 2;
    }
}

FidelityResult fidelity_dark(const DensityMatrix& rho, const SystemParams& p, double t) {
    require_dim(rho.dim(), p.dim(), "fidelity_dark");
    const double lambda = dark_state_lambda(p);
    const double base_phase = -angular(p.omega_m) * t;
    const std::size_t g0 = kQubitGround * p.ncut;
    auto fidelity = [&](double phi) {
        const Ket c = coherent_ket(std::polar(lambda, base_phase + phi), p.ncut);
        cplx acc{};
        for (std::size_t n = 0; n < p.ncut; ++n) {
            for (std::size_t m = 0; m < p.ncut; ++m) acc += std::conj(c[n]) * rho(g0 + n, g0 + m) * c[m];
        }
        return acc.real();
    };
    FidelityResult r{};
    r.raw = fidelity(0.0);

    constexpr int kGrid = 72;
    int best = 0;
    double best_val = -1.0;
    for (int k = 0; k < kGrid; ++k) {
        const double v = fidelity(kTwoPi * k / kGrid);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    // Golden-section refinement inside the bracketing grid cells.
    double a = kTwoPi * (best - 1) / kGrid;
    double b = kTwoPi * (best + 1) / kGrid;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = fidelity(c);
    double fd = fidelity(d);
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fidelity(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fidelity(d);
        }
    }
    const double phi = 0.5 * (a + b);
    const double refined = fidelity(phi);
    if (refined >= best_val) {
        r.maximized = refined;
        r.best_phase = std::remainder(phi, kTwoPi);
    } else {
        r.maximized = best_val;
        r.best_phase = std::remainder(kTwoPi * best / kGrid, kTwoPi);
    }
    r.maximized = std::max(r.maximized, r.raw);
    return r;
}

DensityMatrix oracle_propagate(const DensityMatrix& rho0, const Operator& h,
                               const std::vector<CollapseChannel>& collapses, double t) {
    const std::size_t n = rho0.dim();
    require_dim(h.dim(), n, "oracle_propagate");
    if (n > 12) throw DimensionError("oracle_propagate: dim " + std::to_string(n) + " exceeds the cost guard of 12");
    using Mat = Eigen::MatrixXcd;
    const auto ni = static_cast<Eigen::Index>(n);
    auto to_eigen = [&](const Operator& op) {
        Mat m(ni, ni);
        for (Eigen::Index r = 0; r < ni; ++r) {
            for (Eigen::Index c = 0; c < ni; ++c) m(r, c) = op(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
        return m;
    };
    const Mat id = Mat::Identity(ni, ni);
    const Mat hm = to_eigen(h);
    // Column stacking: vec(A X B) = (B^T (x) A) vec(X).
    Mat L = -kI * (Eigen::kroneckerProduct(id, hm).eval() - Eigen::kroneckerProduct(hm.transpose(), id).eval());
    for (const auto& c : collapses) {
        require_dim(c.op.dim(), n, "oracle_propagate collapse");
        if (c.rate == 0.0) continue;
        const Mat a = to_eigen(c.op);
        const Mat ada = a.adjoint() * a;
        L += c.rate * (Eigen::kroneckerProduct(a.conjugate(), a).eval() -
                       0.5 * Eigen::kroneckerProduct(id, ada).eval() -
                       0.5 * Eigen::kroneckerProduct(ada.transpose(), id).eval());
    }
    const Mat prop = (L * t).exp();
    Eigen::VectorXcd v(ni * ni);
    for (Eigen::Index c = 0; c < ni; ++c) {
        for (Eigen::Index r = 0; r < ni; ++r) v(c * ni + r) = rho0(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
    const Eigen::VectorXcd out = prop * v;
    Operator m(n);
    for (Eigen::Index c = 0; c < ni; ++c) {
        for (Eigen::Index r = 0; r < ni; ++r) m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = out(c * ni + r);
    }
    return DensityMatrix(std::move(m));
}

}  // namespace lceit
