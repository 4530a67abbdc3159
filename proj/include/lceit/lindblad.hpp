#pragma once

// Master-equation integration: right-hand side, fixed-step RK4 and adaptive
// Dormand-Prince propagation, quasi-steady-state extraction, dark-state
// fidelity and a dense Liouvillian exponential used as a test oracle.
//
// States passed in and out of this API are always in the drive frame. A
// Problem may integrate in an interaction frame internally; see Problem::frame.

#include <functional>
#include <string>
#include <vector>

#include "lceit/harmonic.hpp"
#include "lceit/model.hpp"
#include "lceit/operators.hpp"

namespace lceit {

/// -i[H, rho] + sum_k rate_k D[A_k] rho with D[A] rho = A rho A^dag - {A^dag A, rho}/2.
Operator lindblad_rhs(const Operator& h, const std::vector<CollapseChannel>& collapses, const Operator& rho);
Operator lindblad_rhs(const Operator& h, const std::vector<CollapseChannel>& collapses, const DensityMatrix& rho);

/// Right-hand side specialised for Hermitian rho: one dense product with
/// H_eff = H(t) - i K per call plus sparse jump terms. The output is exactly Hermitian.
/// Holds scratch buffers, so one instance per thread.
class LindbladGenerator {
public:
    LindbladGenerator(const HarmonicHamiltonian& h, const std::vector<CollapseChannel>& collapses);

    void operator()(double t, const Operator& rho, Operator& drho);
    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

private:
    struct Jump {
        double rate;
        std::vector<SparseEntry> entries;
        bool dense;
        Operator op;
        Operator op_dag;
    };

    const HarmonicHamiltonian* h_;
    std::size_t dim_;
    Operator heff_static_;
    std::vector<Jump> jumps_;
    Operator heff_;
    Operator x_;
    Operator tmp_;
    double cached_t_ = 0.0;
    bool cache_valid_ = false;
    std::size_t evaluations_ = 0;
};

enum class FrameChoice { drive, interaction };

/// Everything needed to integrate: Hamiltonian and dissipators in the
/// integration frame, plus the frame itself relative to the drive frame.
struct Problem {
    HarmonicHamiltonian hamiltonian;
    std::vector<CollapseChannel> collapses;
    InteractionFrame frame;
};

Problem make_problem(const SystemParams& p, FrameChoice frame = FrameChoice::interaction);

enum class Integrator { rk4, dopri45 };

struct StepControl {
    Integrator method = Integrator::rk4;
    double dt = 0.0;                   // fixed step (rk4) or initial step (dopri45); 0 = automatic
    double atol = 1e-10;
    double rtol = 1e-8;
    double max_step_fraction = 1.0 / 20.0;  // rk4: dt <= fraction * period of the fastest term
    double trace_tol = 1e-7;           // renormalize and log beyond this drift
    std::size_t max_steps = 500'000'000;

    friend bool operator==(const StepControl&, const StepControl&) = default;
};

/// Default fixed step min(1/omega_m, 1/|delta|)/40 in us, further limited by
/// the fastest harmonic term of the integration-frame Hamiltonian.
double default_step(const SystemParams& p, const HarmonicHamiltonian& h);

struct EvolveStats {
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t rhs_evaluations = 0;
    std::size_t renormalizations = 0;
    double max_trace_drift = 0.0;
    double dt = 0.0;  // fixed step, or last accepted step for dopri45
    std::size_t ncut = 0;
    std::string integrator;
    std::string kernels;
};

/// Observable evaluated on the drive-frame state at each record time.
struct Observable {
    std::string name;
    std::function<cplx(double t, const Operator& rho)> eval;
};

/// tr(rho op).
Observable expectation_observable(std::string name, const Operator& op);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<cplx>> records;  // records[i][k] = observable i at times[k]
    DensityMatrix final_state;               // drive frame
    EvolveStats stats;
};

/// Stateful integrator; advances a density matrix held in the problem's frame.
class Propagator {
public:
    Propagator(const Problem& problem, const DensityMatrix& rho0, double t0, const StepControl& ctrl);

    [[nodiscard]] double time() const noexcept { return t_; }
    /// Advances to t_end, calling on_record(t, rho_drive_frame) at t0 + k * interval
    /// (excluding the start time, including t_end). With interval == 0 every step is recorded.
    void advance(double t_end, double record_interval,
                 const std::function<void(double, const Operator&)>& on_record = {});
    [[nodiscard]] DensityMatrix state() const;
    [[nodiscard]] const Operator& frame_state() const noexcept { return rho_; }
    [[nodiscard]] const EvolveStats& stats() const noexcept { return stats_; }
    [[nodiscard]] double step() const noexcept { return dt_; }

private:
    void rk4_step(double t, double dt);
    bool dopri_step(double t, double dt, double& err);
    void health_check(double t);
    void emit(double t, const std::function<void(double, const Operator&)>& on_record);

    const Problem* problem_;
    LindbladGenerator gen_;
    StepControl ctrl_;
    Operator rho_;
    double t_;
    double dt_;
    double err_prev_ = 1e-4;
    std::vector<Operator> k_;
    Operator ytmp_;
    Operator lab_;
    EvolveStats stats_;
    bool fsal_valid_ = false;
};

/// Integrates from t0 to t_final recording observables at t0 and every record_interval.
Trajectory evolve(const Problem& problem, const DensityMatrix& rho0, double t0, double t_final,
                  const std::vector<Observable>& observables, const StepControl& ctrl, double record_interval = 0.0);

/// Drive-frame convenience form with t0 = 0.
Trajectory evolve(const DensityMatrix& rho0, const HarmonicHamiltonian& h, const std::vector<CollapseChannel>& collapses,
                  double t_final, const std::vector<Observable>& observables, const StepControl& ctrl,
                  double record_interval = 0.0);

/// |g><g| (x) thermal(n_th), or |g,0><g,0| for n_th = 0.
DensityMatrix initial_state(const SystemParams& p);
/// |e,0><e,0|.
DensityMatrix excited_state(const SystemParams& p);

struct SteadyOptions {
    double transient = 0.0;        // us; 0 = 10 / Gamma_f
    double window = 0.0;           // us; 0 = automatic
    double min_window = 2.0;       // us, lower bound for the automatic window
    double max_window = 20.0;      // us, upper bound for the commensurate search
    std::size_t min_windows = 3;
    std::size_t max_windows = 200;
    double rel_tol = 1e-3;
    double abs_tol = 1e-6;
    bool tail_check = true;        // also require the geometric tail estimate below tolerance
    FrameChoice frame = FrameChoice::interaction;
    bool start_excited = false;
    StepControl step;

    friend bool operator==(const SteadyOptions&, const SteadyOptions&) = default;
};

struct SteadyResult {
    DensityMatrix state;  // drive frame, at t_end
    cplx amplitude;       // Fourier component of <sigma_-> at the extraction frequency
    bool converged = false;
    std::size_t windows = 0;
    double window = 0.0;
    bool commensurate_window = true;
    double t_end = 0.0;
    std::vector<cplx> history;      // per-window amplitudes
    std::vector<double> residuals;  // |a_k - a_{k-1}|
    EvolveStats stats;
};

/// Evolves p from its initial state and extracts <sigma_-> at extraction_freq (MHz)
/// over consecutive analysis windows until consecutive amplitudes agree.
SteadyResult quasi_steady(const SystemParams& p, double extraction_freq_mhz, const SteadyOptions& opts = {});

struct TruncationPolicy {
    bool enabled = true;
    std::size_t start_ncut = 0;   // 0 = estimate from the cooled occupation
    std::size_t max_ncut = 256;
    double growth_check = 1.5;    // compare ncut against ceil(growth_check * ncut)
    double tol = 1e-3;            // on |delta r|

    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

/// Starting truncation: max(6, ceil(n + 6 sqrt(n + 1))) with n the estimated steady occupation.
std::size_t start_ncut(const SystemParams& p);

struct TruncatedSteadyResult {
    SteadyResult result;
    std::size_t ncut = 0;
    bool truncation_converged = false;
    double truncation_delta = 0.0;  // |r(ncut) - r(1.5 ncut)|
};

/// quasi_steady with the Fock cutoff increased until the reflection changes by
/// less than policy.tol when the cutoff grows by policy.growth_check.
TruncatedSteadyResult quasi_steady_truncated(SystemParams p, double extraction_freq_mhz, const SteadyOptions& opts,
                                             const TruncationPolicy& policy);

struct FidelityResult {
    double raw;
    double maximized;
    double best_phase;  // rad
};

/// <Psi_ds(t)|rho|Psi_ds(t)> with coherent amplitude lambda exp(-i omega_m t), plus
/// the maximum over a global phase of the coherent amplitude.
FidelityResult fidelity_dark(const DensityMatrix& rho, const SystemParams& p, double t);

/// exp(L t) rho0 with L the dense Liouvillian of a static H. dim <= 12.
DensityMatrix oracle_propagate(const DensityMatrix& rho0, const Operator& h,
                               const std::vector<CollapseChannel>& collapses, double t);

}  // namespace lceit
