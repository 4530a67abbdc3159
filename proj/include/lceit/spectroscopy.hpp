#pragma once

// Probe reflection: numeric extraction from quasi-steady dipole components,
// closed-form reflection coefficients, and the gridded sweep engine.
//
// All frequencies are ordinary MHz. The closed forms are homogeneous of degree
// zero in frequency, so they are evaluated directly in MHz.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lceit/fourier.hpp"
#include "lceit/lindblad.hpp"
#include "lceit/model.hpp"

namespace lceit {

/// r = -i Gamma_d <sigma_-(omega_pr)> / (2 Omega_pr). Throws DomainError for Omega_pr = 0.
cplx reflection(cplx sigma_minus_component, const SystemParams& p);

/// Gamma_d / [2 Gamma_f - 2i x + 4 C1^2 / (kappa - 2i x)] with x = delta - omega_m +- omega_g
/// (+ for the plus branch).
cplx r_eff_single(const SystemParams& p, double delta, Branch branch = Branch::plus);

/// Gamma_d / [2 Gamma_f - 2i (delta - omega_m) + 4 C1^2 / (kappa - 2i (delta - omega_m -+ omega_g))].
cplx r_eff_pm(const SystemParams& p, double delta, Branch branch);

/// (r_eff_pm(+) + r_eff_pm(-)) / 2.
cplx r_c(const SystemParams& p, double delta);

struct Axis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 2;

    [[nodiscard]] std::vector<double> values() const;
    friend bool operator==(const Axis&, const Axis&) = default;
};

/// Names accepted on a sweep axis.
const std::vector<std::string>& sweep_axis_names();

/// fixed: delta comes from the parameters (or a "delta" axis).
/// resonant: delta = omega_m + delta_s + probe_offset.
enum class ProbeMode { fixed, resonant };

struct SweepSpec {
    SystemParams base;
    std::vector<Axis> axes;              // first axis varies slowest
    std::optional<double> delta_s;       // fixed drive detuning; otherwise taken from base.delta0
    ProbeMode probe = ProbeMode::fixed;
    double probe_offset = 0.0;           // used with ProbeMode::resonant
    std::size_t threads = 1;

    /// Throws DomainError on an invalid grid.
    void validate() const;
    [[nodiscard]] std::size_t size() const;
    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

enum class AnalyticKind { none, single_plus, single_minus, two_color };

struct ResolvedPoint {
    std::vector<double> coords;
    SystemParams params;  // delta0 and delta resolved
    double delta_s = 0.0;
    AnalyticKind analytic = AnalyticKind::none;
    std::string error;  // non-empty when the point cannot be resolved (e.g. delta_s out of reach)
};

/// Expands the grid and resolves delta0 / delta for each point (grid order).
std::vector<ResolvedPoint> resolve_grid(const SweepSpec& spec);

/// Closed form matching a resolved point, if one is defined there.
std::optional<cplx> analytic_reflection(const ResolvedPoint& point);

struct SpectrumPoint {
    std::vector<double> coords;
    SystemParams params;
    double delta_s = 0.0;
    bool ok = false;                // false when the point threw
    std::string error;
    cplx sigma_component{};
    cplx r_num{};
    std::optional<cplx> r_analytic;
    bool converged = false;         // steady-state convergence
    bool truncation_converged = false;
    std::size_t ncut_used = 0;
    std::size_t windows = 0;
    double wall_time = 0.0;         // s
};

struct SweepTable {
    std::vector<std::string> axis_names;
    std::vector<SpectrumPoint> points;
    [[nodiscard]] bool all_converged() const;
};

enum class TruncationCheck { every_point, representative, off };

struct SweepOptions {
    SteadyOptions steady;
    TruncationPolicy truncation;
    TruncationCheck check = TruncationCheck::every_point;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Runs quasi_steady at every grid point on spec.threads workers. Results are in
/// grid order; per-point failures are recorded in the row.
SweepTable sweep(const SweepSpec& spec, const SweepOptions& opts = {});

}  // namespace lceit
