#pragma once

// Run configuration: a sectioned YAML document with a fixed schema.
//
//   run:        mode, preset, output, format, threads, deterministic, plot, stretch
//   system:     SystemParams fields, optional delta_s
//   device:     DeviceParams fields, alpha, gap_exponent, sensitivity, convention
//   sweep:      probe, probe_offset, delta_s, truncation_check, axes (list of maps)
//   steady:     SteadyOptions fields
//   truncation: TruncationPolicy fields
//   evolve:     t_final, record_interval, integrator, dt, atol, rtol, frame, initial, observables
//   analytic:   formula, axis
//
// Unknown sections or keys, mistyped values and out-of-range values are rejected
// with a ConfigError carrying the 1-based line and column of the offending node.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lceit/device.hpp"
#include "lceit/lindblad.hpp"
#include "lceit/model.hpp"
#include "lceit/spectroscopy.hpp"

namespace lceit::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

enum class Mode { evolve, sweep, analytic, device, preset };
enum class OutputFormat { csv, json };
enum class InitialState { ground, excited };
enum class AnalyticFormula { single_plus, single_minus, pm_plus, pm_minus, two_color };
enum class SensitivityKind { transmon, flux };

struct DeviceConfig {
    device::DeviceParams params;
    double alpha = 0.8;
    device::GapExponentEnergy gap_exponent = device::GapExponentEnergy::ej0;
    SensitivityKind sensitivity = SensitivityKind::transmon;
    double convention = device::kDefaultCouplingConvention;

    friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;
};

struct EvolveConfig {
    double t_final = 10.0;          // us
    double record_interval = 0.01;  // us
    StepControl step;
    FrameChoice frame = FrameChoice::interaction;
    InitialState initial = InitialState::ground;
    std::vector<std::string> observables = {"sigma_minus", "sigma_z", "n"};

    friend bool operator==(const EvolveConfig&, const EvolveConfig&) = default;
};

/// Names accepted in evolve.observables.
const std::vector<std::string>& observable_names();

struct AnalyticConfig {
    AnalyticFormula formula = AnalyticFormula::single_plus;
    Axis axis{"delta", 86.0, 106.0, 81};

    friend bool operator==(const AnalyticConfig&, const AnalyticConfig&) = default;
};

struct RunConfig {
    Mode mode = Mode::sweep;
    std::string preset;                // preset mode only
    std::string output = "out";        // file stem (evolve/sweep/analytic/device) or directory (preset)
    OutputFormat format = OutputFormat::csv;
    std::size_t threads = 1;
    bool deterministic = true;         // omit wall-clock fields from metadata
    bool plot = false;                 // write a plot-description sidecar
    bool stretch = false;              // enable cost-guarded preset members

    SystemParams system;               // delta0 already resolved when delta_s is given
    std::optional<double> delta_s;
    DeviceConfig device;
    SweepSpec sweep;                   // base mirrors system; used in sweep mode
    TruncationCheck truncation_check = TruncationCheck::representative;
    SteadyOptions steady;
    TruncationPolicy truncation;
    EvolveConfig evolve;
    AnalyticConfig analytic;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a configuration document. source names the document in diagnostics.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");

/// Reads and parses a file; I/O failures throw IoError.
RunConfig load_config(const std::string& path);

/// Canonical document for cfg; parse_config(serialize_config(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

/// Sweep options assembled from the steady/truncation sections.
SweepOptions sweep_options(const RunConfig& cfg);

std::string to_string(Mode m);
std::string to_string(OutputFormat f);
std::string to_string(AnalyticFormula f);

/// Documented defaults, printed by --help.
std::string config_reference();

}  // namespace lceit::cli
