#pragma once

// Figure presets: the parameter sets and grids behind each figure, their
// execution, and the files they produce.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lceit/emit.hpp"
#include "lceit/lindblad.hpp"
#include "lceit/spectroscopy.hpp"

namespace lceit::cli {

/// fig4a, fig4b, fig5, fig6a, fig6b, fig7, fig8.
const std::vector<std::string>& preset_names();

struct PresetOptions {
    std::size_t threads = 1;
    bool stretch = false;  // fig5: add n_th = 300
    std::function<void(const std::string& stage, std::size_t done, std::size_t total)> progress;
};

struct NamedSweep {
    std::string label;  // e.g. "n_th=10"
    SweepSpec spec;
    SweepOptions options;
};

/// Sweeps run by a sweep-type preset, in execution order. Empty for fig4b.
/// Throws DomainError for an unknown name.
std::vector<NamedSweep> preset_sweeps(const std::string& name, const PresetOptions& opts = {});

/// Time-series preset at the single-colour dip.
struct TimeSeriesSpec {
    SystemParams params;
    double t_final = 20.0;          // us
    double record_interval = 0.002; // us
    double spectrum_start = 10.0;   // us; the spectrum uses [spectrum_start, t_final)
    double spectrum_max = 30.0;     // MHz
    StepControl step;
};
TimeSeriesSpec fig4b_spec();

struct OutputFile {
    std::string name;   // relative file name, e.g. "fig4a.csv"
    std::string bytes;
};

struct PresetResult {
    std::string name;
    std::vector<std::pair<std::string, SweepTable>> sweeps;  // label, table
    std::vector<std::pair<std::string, CsvTable>> tables;    // file stem, data
    std::optional<Trajectory> trajectory;
    nlohmann::json summary;  // preset-specific derived quantities
    bool all_converged = true;
    double runtime_s = 0.0;
    std::size_t threads = 1;
    std::vector<std::string> warnings;
};

PresetResult run_preset(const std::string& name, const PresetOptions& opts = {});

/// Data files (CSV or JSON), the metadata sidecar and optionally a plot description.
/// With deterministic set, wall-clock fields are left out so every byte is reproducible.
std::vector<OutputFile> preset_files(const PresetResult& result, bool json_data, bool deterministic, bool plot);

/// Writes files under dir and returns their paths.
std::vector<std::string> write_files(const std::vector<OutputFile>& files, const std::string& dir);

/// Preset-specific table builders (exposed for tests).
CsvTable fig4b_spectrum(const Trajectory& traj, const TimeSeriesSpec& spec);

}  // namespace lceit::cli
