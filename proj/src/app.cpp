#include "lceit/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "lceit/emit.hpp"
#include "lceit/errors.hpp"
#include "lceit/presets.hpp"
#include "lceit/simd/kernels.hpp"

namespace lceit::cli {

namespace {

namespace fs = std::filesystem;

std::string strip_extension(const std::string& path) {
    const fs::path p(path);
    const auto ext = p.extension().string();
    if (ext == ".csv" || ext == ".json") return (p.parent_path() / p.stem()).string();
    return path;
}

std::size_t parse_threads(const std::string& s, const std::string& what) {
    const bool digits = !s.empty() && s.size() < 6 && s.find_first_not_of("0123456789") == std::string::npos;
    const std::size_t v = digits ? std::stoul(s) : 0;
    if (v == 0) throw ConfigError(what, 0, 0, "thread count must be a positive integer, got '" + s + "'");
    return v;
}

/// Data file + metadata sidecar for the single-table modes.
std::vector<OutputFile> table_files(const RunConfig& cfg, const CsvTable& table, nlohmann::json meta, double runtime) {
    const std::string stem = fs::path(strip_extension(cfg.output)).filename().string();
    std::vector<OutputFile> files;
    OutputFile data;
    if (cfg.format == OutputFormat::json) {
        data = {stem + ".json", dump_json(table.to_json())};
    } else {
        data = {stem + ".csv", table.to_csv()};
    }
    meta["files"] = {{data.name, git_blob_sha1(data.bytes)}};
    meta["mode"] = to_string(cfg.mode);
    meta["config"] = serialize_config(cfg);
    meta["threads"] = cfg.threads;
    meta["kernels"] = std::string(simd::active_kernels().name);
    meta["deterministic"] = cfg.deterministic;
    if (!cfg.deterministic) meta["runtime_s"] = runtime;
    files.push_back(std::move(data));
    files.push_back({stem + ".meta.json", dump_json(meta)});
    return files;
}

std::string output_dir_of(const RunConfig& cfg) {
    const fs::path p(strip_extension(cfg.output));
    return p.has_parent_path() ? p.parent_path().string() : std::string(".");
}

void report_written(std::ostream& out, const std::vector<std::string>& paths) {
    for (const auto& p : paths) out << "wrote " << p << "\n";
}

std::vector<Observable> build_observables(const RunConfig& cfg) {
    const SystemParams& p = cfg.system;
    const ProductOperators o(p.ncut);
    std::vector<Observable> obs;
    for (const auto& name : cfg.evolve.observables) {
        if (name == "sigma_minus") {
            obs.push_back(expectation_observable(name, o.sm));
        } else if (name == "sigma_z") {
            obs.push_back(expectation_observable(name, o.sz));
        } else if (name == "sigma_x") {
            obs.push_back(expectation_observable(name, o.sx));
        } else if (name == "n") {
            obs.push_back(expectation_observable(name, o.n));
        } else if (name == "purity") {
            obs.push_back({name, [](double, const Operator& rho) { return cplx(DensityMatrix(rho).purity(), 0.0); }});
        } else if (name == "trace") {
            obs.push_back({name, [](double, const Operator& rho) { return rho.trace(); }});
        } else if (name == "f_ds") {
            obs.push_back({name, [p](double t, const Operator& rho) {
                               return cplx(fidelity_dark(DensityMatrix(rho), p, t).maximized, 0.0);
                           }});
        } else if (name == "f_ds_raw") {
            obs.push_back({name, [p](double t, const Operator& rho) {
                               return cplx(fidelity_dark(DensityMatrix(rho), p, t).raw, 0.0);
                           }});
        }
    }
    return obs;
}

int run_evolve(const RunConfig& cfg, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemParams& p = cfg.system;
    const Problem problem = make_problem(p, cfg.evolve.frame);
    const DensityMatrix rho0 = cfg.evolve.initial == InitialState::excited ? excited_state(p) : initial_state(p);
    const Trajectory traj =
        evolve(problem, rho0, 0.0, cfg.evolve.t_final, build_observables(cfg), cfg.evolve.step, cfg.evolve.record_interval);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json meta = {{"parameters", to_json(p)}, {"stats", to_json(traj.stats)}, {"all_converged", true}};
    report_written(out, write_files(table_files(cfg, trajectory_csv(traj), meta, runtime), output_dir_of(cfg)));
    return kExitOk;
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool quiet) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepOptions opts = sweep_options(cfg);
    if (!quiet) {
        opts.progress = [&err](std::size_t d, std::size_t n) { err << "\rsweep " << d << "/" << n << std::flush; };
    }
    const SweepTable table = sweep(cfg.sweep, opts);
    if (!quiet) err << "\n";
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json points = nlohmann::json::array();
    for (const auto& pt : table.points) points.push_back(to_json(pt.params));
    nlohmann::json meta = {{"sweep", to_json(cfg.sweep)},
                           {"resolved_points", points},
                           {"all_converged", table.all_converged()}};
    if (!cfg.deterministic) {
        nlohmann::json walls = nlohmann::json::array();
        for (const auto& pt : table.points) walls.push_back(pt.wall_time);
        meta["point_wall_times_s"] = walls;
    }
    report_written(out, write_files(table_files(cfg, sweep_csv(table), meta, runtime), output_dir_of(cfg)));
    if (!table.all_converged()) {
        err << "warning: " << std::count_if(table.points.begin(), table.points.end(), [](const SpectrumPoint& sp) {
            return !(sp.ok && sp.converged && sp.truncation_converged);
        }) << " point(s) failed or did not converge\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

int run_analytic(const RunConfig& cfg, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemParams& p = cfg.system;
    CsvTable table({"delta_MHz", "detuning_MHz", "re_r", "im_r"});
    for (double d : cfg.analytic.axis.values()) {
        cplx r;
        switch (cfg.analytic.formula) {
            case AnalyticFormula::single_plus: r = r_eff_single(p, d, Branch::plus); break;
            case AnalyticFormula::single_minus: r = r_eff_single(p, d, Branch::minus); break;
            case AnalyticFormula::pm_plus: r = r_eff_pm(p, d, Branch::plus); break;
            case AnalyticFormula::pm_minus: r = r_eff_pm(p, d, Branch::minus); break;
            case AnalyticFormula::two_color: r = r_c(p, d); break;
        }
        table.row().add(d).add(d - p.omega_m).add(r.real()).add(r.imag());
    }
    const auto rates = sideband_rates(p);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json meta = {{"parameters", to_json(p)},
                           {"formula", to_string(cfg.analytic.formula)},
                           {"sideband_rates_MHz",
                            {{"c1_plus", rates.c1_plus},
                             {"c1_minus", rates.c1_minus},
                             {"c3_plus", rates.c3_plus},
                             {"c3_minus", rates.c3_minus}}},
                           {"all_converged", true}};
    report_written(out, write_files(table_files(cfg, table, meta, runtime), output_dir_of(cfg)));
    return kExitOk;
}

int run_device(const RunConfig& cfg, std::ostream& out) {
    using namespace device;
    const auto t0 = std::chrono::steady_clock::now();
    const DeviceConfig& d = cfg.device;
    const DeviceParams& dp = d.params;
    CsvTable table({"quantity", "value", "unit"});
    auto add = [&table](const std::string& q, double v, const std::string& unit) {
        table.row().add(q).add(v).add(unit);
    };
    const auto ej = effective_ej(dp);
    add("e_prime", ej.e_prime, "GHz");
    add("phi0", ej.phi0, "rad");
    add("flux_slope", flux_slope(dp), "GHz/m");
    Sensitivity sens{};
    if (d.sensitivity == SensitivityKind::flux) {
        add("alpha", d.alpha, "1");
        add("flux_qubit_gap", flux_qubit_gap(dp.ej0, dp.ec, d.alpha, d.gap_exponent), "GHz");
        sens = gap_sensitivity(dp, d.alpha, 1e-6, d.gap_exponent);
        add("r_f", sens.per_radian, "GHz/rad");
        add("r_f_mphi0", sens.per_mphi0, "GHz/mPhi0");
    } else {
        add("transmon_e01", transmon_freq(dp.ec, ej.e_prime), "GHz");
        sens = transmon_sensitivity(dp.ec, dp.ej_sum, dp.phi_minus);
        add("r_t", sens.per_radian, "GHz/rad");
        add("r_t_mphi0", sens.per_mphi0, "GHz/mPhi0");
    }
    const auto g = coupling_amplitude(sens.per_mphi0, dp, d.convention);
    add("x0", g.x0, "m");
    add("flux_pp", g.flux_mphi0, "mPhi0");
    add("convention", g.convention, "1");
    add("g_amplitude", g.g_mhz, "MHz");

    std::size_t w = 0;
    for (const auto& row : table.rows()) w = std::max(w, row[0].size());
    for (const auto& row : table.rows()) {
        out << std::left << std::setw(static_cast<int>(w) + 2) << row[0] << std::right << std::setw(26) << row[1]
            << "  " << row[2] << "\n";
    }
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json meta = {{"all_converged", true}};
    report_written(out, write_files(table_files(cfg, table, meta, runtime), output_dir_of(cfg)));
    return kExitOk;
}

int run_preset_mode(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool quiet) {
    PresetOptions opts;
    opts.threads = cfg.threads;
    opts.stretch = cfg.stretch;
    if (!quiet) {
        opts.progress = [&err](const std::string& stage, std::size_t d, std::size_t n) {
            err << "\r" << stage << " " << d << "/" << n << (d == n ? "\n" : "") << std::flush;
        };
    }
    const PresetResult r = run_preset(cfg.preset, opts);
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    const auto files = preset_files(r, cfg.format == OutputFormat::json, cfg.deterministic, cfg.plot);
    report_written(out, write_files(files, cfg.output));
    return r.all_converged ? kExitOk : kExitNonConvergence;
}

}  // namespace

std::string resolve_output(const std::string& path) {
    const char* dir = std::getenv("LCEIT_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0' || fs::path(path).is_absolute()) return path;
    return (fs::path(dir) / path).string();
}

int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool quiet) {
    try {
        for (const auto& w : cfg.system.warnings()) err << "warning: " << w << "\n";
        switch (cfg.mode) {
            case Mode::evolve: return run_evolve(cfg, out);
            case Mode::sweep: return run_sweep(cfg, out, err, quiet);
            case Mode::analytic: return run_analytic(cfg, out);
            case Mode::device: return run_device(cfg, out);
            case Mode::preset: return run_preset_mode(cfg, out, err, quiet);
        }
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::logic_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitFailure;
}

int run_command(const Invocation& inv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(inv.config_path);
        if (to_string(cfg.mode) != inv.command) {
            err << "config error: command '" << inv.command << "' does not match run.mode '" << to_string(cfg.mode)
                << "' in " << inv.config_path << "\n";
            return kExitConfig;
        }
        if (inv.threads) {
            cfg.threads = *inv.threads;
        } else if (const char* env = std::getenv("LCEIT_THREADS"); env != nullptr && *env != '\0') {
            cfg.threads = parse_threads(env, "LCEIT_THREADS");
        }
        if (cfg.threads == 0) throw ConfigError("--threads", 0, 0, "thread count must be >= 1");
        cfg.sweep.threads = cfg.threads;
        cfg.output = resolve_output(inv.out ? *inv.out : cfg.output);
        cfg.stretch = cfg.stretch || inv.stretch;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    return run_config(cfg, out, err, inv.quiet);
}

}  // namespace lceit::cli
