#include "lceit/presets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "lceit/errors.hpp"
#include "lceit/fourier.hpp"
#include "lceit/simd/kernels.hpp"

namespace lceit::cli {

namespace {

constexpr double kFig4aHalfWidth = 10.0;  // MHz around the dip
constexpr std::size_t kFig4aPoints = 81;
constexpr double kFig5HalfWidth = 2.0;
constexpr std::size_t kFig5Points = 41;

SweepOptions preset_options() {
    SweepOptions o;
    o.check = TruncationCheck::representative;
    return o;
}

NamedSweep single_color_sweep(const std::string& label, const SystemParams& base, double half_width,
                              std::size_t points, std::size_t threads) {
    NamedSweep s{label, {}, preset_options()};
    s.spec.base = base;
    s.spec.delta_s = -base.omega_g;
    const double centre = base.omega_m - base.omega_g;
    s.spec.axes = {{"delta", centre - half_width, centre + half_width, points}};
    s.spec.threads = threads;
    return s;
}

NamedSweep two_color_sweep(const std::string& label, const SystemParams& base, std::size_t threads) {
    NamedSweep s{label, {}, preset_options()};
    s.spec.base = base;
    s.spec.delta_s = 0.0;
    s.spec.axes = {{"delta", base.omega_m - 10.0, base.omega_m + 10.0, 81}};
    s.spec.threads = threads;
    return s;
}

bool point_good(const SpectrumPoint& p) { return p.ok && p.converged && p.truncation_converged; }

void add_r(CsvTable& t, const SpectrumPoint& p) {
    if (p.ok) {
        t.add(p.r_num.real()).add(p.r_num.imag());
    } else {
        t.add(std::string()).add(std::string());
    }
}

void add_overlay(CsvTable& t, const SpectrumPoint& p) {
    if (p.r_analytic) {
        t.add(p.r_analytic->real()).add(p.r_analytic->imag());
    } else {
        t.add(std::string()).add(std::string());
    }
}

void add_flags(CsvTable& t, const SpectrumPoint& p) {
    t.add(point_good(p)).add(p.ok ? std::to_string(p.ncut_used) : std::string());
}

CsvTable fig4a_table(const SweepTable& st) {
    CsvTable t({"detuning_MHz", "re_r_num", "im_r_num", "re_r_eff", "im_r_eff", "converged", "ncut"});
    for (const auto& p : st.points) {
        t.row().add(p.params.delta - p.params.omega_m + p.params.omega_g);
        add_r(t, p);
        add_overlay(t, p);
        add_flags(t, p);
    }
    return t;
}

CsvTable fig5_table(const std::vector<std::pair<std::string, SweepTable>>& sweeps) {
    CsvTable t({"n_th", "detuning_MHz", "re_r_num", "im_r_num", "re_r_eff", "im_r_eff", "converged", "ncut"});
    for (const auto& [label, st] : sweeps) {
        for (const auto& p : st.points) {
            t.row().add(p.params.n_th).add(p.params.delta - p.params.omega_m + p.params.omega_g);
            add_r(t, p);
            add_overlay(t, p);
            add_flags(t, p);
        }
    }
    return t;
}

CsvTable fig6_table(const SweepTable& st, bool with_omega_g) {
    std::vector<std::string> header;
    if (with_omega_g) header.emplace_back("omega_g_MHz");
    for (const char* h : {"delta_s_MHz", "re_r_num", "im_r_num", "converged", "ncut"}) header.emplace_back(h);
    CsvTable t(std::move(header));
    for (const auto& p : st.points) {
        t.row();
        if (with_omega_g) t.add(p.params.omega_g);
        t.add(p.delta_s);
        add_r(t, p);
        add_flags(t, p);
    }
    return t;
}

CsvTable fig78_table(const std::vector<std::pair<std::string, SweepTable>>& sweeps, bool with_drive) {
    std::vector<std::string> header;
    if (with_drive) header.emplace_back("omega_drv_MHz");
    for (const char* h : {"detuning_MHz", "re_r_num", "im_r_num", "re_r_c", "im_r_c", "converged", "ncut"}) {
        header.emplace_back(h);
    }
    CsvTable t(std::move(header));
    for (const auto& [label, st] : sweeps) {
        for (const auto& p : st.points) {
            t.row();
            if (with_drive) t.add(p.params.omega_drv);
            t.add(p.params.delta - p.params.omega_m);
            add_r(t, p);
            add_overlay(t, p);
            add_flags(t, p);
        }
    }
    return t;
}

CsvTable fig4b_series(const Trajectory& traj) {
    CsvTable t({"t_us", "f_ds", "f_ds_raw", "im_sigma_minus"});
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        t.row().add(traj.times[k]);
        t.add(traj.records[1][k].real()).add(traj.records[2][k].real()).add(traj.records[0][k].imag());
    }
    return t;
}

nlohmann::json point_params(const SweepTable& st) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : st.points) arr.push_back(to_json(p.params));
    return arr;
}

nlohmann::json plot_description(const std::string& preset, const PresetResult& r) {
    nlohmann::json series = nlohmann::json::array();
    auto line = [&series](const std::string& file, const std::string& x, const std::string& y, const std::string& label,
                          const std::string& group) {
        nlohmann::json s = {{"file", file}, {"x", x}, {"y", y}, {"label", label}};
        if (!group.empty()) s["group_by"] = group;
        series.push_back(s);
    };
    nlohmann::json markers = nlohmann::json::array();
    nlohmann::json axes;
    if (preset == "fig4a" || preset == "fig5") {
        const std::string file = preset + ".csv";
        const std::string group = preset == "fig5" ? "n_th" : "";
        line(file, "detuning_MHz", "re_r_num", "Re r (numerical)", group);
        line(file, "detuning_MHz", "im_r_num", "Im r (numerical)", group);
        line(file, "detuning_MHz", "re_r_eff", "Re r_eff", group);
        line(file, "detuning_MHz", "im_r_eff", "Im r_eff", group);
        axes = {{"x", "delta - omega_m + omega_g (MHz)"}, {"y", "r"}};
        markers.push_back({{"x", 0.0}, {"label", "C1+ sideband resonance"}});
    } else if (preset == "fig4b") {
        line("fig4b.csv", "t_us", "f_ds", "F_ds (phase-maximized)", "");
        line("fig4b.csv", "t_us", "im_sigma_minus", "Im <sigma_->", "");
        line("fig4b_spectrum.csv", "frequency_MHz", "magnitude", "|Im <sigma_->(omega')|", "");
        axes = {{"x", "t (us) / frequency (MHz)"}, {"y", "F_ds, Im <sigma_->"}};
        markers.push_back({{"x", 0.0}, {"label", "probe response (dc)"}});
    } else if (preset == "fig6a") {
        series.push_back({{"file", "fig6a.csv"}, {"x", "delta_s_MHz"}, {"y", "omega_g_MHz"}, {"z", "re_r_num"},
                          {"label", "Re r"}, {"kind", "heatmap"}});
        axes = {{"x", "delta_s (MHz)"}, {"y", "omega_g (MHz)"}};
        for (int k : {-3, -1, 1, 3}) {
            markers.push_back({{"line", "delta_s = " + std::to_string(k) + " omega_g"}, {"slope", k}});
        }
    } else if (preset == "fig6b") {
        line("fig6b.csv", "delta_s_MHz", "re_r_num", "Re r", "");
        axes = {{"x", "delta_s (MHz)"}, {"y", "Re r"}};
        for (double x : {-4.5, -1.5, 1.5, 4.5}) markers.push_back({{"x", x}, {"label", "sideband dip"}});
    } else {
        const std::string file = preset + ".csv";
        const std::string group = preset == "fig8" ? "omega_drv_MHz" : "";
        line(file, "detuning_MHz", "re_r_num", "Re r (numerical)", group);
        line(file, "detuning_MHz", "re_r_c", "Re r_c", group);
        if (preset == "fig7") line(file, "detuning_MHz", "im_r_num", "Im r (numerical)", group);
        axes = {{"x", "delta - omega_m (MHz)"}, {"y", "Re r"}};
        const double wg = r.sweeps.empty() ? 4.0 : r.sweeps.front().second.points.front().params.omega_g;
        markers.push_back({{"x", -wg}, {"label", "-omega_g"}});
        markers.push_back({{"x", wg}, {"label", "+omega_g"}});
    }
    return {{"preset", preset}, {"axes", axes}, {"series", series}, {"markers", markers}};
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig7", "fig8"};
    return names;
}

std::vector<NamedSweep> preset_sweeps(const std::string& name, const PresetOptions& opts) {
    const std::size_t th = opts.threads;
    if (name == "fig4a") {
        return {single_color_sweep("fig4a", SystemParams::single_color_defaults(), kFig4aHalfWidth, kFig4aPoints, th)};
    }
    if (name == "fig4b") return {};
    if (name == "fig5") {
        std::vector<double> levels = {0.0, 10.0, 30.0};
        if (opts.stretch) levels.push_back(300.0);
        std::vector<NamedSweep> out;
        for (double n : levels) {
            SystemParams p = SystemParams::single_color_defaults();
            p.n_th = n;
            char label[32];
            std::snprintf(label, sizeof label, "n_th=%g", n);
            out.push_back(single_color_sweep(label, p, kFig5HalfWidth, kFig5Points, th));
        }
        return out;
    }
    if (name == "fig6a") {
        NamedSweep s{"fig6a", {}, preset_options()};
        s.spec.base = SystemParams{};
        s.spec.probe = ProbeMode::resonant;
        s.spec.axes = {{"omega_g", 0.0, 4.0, 9}, {"delta_s", -8.0, 8.0, 33}};
        s.spec.threads = th;
        return {s};
    }
    if (name == "fig6b") {
        NamedSweep s{"fig6b", {}, preset_options()};
        s.spec.base = SystemParams{};
        s.spec.base.omega_g = 1.5;
        s.spec.probe = ProbeMode::resonant;
        s.spec.axes = {{"delta_s", -6.0, 6.0, 121}};
        s.spec.threads = th;
        return {s};
    }
    if (name == "fig7") return {two_color_sweep("fig7", SystemParams{}, th)};
    if (name == "fig8") {
        std::vector<NamedSweep> out;
        for (double w : {5.0, 10.0, 15.0, 20.0}) {
            SystemParams p;
            p.omega_drv = w;
            char label[32];
            std::snprintf(label, sizeof label, "omega_drv=%g", w);
            out.push_back(two_color_sweep(label, p, th));
        }
        return out;
    }
    throw DomainError("unknown preset '" + name + "'");
}

TimeSeriesSpec fig4b_spec() {
    TimeSeriesSpec s;
    s.params = SystemParams::single_color_defaults();
    return s;
}

CsvTable fig4b_spectrum(const Trajectory& traj, const TimeSeriesSpec& spec) {
    std::vector<double> times;
    std::vector<double> values;
    const double eps = 1e-9 * spec.record_interval;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        if (t >= spec.spectrum_start - eps && t < spec.t_final - eps) {
            times.push_back(t);
            values.push_back(traj.records[0][k].imag());
        }
    }
    if (times.size() < 2) throw DomainError("fig4b_spectrum: analysis range holds fewer than two samples");
    const double span = spec.record_interval * static_cast<double>(times.size());
    const double df = 1.0 / span;
    const auto bins = static_cast<std::size_t>(std::floor(spec.spectrum_max / df + 1e-9));
    CsvTable t({"frequency_MHz", "re_amplitude", "im_amplitude", "magnitude"});
    for (std::size_t b = 0; b <= bins; ++b) {
        const double f = static_cast<double>(b) * df;
        const cplx c = fourier_component(std::span<const double>(values), std::span<const double>(times), f);
        t.row().add(f).add(c.real()).add(c.imag()).add(std::abs(c));
    }
    return t;
}

PresetResult run_preset(const std::string& name, const PresetOptions& opts) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw DomainError("unknown preset '" + name + "'");
    }
    const auto t0 = std::chrono::steady_clock::now();
    PresetResult r;
    r.name = name;
    r.threads = opts.threads;

    if (name == "fig4b") {
        const TimeSeriesSpec spec = fig4b_spec();
        const SystemParams& p = spec.params;
        const Problem problem = make_problem(p, FrameChoice::interaction);
        const ProductOperators o(p.ncut);
        const Observable sm = expectation_observable("sigma_minus", o.sm);
        const double w = angular(p.delta);
        std::vector<Observable> obs;
        obs.push_back({"sigma_minus_probe_frame",
                       [sm, w](double t, const Operator& rho) { return sm.eval(t, rho) * std::polar(1.0, w * t); }});
        obs.push_back({"f_ds", [p](double t, const Operator& rho) {
                           return cplx(fidelity_dark(DensityMatrix(rho), p, t).maximized, 0.0);
                       }});
        obs.push_back({"f_ds_raw", [p](double t, const Operator& rho) {
                           return cplx(fidelity_dark(DensityMatrix(rho), p, t).raw, 0.0);
                       }});
        if (opts.progress) opts.progress("fig4b", 0, 1);
        Trajectory traj = evolve(problem, initial_state(p), 0.0, spec.t_final, obs, spec.step, spec.record_interval);
        if (opts.progress) opts.progress("fig4b", 1, 1);
        r.tables.emplace_back("fig4b", fig4b_series(traj));
        CsvTable spectrum = fig4b_spectrum(traj, spec);
        const double dc = std::stod(spectrum.rows().front()[1]);

        // Settled fidelity: mean over the last tenth of the record.
        const std::size_t n = traj.times.size();
        const std::size_t from = n - std::max<std::size_t>(1, n / 10);
        double f_sum = 0.0;
        double f_min = 1.0;
        for (std::size_t k = from; k < n; ++k) {
            f_sum += traj.records[1][k].real();
            f_min = std::min(f_min, traj.records[1][k].real());
        }
        r.summary = {{"f_ds_settled_mean", f_sum / static_cast<double>(n - from)},
                     {"f_ds_settled_min", f_min},
                     {"f_ds_final", traj.records[1].back().real()},
                     {"f_ds_raw_final", traj.records[2].back().real()},
                     {"im_sigma_minus_dc", dc},
                     {"spectrum_window_us", {spec.spectrum_start, spec.t_final}},
                     {"parameters", to_json(p)},
                     {"t_final_us", spec.t_final},
                     {"record_interval_us", spec.record_interval},
                     {"stats", to_json(traj.stats)}};
        r.tables.emplace_back("fig4b_spectrum", std::move(spectrum));
        r.trajectory = std::move(traj);
        r.all_converged = r.trajectory->stats.renormalizations == 0;
        if (!r.all_converged) r.warnings.push_back("trace renormalization occurred during the fig4b evolution");
    } else {
        for (auto& ns : preset_sweeps(name, opts)) {
            if (opts.progress) {
                const std::string stage = name == ns.label ? name : name + " " + ns.label;
                ns.options.progress = [&opts, stage](std::size_t d, std::size_t total) { opts.progress(stage, d, total); };
            }
            SweepTable st = sweep(ns.spec, ns.options);
            r.all_converged = r.all_converged && st.all_converged();
            r.sweeps.emplace_back(ns.label, std::move(st));
        }
        if (name == "fig4a") {
            r.tables.emplace_back("fig4a", fig4a_table(r.sweeps.front().second));
        } else if (name == "fig5") {
            r.tables.emplace_back("fig5", fig5_table(r.sweeps));
        } else if (name == "fig6a" || name == "fig6b") {
            r.tables.emplace_back(name, fig6_table(r.sweeps.front().second, name == "fig6a"));
        } else {
            r.tables.emplace_back(name, fig78_table(r.sweeps, name == "fig8"));
        }
        nlohmann::json sweeps = nlohmann::json::array();
        for (const auto& ns : preset_sweeps(name, opts)) {
            nlohmann::json j = to_json(ns.spec);
            j["label"] = ns.label;
            sweeps.push_back(j);
        }
        nlohmann::json points = nlohmann::json::object();
        std::size_t failed = 0;
        std::size_t unconverged = 0;
        for (const auto& [label, st] : r.sweeps) {
            points[label] = point_params(st);
            for (const auto& p : st.points) {
                if (!p.ok) {
                    ++failed;
                    r.warnings.push_back(label + ": point failed: " + p.error);
                } else if (!p.converged || !p.truncation_converged) {
                    ++unconverged;
                }
            }
        }
        r.summary = {{"sweeps", sweeps},
                     {"resolved_points", points},
                     {"failed_points", failed},
                     {"unconverged_points", unconverged}};
    }
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<OutputFile> preset_files(const PresetResult& result, bool json_data, bool deterministic, bool plot) {
    std::vector<OutputFile> files;
    nlohmann::json hashes = nlohmann::json::object();
    for (const auto& [stem, table] : result.tables) {
        OutputFile f;
        if (json_data) {
            f.name = stem + ".json";
            f.bytes = dump_json(table.to_json());
        } else {
            f.name = stem + ".csv";
            f.bytes = table.to_csv();
        }
        hashes[f.name] = git_blob_sha1(f.bytes);
        files.push_back(std::move(f));
    }
    nlohmann::json meta = {{"preset", result.name},
                           {"files", hashes},
                           {"all_converged", result.all_converged},
                           {"threads", result.threads},
                           {"kernels", std::string(simd::active_kernels().name)},
                           {"deterministic", deterministic},
                           {"summary", result.summary},
                           {"warnings", result.warnings}};
    if (!deterministic) {
        meta["runtime_s"] = result.runtime_s;
        nlohmann::json walls = nlohmann::json::object();
        for (const auto& [label, st] : result.sweeps) {
            nlohmann::json w = nlohmann::json::array();
            for (const auto& p : st.points) w.push_back(p.wall_time);
            walls[label] = w;
        }
        meta["point_wall_times_s"] = walls;
    }
    files.push_back({result.name + ".meta.json", dump_json(meta)});
    if (plot) files.push_back({result.name + ".plot.json", dump_json(plot_description(result.name, result))});
    return files;
}

std::vector<std::string> write_files(const std::vector<OutputFile>& files, const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& f : files) {
        const std::string path = (std::filesystem::path(dir) / f.name).string();
        write_file(path, f.bytes);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace lceit::cli
