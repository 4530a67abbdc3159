#include "lceit/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lceit/errors.hpp"
#include "lceit/presets.hpp"

namespace lceit::cli {

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

template <class E>
struct EnumTable {
    std::vector<std::pair<std::string, E>> entries;

    [[nodiscard]] const std::string& name(E v) const {
        for (const auto& [n, e] : entries) {
            if (e == v) return n;
        }
        throw std::logic_error("enum value without a name");
    }
    [[nodiscard]] std::string choices() const {
        std::string s;
        for (const auto& [n, e] : entries) s += (s.empty() ? "" : "|") + n;
        return s;
    }
};

const EnumTable<Mode> kModes{{{"evolve", Mode::evolve},
                              {"sweep", Mode::sweep},
                              {"analytic", Mode::analytic},
                              {"device", Mode::device},
                              {"preset", Mode::preset}}};
const EnumTable<OutputFormat> kFormats{{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}};
const EnumTable<ProbeMode> kProbes{{{"fixed", ProbeMode::fixed}, {"resonant", ProbeMode::resonant}}};
const EnumTable<TruncationCheck> kChecks{{{"every_point", TruncationCheck::every_point},
                                          {"representative", TruncationCheck::representative},
                                          {"off", TruncationCheck::off}}};
const EnumTable<FrameChoice> kFrames{{{"drive", FrameChoice::drive}, {"interaction", FrameChoice::interaction}}};
const EnumTable<Integrator> kIntegrators{{{"rk4", Integrator::rk4}, {"dopri45", Integrator::dopri45}}};
const EnumTable<InitialState> kInitial{{{"ground", InitialState::ground}, {"excited", InitialState::excited}}};
const EnumTable<AnalyticFormula> kFormulas{{{"single_plus", AnalyticFormula::single_plus},
                                            {"single_minus", AnalyticFormula::single_minus},
                                            {"pm_plus", AnalyticFormula::pm_plus},
                                            {"pm_minus", AnalyticFormula::pm_minus},
                                            {"two_color", AnalyticFormula::two_color}}};
const EnumTable<device::GapExponentEnergy> kExponents{
    {{"ej0", device::GapExponentEnergy::ej0}, {"e_prime", device::GapExponentEnergy::e_prime}}};
const EnumTable<SensitivityKind> kSensitivities{
    {{"transmon", SensitivityKind::transmon}, {"flux", SensitivityKind::flux}}};

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Mark& m, const std::string& msg) const {
        const std::size_t line = m.line >= 0 ? static_cast<std::size_t>(m.line) + 1 : 0;
        const std::size_t col = m.column >= 0 ? static_cast<std::size_t>(m.column) + 1 : 0;
        throw ConfigError(source_, line, col, msg);
    }

    [[nodiscard]] std::string scalar(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) fail(n.Mark(), "'" + key + "' must be a scalar");
        return n.Scalar();
    }

    double number(const YAML::Node& n, const std::string& key) const {
        const std::string s = scalar(n, key);
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
            fail(n.Mark(), "'" + key + "' expects a number, got '" + s + "'");
        }
        if (!std::isfinite(v)) fail(n.Mark(), "'" + key + "' must be finite");
        return v;
    }

    std::size_t count(const YAML::Node& n, const std::string& key) const {
        const std::string s = scalar(n, key);
        const bool digits = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
        if (!digits || s.size() > 12) fail(n.Mark(), "'" + key + "' expects a non-negative integer, got '" + s + "'");
        return static_cast<std::size_t>(std::stoull(s));
    }

    bool boolean(const YAML::Node& n, const std::string& key) const {
        const std::string s = scalar(n, key);
        if (s == "true") return true;
        if (s == "false") return false;
        fail(n.Mark(), "'" + key + "' expects true or false, got '" + s + "'");
    }

    template <class E>
    E choice(const YAML::Node& n, const std::string& key, const EnumTable<E>& table) const {
        const std::string s = scalar(n, key);
        for (const auto& [name, v] : table.entries) {
            if (name == s) return v;
        }
        fail(n.Mark(), "'" + key + "' must be one of " + table.choices() + ", got '" + s + "'");
    }

    using Handler = std::function<void(const YAML::Node& value, const std::string& key)>;

    /// Dispatches every key of a mapping to its handler; unknown and duplicate keys fail.
    /// Returns the mark of each key that was present.
    std::map<std::string, YAML::Mark> section(const YAML::Node& node, const std::string& name,
                                              const std::map<std::string, Handler>& handlers) const {
        if (!node.IsMap()) fail(node.Mark(), "section '" + name + "' must be a mapping");
        std::map<std::string, YAML::Mark> seen;
        for (auto it = node.begin(); it != node.end(); ++it) {
            const std::string key = scalar(it->first, name + " key");
            if (seen.count(key)) fail(it->first.Mark(), "duplicate key '" + key + "' in section '" + name + "'");
            const auto h = handlers.find(key);
            if (h == handlers.end()) {
                std::string known;
                for (const auto& [k, _] : handlers) known += (known.empty() ? "" : ", ") + k;
                fail(it->first.Mark(), "unknown key '" + key + "' in section '" + name + "' (known: " + known + ")");
            }
            seen.emplace(key, it->first.Mark());
            h->second(it->second, name + "." + key);
        }
        return seen;
    }

    /// Runs check(); a DomainError/DimensionError is reported at the key its message names,
    /// or at fallback.
    void checked(const std::function<void()>& check, const std::map<std::string, YAML::Mark>& keys,
                 const YAML::Mark& fallback) const {
        try {
            check();
        } catch (const std::logic_error& e) {
            const std::string msg = e.what();
            YAML::Mark at = fallback;
            std::size_t best = std::string::npos;
            for (const auto& [k, m] : keys) {
                const auto pos = msg.find(k);
                if (pos != std::string::npos && pos < best) {
                    best = pos;
                    at = m;
                }
            }
            fail(at, msg);
        }
    }

private:
    std::string source_;
};

YAML::Mark mark_of(const std::map<std::string, YAML::Mark>& keys, const std::string& k, const YAML::Mark& fallback) {
    const auto it = keys.find(k);
    return it == keys.end() ? fallback : it->second;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const std::vector<std::string>& observable_names() {
    static const std::vector<std::string> names = {"sigma_minus", "sigma_z", "sigma_x", "n", "purity", "trace",
                                                   "f_ds", "f_ds_raw"};
    return names;
}

RunConfig parse_config(std::string_view text, const std::string& source) {
    const Reader rd(source);
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        rd.fail(e.mark, e.msg);
    }
    if (!root.IsMap()) rd.fail(root.Mark(), "the document must be a mapping of sections");

    RunConfig cfg;
    const YAML::Mark top = root.Mark();
    std::map<std::string, YAML::Node> sections;
    std::map<std::string, YAML::Mark> section_marks;
    static const std::set<std::string> known = {"run",   "system",     "device", "sweep",
                                                "steady", "truncation", "evolve", "analytic"};
    for (auto it = root.begin(); it != root.end(); ++it) {
        const std::string name = rd.scalar(it->first, "section name");
        if (!known.count(name)) rd.fail(it->first.Mark(), "unknown section '" + name + "'");
        if (sections.count(name)) rd.fail(it->first.Mark(), "duplicate section '" + name + "'");
        sections.emplace(name, it->second);
        section_marks.emplace(name, it->first.Mark());
    }

    // run
    if (!sections.count("run")) rd.fail(top, "missing required section 'run'");
    const auto run_keys = rd.section(
        sections["run"], "run",
        {{"mode", [&](const YAML::Node& v, const std::string& k) { cfg.mode = rd.choice(v, k, kModes); }},
         {"preset", [&](const YAML::Node& v, const std::string& k) { cfg.preset = rd.scalar(v, k); }},
         {"output", [&](const YAML::Node& v, const std::string& k) { cfg.output = rd.scalar(v, k); }},
         {"format", [&](const YAML::Node& v, const std::string& k) { cfg.format = rd.choice(v, k, kFormats); }},
         {"threads", [&](const YAML::Node& v, const std::string& k) { cfg.threads = rd.count(v, k); }},
         {"deterministic", [&](const YAML::Node& v, const std::string& k) { cfg.deterministic = rd.boolean(v, k); }},
         {"plot", [&](const YAML::Node& v, const std::string& k) { cfg.plot = rd.boolean(v, k); }},
         {"stretch", [&](const YAML::Node& v, const std::string& k) { cfg.stretch = rd.boolean(v, k); }}});
    const YAML::Mark run_mark = section_marks["run"];
    if (!run_keys.count("mode")) rd.fail(run_mark, "missing required field 'run.mode'");
    if (cfg.threads == 0) rd.fail(mark_of(run_keys, "threads", run_mark), "run.threads must be >= 1");
    if (cfg.output.empty()) rd.fail(mark_of(run_keys, "output", run_mark), "run.output must not be empty");
    if (cfg.mode == Mode::preset) {
        if (!run_keys.count("preset")) rd.fail(run_mark, "missing required field 'run.preset' for mode preset");
        const auto& names = preset_names();
        if (std::find(names.begin(), names.end(), cfg.preset) == names.end()) {
            std::string list;
            for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
            rd.fail(mark_of(run_keys, "preset", run_mark), "unknown preset '" + cfg.preset + "' (known: " + list + ")");
        }
    } else if (run_keys.count("preset")) {
        rd.fail(run_keys.at("preset"), "run.preset is only valid with mode preset");
    }

    // system
    if (sections.count("system")) {
        SystemParams& p = cfg.system;
        auto num = [&](double& field) {
            return [&rd, &field](const YAML::Node& v, const std::string& k) { field = rd.number(v, k); };
        };
        const auto keys = rd.section(
            sections["system"], "system",
            {{"omega_m", num(p.omega_m)},     {"delta0", num(p.delta0)},       {"g0", num(p.g0)},
             {"omega_g", num(p.omega_g)},     {"omega_drv", num(p.omega_drv)}, {"omega_pr", num(p.omega_pr)},
             {"delta", num(p.delta)},         {"gamma_d", num(p.gamma_d)},     {"gamma_phi", num(p.gamma_phi)},
             {"kappa", num(p.kappa)},         {"n_th", num(p.n_th)},           {"n_rate", num(p.n_rate)},
             {"ncut", [&](const YAML::Node& v, const std::string& k) { p.ncut = rd.count(v, k); }},
             {"delta_s", [&](const YAML::Node& v, const std::string& k) { cfg.delta_s = rd.number(v, k); }}});
        const YAML::Mark sm = section_marks["system"];
        if (keys.count("delta_s") && keys.count("delta0")) {
            rd.fail(keys.at("delta_s"), "system.delta_s and system.delta0 are exclusive; delta0 is derived from delta_s");
        }
        rd.checked([&] { p.validate(); }, keys, sm);
        if (cfg.delta_s) {
            rd.checked([&] { p = with_sideband_detuning(p, *cfg.delta_s); }, {{"delta_s", keys.at("delta_s")}},
                       keys.at("delta_s"));
        }
    }

    // device
    if (sections.count("device")) {
        auto& d = cfg.device;
        auto& dp = d.params;
        auto num = [&](double& field) {
            return [&rd, &field](const YAML::Node& v, const std::string& k) { field = rd.number(v, k); };
        };
        const auto keys = rd.section(
            sections["device"], "device",
            {{"ej_sum", num(dp.ej_sum)},
             {"ej0", num(dp.ej0)},
             {"ec", num(dp.ec)},
             {"d0", num(dp.d0)},
             {"phi_minus", num(dp.phi_minus)},
             {"b_field", num(dp.b_field)},
             {"xi", num(dp.xi)},
             {"length", num(dp.length)},
             {"mass", num(dp.mass)},
             {"omega_m", num(dp.omega_m)},
             {"phase_guard", num(dp.phase_guard)},
             {"alpha", num(d.alpha)},
             {"convention", num(d.convention)},
             {"gap_exponent",
              [&](const YAML::Node& v, const std::string& k) { d.gap_exponent = rd.choice(v, k, kExponents); }},
             {"sensitivity",
              [&](const YAML::Node& v, const std::string& k) { d.sensitivity = rd.choice(v, k, kSensitivities); }}});
        const YAML::Mark dm = section_marks["device"];
        rd.checked([&] { dp.validate(); }, keys, dm);
        if (!(d.alpha > 0.5 && d.alpha < 1.0)) rd.fail(mark_of(keys, "alpha", dm), "device.alpha must lie in (0.5, 1)");
        if (!(d.convention > 0.0)) rd.fail(mark_of(keys, "convention", dm), "device.convention must be positive");
        if (dp.b_field <= 0.0 || dp.xi <= 0.0 || dp.length <= 0.0) {
            rd.fail(dm, "device.b_field, device.xi and device.length must be positive");
        }
    }

    // steady
    if (sections.count("steady")) {
        auto& s = cfg.steady;
        auto num = [&](double& field) {
            return [&rd, &field](const YAML::Node& v, const std::string& k) { field = rd.number(v, k); };
        };
        auto cnt = [&](std::size_t& field) {
            return [&rd, &field](const YAML::Node& v, const std::string& k) { field = rd.count(v, k); };
        };
        const auto keys = rd.section(
            sections["steady"], "steady",
            {{"transient", num(s.transient)},
             {"window", num(s.window)},
             {"min_window", num(s.min_window)},
             {"max_window", num(s.max_window)},
             {"min_windows", cnt(s.min_windows)},
             {"max_windows", cnt(s.max_windows)},
             {"rel_tol", num(s.rel_tol)},
             {"abs_tol", num(s.abs_tol)},
             {"tail_check", [&](const YAML::Node& v, const std::string& k) { s.tail_check = rd.boolean(v, k); }},
             {"frame", [&](const YAML::Node& v, const std::string& k) { s.frame = rd.choice(v, k, kFrames); }},
             {"start_excited",
              [&](const YAML::Node& v, const std::string& k) { s.start_excited = rd.boolean(v, k); }},
             {"dt", num(s.step.dt)}});
        const YAML::Mark m = section_marks["steady"];
        auto need = [&](bool ok, const std::string& key, const std::string& msg) {
            if (!ok) rd.fail(mark_of(keys, key, m), msg);
        };
        need(s.transient >= 0.0, "transient", "steady.transient must be >= 0");
        need(s.window >= 0.0, "window", "steady.window must be >= 0");
        need(s.min_window > 0.0, "min_window", "steady.min_window must be positive");
        need(s.max_window >= s.min_window, "max_window", "steady.max_window must be >= steady.min_window");
        need(s.min_windows >= 2, "min_windows", "steady.min_windows must be >= 2");
        need(s.max_windows >= s.min_windows, "max_windows", "steady.max_windows must be >= steady.min_windows");
        need(s.rel_tol > 0.0, "rel_tol", "steady.rel_tol must be positive");
        need(s.abs_tol >= 0.0, "abs_tol", "steady.abs_tol must be >= 0");
        need(s.step.dt >= 0.0, "dt", "steady.dt must be >= 0");
    }

    // truncation
    if (sections.count("truncation")) {
        auto& t = cfg.truncation;
        const auto keys = rd.section(
            sections["truncation"], "truncation",
            {{"enabled", [&](const YAML::Node& v, const std::string& k) { t.enabled = rd.boolean(v, k); }},
             {"start_ncut", [&](const YAML::Node& v, const std::string& k) { t.start_ncut = rd.count(v, k); }},
             {"max_ncut", [&](const YAML::Node& v, const std::string& k) { t.max_ncut = rd.count(v, k); }},
             {"growth_check", [&](const YAML::Node& v, const std::string& k) { t.growth_check = rd.number(v, k); }},
             {"tol", [&](const YAML::Node& v, const std::string& k) { t.tol = rd.number(v, k); }},
             {"check", [&](const YAML::Node& v, const std::string& k) {
                  cfg.truncation_check = rd.choice(v, k, kChecks);
              }}});
        const YAML::Mark m = section_marks["truncation"];
        if (t.start_ncut != 0 && t.start_ncut < 4) {
            rd.fail(mark_of(keys, "start_ncut", m), "truncation.start_ncut must be 0 (automatic) or >= 4");
        }
        if (t.max_ncut < 4) rd.fail(mark_of(keys, "max_ncut", m), "truncation.max_ncut must be >= 4");
        if (!(t.growth_check > 1.0)) rd.fail(mark_of(keys, "growth_check", m), "truncation.growth_check must be > 1");
        if (!(t.tol > 0.0)) rd.fail(mark_of(keys, "tol", m), "truncation.tol must be positive");
    }

    // evolve
    if (sections.count("evolve")) {
        auto& e = cfg.evolve;
        auto num = [&](double& field) {
            return [&rd, &field](const YAML::Node& v, const std::string& k) { field = rd.number(v, k); };
        };
        const YAML::Mark m = section_marks["evolve"];
        const auto keys = rd.section(
            sections["evolve"], "evolve",
            {{"t_final", num(e.t_final)},
             {"record_interval", num(e.record_interval)},
             {"dt", num(e.step.dt)},
             {"atol", num(e.step.atol)},
             {"rtol", num(e.step.rtol)},
             {"integrator",
              [&](const YAML::Node& v, const std::string& k) { e.step.method = rd.choice(v, k, kIntegrators); }},
             {"frame", [&](const YAML::Node& v, const std::string& k) { e.frame = rd.choice(v, k, kFrames); }},
             {"initial", [&](const YAML::Node& v, const std::string& k) { e.initial = rd.choice(v, k, kInitial); }},
             {"observables", [&](const YAML::Node& v, const std::string& k) {
                  if (!v.IsSequence() || v.size() == 0) rd.fail(v.Mark(), "'" + k + "' must be a non-empty list");
                  e.observables.clear();
                  for (const auto& item : v) {
                      const std::string name = rd.scalar(item, k);
                      const auto& known_obs = observable_names();
                      if (std::find(known_obs.begin(), known_obs.end(), name) == known_obs.end()) {
                          rd.fail(item.Mark(), "unknown observable '" + name + "'");
                      }
                      if (std::find(e.observables.begin(), e.observables.end(), name) != e.observables.end()) {
                          rd.fail(item.Mark(), "duplicate observable '" + name + "'");
                      }
                      e.observables.push_back(name);
                  }
              }}});
        if (!(e.t_final > 0.0)) rd.fail(mark_of(keys, "t_final", m), "evolve.t_final must be positive");
        if (!(e.record_interval > 0.0)) {
            rd.fail(mark_of(keys, "record_interval", m), "evolve.record_interval must be positive");
        }
        if (e.step.dt < 0.0) rd.fail(mark_of(keys, "dt", m), "evolve.dt must be >= 0");
        if (!(e.step.atol > 0.0)) rd.fail(mark_of(keys, "atol", m), "evolve.atol must be positive");
        if (!(e.step.rtol > 0.0)) rd.fail(mark_of(keys, "rtol", m), "evolve.rtol must be positive");
    }

    // axis helper shared by sweep and analytic
    auto read_axis = [&](const YAML::Node& node, const std::string& where) {
        Axis a;
        const auto keys = rd.section(
            node, where,
            {{"name", [&](const YAML::Node& v, const std::string& k) { a.name = rd.scalar(v, k); }},
             {"start", [&](const YAML::Node& v, const std::string& k) { a.start = rd.number(v, k); }},
             {"stop", [&](const YAML::Node& v, const std::string& k) { a.stop = rd.number(v, k); }},
             {"count", [&](const YAML::Node& v, const std::string& k) { a.count = rd.count(v, k); }}});
        for (const char* req : {"name", "start", "stop", "count"}) {
            if (!keys.count(req)) rd.fail(node.Mark(), "missing required field '" + where + "." + req + "'");
        }
        if (a.count < 2) rd.fail(keys.at("count"), where + ".count must be >= 2");
        return a;
    };

    // sweep
    cfg.sweep.base = cfg.system;
    cfg.sweep.delta_s = cfg.delta_s;
    cfg.sweep.threads = cfg.threads;
    YAML::Mark axes_mark = top;
    std::map<std::string, YAML::Mark> sweep_keys;
    if (sections.count("sweep")) {
        auto& sw = cfg.sweep;
        sweep_keys = rd.section(
            sections["sweep"], "sweep",
            {{"probe", [&](const YAML::Node& v, const std::string& k) { sw.probe = rd.choice(v, k, kProbes); }},
             {"probe_offset", [&](const YAML::Node& v, const std::string& k) { sw.probe_offset = rd.number(v, k); }},
             {"axes", [&](const YAML::Node& v, const std::string& k) {
                  if (!v.IsSequence()) rd.fail(v.Mark(), "'" + k + "' must be a list of axis mappings");
                  sw.axes.clear();
                  for (std::size_t i = 0; i < v.size(); ++i) {
                      sw.axes.push_back(read_axis(v[i], k + "[" + std::to_string(i) + "]"));
                  }
              }}});
        axes_mark = mark_of(sweep_keys, "axes", section_marks["sweep"]);
        rd.checked([&] { sw.validate(); }, sweep_keys, axes_mark);
    }
    if (cfg.mode == Mode::sweep && cfg.sweep.axes.empty()) {
        rd.fail(sections.count("sweep") ? section_marks["sweep"] : top, "mode sweep requires sweep.axes");
    }

    // analytic
    if (sections.count("analytic")) {
        auto& an = cfg.analytic;
        const auto keys = rd.section(
            sections["analytic"], "analytic",
            {{"formula", [&](const YAML::Node& v, const std::string& k) { an.formula = rd.choice(v, k, kFormulas); }},
             {"axis", [&](const YAML::Node& v, const std::string& k) { an.axis = read_axis(v, k); }}});
        if (an.axis.name != "delta") {
            rd.fail(mark_of(keys, "axis", section_marks["analytic"]), "analytic.axis.name must be 'delta'");
        }
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading config file '" + path + "'");
    return parse_config(ss.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    auto kv = [&os](const std::string& key, const std::string& value) { os << "  " << key << ": " << value << "\n"; };
    auto num = [&kv](const std::string& key, double v) { kv(key, format_number(v)); };
    auto cnt = [&kv](const std::string& key, std::size_t v) { kv(key, std::to_string(v)); };
    auto flag = [&kv](const std::string& key, bool v) { kv(key, v ? "true" : "false"); };
    auto axis = [](const Axis& a) {
        return "{name: " + quoted(a.name) + ", start: " + format_number(a.start) + ", stop: " + format_number(a.stop) +
               ", count: " + std::to_string(a.count) + "}";
    };

    os << "run:\n";
    kv("mode", kModes.name(cfg.mode));
    if (cfg.mode == Mode::preset) kv("preset", quoted(cfg.preset));
    kv("output", quoted(cfg.output));
    kv("format", kFormats.name(cfg.format));
    cnt("threads", cfg.threads);
    flag("deterministic", cfg.deterministic);
    flag("plot", cfg.plot);
    flag("stretch", cfg.stretch);

    const SystemParams& p = cfg.system;
    os << "system:\n";
    num("omega_m", p.omega_m);
    if (cfg.delta_s) {
        num("delta_s", *cfg.delta_s);
    } else {
        num("delta0", p.delta0);
    }
    num("g0", p.g0);
    num("omega_g", p.omega_g);
    num("omega_drv", p.omega_drv);
    num("omega_pr", p.omega_pr);
    num("delta", p.delta);
    num("gamma_d", p.gamma_d);
    num("gamma_phi", p.gamma_phi);
    num("kappa", p.kappa);
    num("n_th", p.n_th);
    cnt("ncut", p.ncut);
    num("n_rate", p.n_rate);

    const auto& d = cfg.device;
    os << "device:\n";
    num("ej_sum", d.params.ej_sum);
    num("ej0", d.params.ej0);
    num("ec", d.params.ec);
    num("d0", d.params.d0);
    num("phi_minus", d.params.phi_minus);
    num("b_field", d.params.b_field);
    num("xi", d.params.xi);
    num("length", d.params.length);
    num("mass", d.params.mass);
    num("omega_m", d.params.omega_m);
    num("phase_guard", d.params.phase_guard);
    num("alpha", d.alpha);
    kv("gap_exponent", kExponents.name(d.gap_exponent));
    kv("sensitivity", kSensitivities.name(d.sensitivity));
    num("convention", d.convention);

    os << "sweep:\n";
    kv("probe", kProbes.name(cfg.sweep.probe));
    num("probe_offset", cfg.sweep.probe_offset);
    os << "  axes:" << (cfg.sweep.axes.empty() ? " []" : "") << "\n";
    for (const auto& a : cfg.sweep.axes) os << "    - " << axis(a) << "\n";

    const auto& s = cfg.steady;
    os << "steady:\n";
    num("transient", s.transient);
    num("window", s.window);
    num("min_window", s.min_window);
    num("max_window", s.max_window);
    cnt("min_windows", s.min_windows);
    cnt("max_windows", s.max_windows);
    num("rel_tol", s.rel_tol);
    num("abs_tol", s.abs_tol);
    flag("tail_check", s.tail_check);
    kv("frame", kFrames.name(s.frame));
    flag("start_excited", s.start_excited);
    num("dt", s.step.dt);

    const auto& t = cfg.truncation;
    os << "truncation:\n";
    flag("enabled", t.enabled);
    cnt("start_ncut", t.start_ncut);
    cnt("max_ncut", t.max_ncut);
    num("growth_check", t.growth_check);
    num("tol", t.tol);
    kv("check", kChecks.name(cfg.truncation_check));

    const auto& e = cfg.evolve;
    os << "evolve:\n";
    num("t_final", e.t_final);
    num("record_interval", e.record_interval);
    kv("integrator", kIntegrators.name(e.step.method));
    num("dt", e.step.dt);
    num("atol", e.step.atol);
    num("rtol", e.step.rtol);
    kv("frame", kFrames.name(e.frame));
    kv("initial", kInitial.name(e.initial));
    std::string obs;
    for (const auto& o : e.observables) obs += (obs.empty() ? "" : ", ") + o;
    kv("observables", "[" + obs + "]");

    os << "analytic:\n";
    kv("formula", kFormulas.name(cfg.analytic.formula));
    kv("axis", axis(cfg.analytic.axis));
    return os.str();
}

SweepOptions sweep_options(const RunConfig& cfg) {
    SweepOptions o;
    o.steady = cfg.steady;
    o.truncation = cfg.truncation;
    o.check = cfg.truncation_check;
    return o;
}

std::string to_string(Mode m) { return kModes.name(m); }
std::string to_string(OutputFormat f) { return kFormats.name(f); }
std::string to_string(AnalyticFormula f) { return kFormulas.name(f); }

std::string config_reference() {
    RunConfig defaults;
    defaults.mode = Mode::sweep;
    return "Configuration is a YAML document with the sections below. Every key is optional\n"
           "except run.mode (and run.preset in preset mode, sweep.axes in sweep mode).\n"
           "Frequencies are ordinary MHz, times us. Defaults:\n\n" +
           serialize_config(defaults) +
           "\nsystem.delta_s (optional) replaces delta0: delta0 is solved so that\n"
           "sqrt(delta0^2 + 4 omega_drv^2) - omega_m = delta_s.\n"
           "sweep.axes entries: {name, start, stop, count}; names are system fields, delta_s or\n"
           "probe_offset. The first axis varies slowest.\n"
           "Environment: LCEIT_OUTPUT_DIR prefixes relative output paths, LCEIT_THREADS sets the\n"
           "thread count (command-line flags take precedence).\n";
}

}  // namespace lceit::cli
