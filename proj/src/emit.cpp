#include "lceit/emit.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lceit/errors.hpp"

namespace lceit::cli {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    throw std::out_of_range("no CSV column '" + name + "'");
}

CsvTable& CsvTable::row() {
    rows_.emplace_back();
    rows_.back().reserve(header_.size());
    return *this;
}

CsvTable& CsvTable::add(double v) { return add(format_double(v)); }

CsvTable& CsvTable::add(std::optional<double> v) { return add(v ? format_double(*v) : std::string()); }

CsvTable& CsvTable::add(std::size_t v) { return add(std::to_string(v)); }

CsvTable& CsvTable::add(bool v) { return add(std::string(v ? "true" : "false")); }

CsvTable& CsvTable::add(const std::string& v) {
    if (rows_.empty()) throw std::logic_error("CsvTable::add before row()");
    rows_.back().push_back(v);
    return *this;
}

std::string CsvTable::to_csv() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(header_);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() != header_.size()) {
            throw DimensionError("CSV row " + std::to_string(r) + " has " + std::to_string(rows_[r].size()) +
                                 " cells, header has " + std::to_string(header_.size()));
        }
        line(rows_[r]);
    }
    return out;
}

nlohmann::json CsvTable::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rows_) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& cell : r) {
            if (cell.empty()) {
                jr.push_back(nullptr);
                continue;
            }
            if (cell == "true" || cell == "false") {
                jr.push_back(cell == "true");
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() + cell.size()) {
                jr.push_back(v);
            } else {
                jr.push_back(cell);
            }
        }
        rows.push_back(std::move(jr));
    }
    return {{"columns", header_}, {"rows", std::move(rows)}};
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> lines;
    std::vector<std::string> cur;
    std::string cell;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cur.push_back(std::move(cell));
            cell.clear();
        } else if (c == '\n') {
            cur.push_back(std::move(cell));
            cell.clear();
            lines.push_back(std::move(cur));
            cur.clear();
            any = false;
        } else if (c != '\r') {
            cell += c;
        }
    }
    if (quoted) throw DomainError("parse_csv: unterminated quoted field");
    if (any) {
        cur.push_back(std::move(cell));
        lines.push_back(std::move(cur));
    }
    if (lines.empty()) return CsvTable{};
    CsvTable t(lines.front());
    for (std::size_t r = 1; r < lines.size(); ++r) {
        t.row();
        for (auto& c : lines[r]) t.add(c);
    }
    return t;
}

CsvTable sweep_csv(const SweepTable& table) {
    std::vector<std::string> header;
    for (const auto& a : table.axis_names) header.push_back(a);
    for (const char* h : {"delta_s", "delta0", "delta", "re_r_num", "im_r_num", "re_r_analytic", "im_r_analytic",
                          "converged", "truncation_converged", "ncut", "windows", "error"}) {
        header.emplace_back(h);
    }
    CsvTable t(std::move(header));
    for (const auto& p : table.points) {
        t.row();
        for (double c : p.coords) t.add(c);
        t.add(p.delta_s).add(p.params.delta0).add(p.params.delta);
        if (p.ok) {
            t.add(p.r_num.real()).add(p.r_num.imag());
        } else {
            t.add(std::string()).add(std::string());
        }
        if (p.r_analytic) {
            t.add(p.r_analytic->real()).add(p.r_analytic->imag());
        } else {
            t.add(std::string()).add(std::string());
        }
        t.add(p.ok && p.converged).add(p.ok && p.truncation_converged);
        t.add(p.ok ? std::to_string(p.ncut_used) : std::string());
        t.add(p.ok ? std::to_string(p.windows) : std::string());
        t.add(p.error);
    }
    return t;
}

CsvTable trajectory_csv(const Trajectory& traj) {
    std::vector<std::string> header{"t_us"};
    for (const auto& n : traj.names) {
        header.push_back("re_" + n);
        header.push_back("im_" + n);
    }
    CsvTable t(std::move(header));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        t.row().add(traj.times[k]);
        for (const auto& rec : traj.records) t.add(rec[k].real()).add(rec[k].imag());
    }
    return t;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string git_blob_sha1(const std::string& content) {
    const std::string head = "blob " + std::to_string(content.size()) + std::string(1, '\0');
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("git_blob_sha1: EVP_MD_CTX_new failed");
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, head.data(), head.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, md, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("git_blob_sha1: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

void write_file(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(path);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw IoError("error writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return ss.str();
}

nlohmann::json to_json(const SystemParams& p) {
    return {{"omega_m", p.omega_m},   {"delta0", p.delta0},       {"g0", p.g0},
            {"omega_g", p.omega_g},   {"omega_drv", p.omega_drv}, {"omega_pr", p.omega_pr},
            {"delta", p.delta},       {"gamma_d", p.gamma_d},     {"gamma_phi", p.gamma_phi},
            {"kappa", p.kappa},       {"n_th", p.n_th},           {"ncut", p.ncut},
            {"n_rate", p.n_rate},     {"delta_s", p.sideband_detuning()}};
}

nlohmann::json to_json(const SweepSpec& s) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : s.axes) axes.push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}});
    nlohmann::json j = {{"base", to_json(s.base)},
                        {"axes", axes},
                        {"probe", s.probe == ProbeMode::resonant ? "resonant" : "fixed"},
                        {"probe_offset", s.probe_offset},
                        {"threads", s.threads}};
    j["delta_s"] = s.delta_s ? nlohmann::json(*s.delta_s) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const EvolveStats& s) {
    return {{"steps", s.steps},
            {"rejected_steps", s.rejected_steps},
            {"rhs_evaluations", s.rhs_evaluations},
            {"renormalizations", s.renormalizations},
            {"max_trace_drift", s.max_trace_drift},
            {"dt", s.dt},
            {"ncut", s.ncut},
            {"integrator", s.integrator},
            {"kernels", s.kernels}};
}

}  // namespace lceit::cli
