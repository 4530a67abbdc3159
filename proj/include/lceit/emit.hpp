#pragma once

// Byte-stable serialization: CSV tables, JSON documents and content hashes.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lceit/lindblad.hpp"
#include "lceit/spectroscopy.hpp"

namespace lceit::cli {

/// %.17g; non-finite values become the empty field.
std::string format_double(double v);
/// Quotes a field when it contains a comma, quote, CR or LF; inner quotes are doubled.
std::string csv_field(const std::string& s);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header = {});

    [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
    [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t column(const std::string& name) const;  // throws std::out_of_range

    /// Starts a new row; cells are appended with the add* calls.
    CsvTable& row();
    CsvTable& add(double v);
    CsvTable& add(std::optional<double> v);  // absent -> empty field
    CsvTable& add(std::size_t v);
    CsvTable& add(bool v);
    CsvTable& add(const std::string& v);

    /// Header line plus one line per row, '\n' terminated. Throws DimensionError on ragged rows.
    [[nodiscard]] std::string to_csv() const;
    /// {"columns": [...], "rows": [[...], ...]} with numbers as JSON numbers, empty fields as null.
    [[nodiscard]] nlohmann::json to_json() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Parses a CSV produced by to_csv (RFC-4180 quoting).
CsvTable parse_csv(const std::string& text);

/// Generic sweep table: one column per axis, then resolved detunings, reflection,
/// overlay, convergence flags and the error text of failed points.
CsvTable sweep_csv(const SweepTable& table);

/// t_us followed by re_/im_ columns per observable.
CsvTable trajectory_csv(const Trajectory& traj);

/// Indented JSON with sorted keys and a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// SHA-1 of "blob <size>\0" + content, lowercase hex (git object id).
std::string git_blob_sha1(const std::string& content);

/// Writes bytes to path, creating parent directories. Throws IoError naming the path.
void write_file(const std::string& path, const std::string& bytes);
/// Reads a whole file. Throws IoError naming the path.
std::string read_file(const std::string& path);

nlohmann::json to_json(const SystemParams& p);
nlohmann::json to_json(const SweepSpec& s);
nlohmann::json to_json(const EvolveStats& s);

}  // namespace lceit::cli
