#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nwkit/fitting.hpp"
#include "nwkit/gpa.hpp"
#include "nwkit/tlm.hpp"

namespace nwkit::io {

// Trace CSV: `# key=value` metadata comments (bias_mV, temperature_K,
// n_parallel, label), a `B_T,G_S` header, then numeric rows in SI units.
fitting::MagnetoTrace parse_trace_csv(const std::filesystem::path& path);
void write_trace_csv(const std::filesystem::path& path, const fitting::MagnetoTrace& trace);

// GPA1 raster: text line `GPA1 <rows> <cols> <pixel_size_nm>` followed by
// rows*cols little-endian IEEE-754 float32, row-major. Bit-exact round trip.
gpa::Raster parse_raster(const std::filesystem::path& path);
void write_raster(const std::filesystem::path& path, const gpa::Raster& raster);

// TLM CSV: `# key=value` metadata (n_parallel, temperature_K, label),
// a `L_m,R_ohm` header, then numeric rows.
tlm::TlmDataset parse_tlm_csv(const std::filesystem::path& path);
void write_tlm_csv(const std::filesystem::path& path, const tlm::TlmDataset& data);

// Two-column numeric text with `#` comments; every emitted table reparses
// through read_table.
void write_table(const std::filesystem::path& path,
                 const std::vector<std::pair<double, double>>& rows, const std::string& comment);
std::vector<std::pair<double, double>> read_table(const std::filesystem::path& path);

// key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_key_value(const std::filesystem::path& path);

// Shortest decimal form that round-trips the exact double.
std::string format_double(double value);

double parse_double(const std::string& text, long line_for_errors = -1);
long parse_long(const std::string& text, long line_for_errors = -1);

} // namespace nwkit::io
