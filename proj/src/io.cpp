#include "nwkit/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nwkit/errors.hpp"

// The GPA1 payload is little-endian float32 on disk.
static_assert(std::endian::native == std::endian::little,
              "raster i/o assumes a little-endian host");

namespace nwkit::io {

namespace {

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in)
        throw ParseError("cannot open file: " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out)
        throw ParseError("cannot open file for writing: " + path.string());
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// `# key=value` metadata comment; returns false for plain comments.
bool parse_meta_line(const std::string& line, std::string& key, std::string& value) {
    std::string body = trim(line.substr(1));
    const auto eq = body.find('=');
    if (eq == std::string::npos)
        return false;
    key = trim(body.substr(0, eq));
    value = trim(body.substr(eq + 1));
    return !key.empty();
}

void split_two_columns(const std::string& line, long line_no, char sep, std::string& a,
                       std::string& b) {
    const auto pos = line.find(sep);
    if (pos == std::string::npos)
        throw ParseError("expected two columns", line_no);
    a = trim(line.substr(0, pos));
    b = trim(line.substr(pos + 1));
    if (a.empty() || b.empty())
        throw ParseError("expected two columns", line_no);
    if (b.find(sep) != std::string::npos)
        throw ParseError("expected exactly two columns", line_no);
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double parse_double(const std::string& text, long line_for_errors) {
    const std::string t = trim(text);
    if (t.empty())
        throw ParseError("empty numeric field", line_for_errors);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ParseError("invalid number '" + t + "'", line_for_errors);
    return v;
}

long parse_long(const std::string& text, long line_for_errors) {
    const std::string t = trim(text);
    if (t.empty())
        throw ParseError("empty integer field", line_for_errors);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
        throw ParseError("invalid integer '" + t + "'", line_for_errors);
    return v;
}

fitting::MagnetoTrace parse_trace_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in);
    fitting::MagnetoTrace trace;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t[0] == '#') {
            std::string key, value;
            if (!parse_meta_line(t, key, value))
                continue;
            if (key == "bias_mV")
                trace.bias_mV = parse_double(value, line_no);
            else if (key == "temperature_K")
                trace.temperature_K = parse_double(value, line_no);
            else if (key == "n_parallel")
                trace.n_parallel = static_cast<int>(parse_long(value, line_no));
            else if (key == "label")
                trace.label = value;
            // Unknown keys are ignored.
            continue;
        }
        if (!header_seen) {
            std::string a, b;
            split_two_columns(t, line_no, ',', a, b);
            if (a != "B_T" || b != "G_S")
                throw ParseError("expected header 'B_T,G_S', got '" + t + "'", line_no);
            header_seen = true;
            continue;
        }
        std::string a, b;
        split_two_columns(t, line_no, ',', a, b);
        trace.field.push_back(parse_double(a, line_no));
        trace.conductance.push_back(parse_double(b, line_no));
    }
    if (!header_seen)
        throw ParseError("missing 'B_T,G_S' column header in " + path.string());
    trace.validate();
    return trace;
}

void write_trace_csv(const std::filesystem::path& path, const fitting::MagnetoTrace& trace) {
    std::ofstream out = open_output(path, std::ios::out);
    if (!trace.label.empty())
        out << "# label=" << trace.label << "\n";
    out << "# bias_mV=" << format_double(trace.bias_mV) << "\n";
    out << "# temperature_K=" << format_double(trace.temperature_K) << "\n";
    out << "# n_parallel=" << trace.n_parallel << "\n";
    out << "B_T,G_S\n";
    for (std::size_t i = 0; i < trace.field.size(); ++i)
        out << format_double(trace.field[i]) << "," << format_double(trace.conductance[i])
            << "\n";
}

gpa::Raster parse_raster(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in | std::ios::binary);
    std::string header;
    if (!std::getline(in, header))
        throw ParseError("empty raster file: " + path.string());
    std::istringstream hs(header);
    std::string magic;
    long rows = 0, cols = 0;
    std::string pixel_text;
    if (!(hs >> magic >> rows >> cols >> pixel_text) || magic != "GPA1")
        throw ParseError("bad raster header, expected 'GPA1 <rows> <cols> <pixel_size_nm>'", 1);
    std::string extra;
    if (hs >> extra)
        throw ParseError("trailing fields in raster header", 1);
    if (rows <= 0 || cols <= 0)
        throw ParseError("raster dimensions must be positive", 1);
    const double pixel_size = parse_double(pixel_text, 1);
    if (!(pixel_size > 0.0))
        throw ParseError("pixel_size_nm must be positive", 1);

    const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    std::vector<float> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    const auto got = static_cast<std::size_t>(in.gcount()) / sizeof(float);
    if (got != count)
        throw ParseError("truncated raster payload: expected " + std::to_string(count) +
                         " floats, found " + std::to_string(got));
    char probe;
    if (in.read(&probe, 1) && in.gcount() == 1)
        throw ParseError("raster payload longer than header promises");

    gpa::Raster raster;
    raster.rows = static_cast<int>(rows);
    raster.cols = static_cast<int>(cols);
    raster.pixel_size_nm = pixel_size;
    raster.values.assign(payload.begin(), payload.end());
    for (double v : raster.values)
        if (!std::isfinite(v))
            throw ParseError("raster payload contains non-finite values");
    return raster;
}

void write_raster(const std::filesystem::path& path, const gpa::Raster& raster) {
    if (raster.rows <= 0 || raster.cols <= 0 ||
        raster.values.size() != static_cast<std::size_t>(raster.rows) * raster.cols)
        throw DomainError("raster dimensions do not match its values");
    if (!(raster.pixel_size_nm > 0.0))
        throw DomainError("pixel_size_nm must be positive");
    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
    out << "GPA1 " << raster.rows << " " << raster.cols << " "
        << format_double(raster.pixel_size_nm) << "\n";
    std::vector<float> payload(raster.values.begin(), raster.values.end());
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(float)));
}

tlm::TlmDataset parse_tlm_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in);
    tlm::TlmDataset data;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t[0] == '#') {
            std::string key, value;
            if (!parse_meta_line(t, key, value))
                continue;
            if (key == "n_parallel")
                data.n_parallel = static_cast<int>(parse_long(value, line_no));
            else if (key == "temperature_K")
                data.temperature_K = parse_double(value, line_no);
            else if (key == "label")
                data.label = value;
            continue;
        }
        if (!header_seen) {
            std::string a, b;
            split_two_columns(t, line_no, ',', a, b);
            if (a != "L_m" || b != "R_ohm")
                throw ParseError("expected header 'L_m,R_ohm', got '" + t + "'", line_no);
            header_seen = true;
            continue;
        }
        std::string a, b;
        split_two_columns(t, line_no, ',', a, b);
        data.points.push_back({parse_double(a, line_no), parse_double(b, line_no)});
    }
    if (!header_seen)
        throw ParseError("missing 'L_m,R_ohm' column header in " + path.string());
    data.validate();
    return data;
}

void write_tlm_csv(const std::filesystem::path& path, const tlm::TlmDataset& data) {
    std::ofstream out = open_output(path, std::ios::out);
    if (!data.label.empty())
        out << "# label=" << data.label << "\n";
    out << "# temperature_K=" << format_double(data.temperature_K) << "\n";
    out << "# n_parallel=" << data.n_parallel << "\n";
    out << "L_m,R_ohm\n";
    for (const auto& p : data.points)
        out << format_double(p.segment_length) << "," << format_double(p.resistance) << "\n";
}

void write_table(const std::filesystem::path& path,
                 const std::vector<std::pair<double, double>>& rows, const std::string& comment) {
    std::ofstream out = open_output(path, std::ios::out);
    if (!comment.empty())
        out << "# " << comment << "\n";
    for (const auto& [x, y] : rows)
        out << format_double(x) << " " << format_double(y) << "\n";
}

std::vector<std::pair<double, double>> read_table(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        std::istringstream ss(t);
        std::string a, b, extra;
        if (!(ss >> a >> b))
            throw ParseError("expected two columns", line_no);
        if (ss >> extra)
            throw ParseError("expected exactly two columns", line_no);
        rows.emplace_back(parse_double(a, line_no), parse_double(b, line_no));
    }
    return rows;
}

std::map<std::string, std::string> parse_key_value(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in);
    std::map<std::string, std::string> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value", line_no);
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw ParseError("empty key", line_no);
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

} // namespace nwkit::io
