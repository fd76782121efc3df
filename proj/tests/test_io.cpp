#include "doctest.h"

#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "nwkit/errors.hpp"
#include "nwkit/gpa.hpp"
#include "nwkit/io.hpp"
#include "test_util.hpp"

using namespace nwkit;
using nwkit_test::TempDir;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("trace CSV round trip preserves values and metadata") {
    TempDir dir;
    fitting::MagnetoTrace trace;
    trace.field = {-2.5, -1.0, 0.0, 1.0, 2.5};
    trace.conductance = {9.1e-5, 8.7e-5, 8.25e-5, 8.7e-5, 9.1e-5};
    trace.bias_mV = 0.125;
    trace.temperature_K = 1.5;
    trace.n_parallel = 34;
    trace.label = "array A (34 NWs)";

    const auto path = dir.path / "trace.csv";
    io::write_trace_csv(path, trace);
    const fitting::MagnetoTrace back = io::parse_trace_csv(path);
    CHECK(back.field == trace.field);
    CHECK(back.conductance == trace.conductance);
    CHECK(back.bias_mV == trace.bias_mV);
    CHECK(back.temperature_K == trace.temperature_K);
    CHECK(back.n_parallel == 34);
    CHECK(back.label == trace.label);

    // Serialize -> parse is a fixed point.
    const auto path2 = dir.path / "trace2.csv";
    io::write_trace_csv(path2, back);
    CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("trace CSV errors carry line numbers") {
    TempDir dir;
    const auto path = dir.path / "bad.csv";

    SUBCASE("non-numeric cell names its line") {
        write_text(path, "# bias_mV=0\n# temperature_K=1.5\n# n_parallel=1\nB_T,G_S\n"
                         "-1,1e-5\n-0.5,1.1e-5\nabc,1.2e-5\n0.5,1.1e-5\n1,1e-5\n");
        try {
            io::parse_trace_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 7);
            CHECK(std::string(e.what()).find("line 7") != std::string::npos);
        }
    }

    SUBCASE("missing header") {
        write_text(path, "# n_parallel=2\n");
        CHECK_THROWS_AS(io::parse_trace_csv(path), ParseError);
    }

    SUBCASE("wrong header") {
        write_text(path, "field,cond\n1,2\n");
        CHECK_THROWS_AS(io::parse_trace_csv(path), ParseError);
    }

    SUBCASE("one-column row") {
        write_text(path, "B_T,G_S\n-1,1e-5\n-0.5\n0,1e-5\n0.5,1e-5\n1,1e-5\n");
        CHECK_THROWS_AS(io::parse_trace_csv(path), ParseError);
    }

    SUBCASE("too few rows violates the trace invariant") {
        write_text(path, "B_T,G_S\n-1,1e-5\n0,1e-5\n1,1e-5\n");
        CHECK_THROWS_AS(io::parse_trace_csv(path), DomainError);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(io::parse_trace_csv(dir.path / "nope.csv"), ParseError);
    }
}

TEST_CASE("raster round trip is bit exact") {
    TempDir dir;
    std::vector<gpa::LatticeRegion> regions{{{0, 0, 32, 32}, 0.4, 30.0, 1.0, 0.0}};
    const gpa::Raster image = gpa::synthesize_lattice(32, 32, 0.05, regions, 0.2, 9);

    const auto path = dir.path / "image.gpa1";
    io::write_raster(path, image);
    const gpa::Raster back = io::parse_raster(path);
    CHECK(back.rows == 32);
    CHECK(back.cols == 32);
    CHECK(back.pixel_size_nm == image.pixel_size_nm);

    const auto path2 = dir.path / "image2.gpa1";
    io::write_raster(path2, back);
    CHECK(read_bytes(path) == read_bytes(path2));

    // Values survive the float32 narrowing exactly once.
    const gpa::Raster back2 = io::parse_raster(path2);
    CHECK(back.values == back2.values);
}

TEST_CASE("raster parse errors") {
    TempDir dir;
    const auto path = dir.path / "bad.gpa1";

    SUBCASE("bad magic") {
        write_text(path, "GPAX 4 4 0.05\n");
        CHECK_THROWS_AS(io::parse_raster(path), ParseError);
    }

    SUBCASE("nonpositive pixel size") {
        write_text(path, "GPA1 4 4 -0.05\n");
        CHECK_THROWS_AS(io::parse_raster(path), ParseError);
    }

    SUBCASE("truncated payload reports expected vs found") {
        std::vector<gpa::LatticeRegion> regions{{{0, 0, 32, 32}, 0.4, 0.0, 1.0, 0.0}};
        const gpa::Raster image = gpa::synthesize_lattice(32, 32, 0.05, regions, 0.0, 0);
        io::write_raster(path, image);
        const std::string bytes = read_bytes(path);
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 8));
        out.close();
        try {
            io::parse_raster(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string what = e.what();
            CHECK(what.find("expected 1024 floats, found 1022") != std::string::npos);
        }
    }

    SUBCASE("non-finite payload") {
        std::ofstream out(path, std::ios::binary);
        out << "GPA1 2 2 0.05\n";
        const float values[4] = {1.0f, std::numeric_limits<float>::quiet_NaN(), 0.5f, 2.0f};
        out.write(reinterpret_cast<const char*>(values), sizeof(values));
        out.close();
        CHECK_THROWS_AS(io::parse_raster(path), ParseError);
    }
}

TEST_CASE("two-column tables reparse to the written values") {
    TempDir dir;
    const auto path = dir.path / "table.dat";
    std::vector<std::pair<double, double>> rows{
        {0.0, -8.058015399058195e-6}, {0.5, -7.1e-6}, {1.0, 1.0 / 3.0}};
    io::write_table(path, rows, "x y");
    CHECK(io::read_table(path) == rows);

    write_text(path, "1 2 3\n");
    CHECK_THROWS_AS(io::read_table(path), ParseError);
    write_text(path, "1\n");
    CHECK_THROWS_AS(io::read_table(path), ParseError);
}

TEST_CASE("tlm CSV round trip and metadata") {
    TempDir dir;
    tlm::TlmDataset data;
    data.points = {{1e-6, 300.0}, {2e-6, 400.0}, {3e-6, 500.0}};
    data.n_parallel = 34;
    data.temperature_K = 300.0;
    data.label = "room temperature";
    const auto path = dir.path / "tlm.csv";
    io::write_tlm_csv(path, data);
    const tlm::TlmDataset back = io::parse_tlm_csv(path);
    REQUIRE(back.points.size() == 3);
    CHECK(back.points[1].segment_length == 2e-6);
    CHECK(back.points[1].resistance == 400.0);
    CHECK(back.n_parallel == 34);
    CHECK(back.label == "room temperature");

    write_text(path, "L_m,R_ohm\n1e-6,badnum\n");
    CHECK_THROWS_AS(io::parse_tlm_csv(path), ParseError);
}

TEST_CASE("key=value config files") {
    TempDir dir;
    const auto path = dir.path / "run.cfg";
    write_text(path, "# comment line\nl_phi = 1.3e-7\nmodel=spin_orbit\n\n"
                     "label=two words # trailing comment\n");
    const auto kv = io::parse_key_value(path);
    CHECK(kv.at("l_phi") == "1.3e-7");
    CHECK(kv.at("model") == "spin_orbit");
    CHECK(kv.at("label") == "two words");

    write_text(path, "not a pair\n");
    CHECK_THROWS_AS(io::parse_key_value(path), ParseError);
}

TEST_CASE("format_double round trips doubles through text") {
    for (double v : {1.0 / 3.0, -8.058015399058195e-6, 1e-300, 6.62607015e-34, 0.0}) {
        const std::string text = io::format_double(v);
        CHECK(io::parse_double(text) == v);
    }
}
