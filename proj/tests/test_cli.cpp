#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "nwkit/fitting.hpp"
#include "nwkit/gpa.hpp"
#include "nwkit/io.hpp"
#include "nwkit/transport.hpp"
#include "test_util.hpp"

using namespace nwkit;
using nwkit_test::TempDir;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string cli_path() {
    const char* env = std::getenv("NWKIT_CLI");
    REQUIRE_MESSAGE(env != nullptr, "NWKIT_CLI must point at the nwkit binary");
    return env;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

CliResult run_cli(const std::string& args, const TempDir& dir) {
    const auto out_file = dir.path / "cli_stdout.txt";
    const auto err_file = dir.path / "cli_stderr.txt";
    const std::string cmd = "\"" + cli_path() + "\" " + args + " > \"" + out_file.string() +
                            "\" 2> \"" + err_file.string() + "\"";
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

} // namespace

TEST_CASE("simulate-wl then fit-wl recovers the input coherence length") {
    TempDir dir;
    const auto sim_out = (dir.path / "sim").string();
    const auto fit_out = (dir.path / "fit").string();

    const CliResult sim = run_cli("simulate-wl --out \"" + sim_out +
                                      "\" --seed 3 --set l_phi=137e-9 --set noise_sigma=0",
                                  dir);
    REQUIRE(sim.exit_code == 0);

    const CliResult fit =
        run_cli("fit-wl --out \"" + fit_out + "\" \"" + sim_out + "/trace.csv\"", dir);
    REQUIRE_MESSAGE(fit.exit_code == 0, fit.err);

    const std::string report = slurp(fit_out + "/report.txt");
    double l_phi_nm = 0.0, err_nm = 0.0;
    const auto pos = report.find("l_phi = ");
    REQUIRE(pos != std::string::npos);
    REQUIRE(std::sscanf(report.c_str() + pos, "l_phi = %lf +/- %lf nm", &l_phi_nm, &err_nm) ==
            2);
    CHECK(l_phi_nm == doctest::Approx(137.0).epsilon(1e-6));

    // Emitted curves reparse through the library parsers (self-consistency),
    // and the overlay tables line up point for point with the data.
    const auto model = io::read_table(fit_out + "/model.dat");
    const auto data = io::read_table(fit_out + "/data_per_wire.dat");
    const fitting::MagnetoTrace sim_trace = io::parse_trace_csv(sim_out + "/trace.csv");
    REQUIRE(model.size() == sim_trace.field.size());
    REQUIRE(data.size() == sim_trace.field.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        CHECK(model[i].first == sim_trace.field[i]);
        CHECK(data[i].second == sim_trace.conductance[i]); // n_parallel = 1
    }
    CHECK(sim_trace.label == "synthetic");
    CHECK(sim_trace.temperature_K == 1.5);
}

TEST_CASE("spin-orbit fit with the l_so profile bound") {
    TempDir dir;
    const auto sim_out = (dir.path / "sim").string();
    const auto fit_out = (dir.path / "fit").string();

    const CliResult sim = run_cli("simulate-wl --out \"" + sim_out +
                                      "\" --seed 5 --set l_so=120e-9 --set noise_sigma=1e-8",
                                  dir);
    REQUIRE(sim.exit_code == 0);

    const CliResult fit = run_cli(
        "fit-wl --out \"" + fit_out + "\" --set model=spin_orbit --set lso_profile=1"
        " --set lso_grid_per_decade=10 \"" + sim_out + "/trace.csv\"",
        dir);
    REQUIRE_MESSAGE(fit.exit_code == 0, fit.err);
    const std::string report = slurp(fit_out + "/report.txt");
    CHECK(report.find("model: spin_orbit") != std::string::npos);
    CHECK(report.find("l_so = ") != std::string::npos);
    CHECK(report.find("l_so lower bound:") != std::string::npos);
    const auto profile = io::read_table(fit_out + "/lso_profile.dat");
    CHECK(profile.size() > 20);
}

TEST_CASE("parameter precedence is --set over --config over defaults") {
    TempDir dir;
    const auto cfg = dir.path / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "l_phi=100e-9\nn_points=41\n";
    }
    const auto out_dir = (dir.path / "out").string();
    const CliResult sim = run_cli("simulate-wl --config \"" + cfg.string() + "\" --out \"" +
                                      out_dir + "\" --set l_phi=150e-9",
                                  dir);
    REQUIRE(sim.exit_code == 0);
    const std::string report = slurp(out_dir + "/report.txt");
    CHECK(report.find("l_phi: 150 nm") != std::string::npos); // --set wins
    const fitting::MagnetoTrace trace = io::parse_trace_csv(out_dir + "/trace.csv");
    CHECK(trace.field.size() == 41); // config file beats the 201 default
}

TEST_CASE("unknown command exits 1 with usage") {
    TempDir dir;
    const CliResult r = run_cli("frobnicate", dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("usage:") != std::string::npos);
}

TEST_CASE("flat trace maps to error[fit] degenerate and exit 1") {
    TempDir dir;
    fitting::MagnetoTrace flat;
    for (int i = 0; i < 21; ++i) {
        flat.field.push_back(-8.0 + 0.8 * i);
        flat.conductance.push_back(5e-5);
    }
    const auto path = dir.path / "flat.csv";
    io::write_trace_csv(path, flat);
    const CliResult r =
        run_cli("fit-wl --out \"" + (dir.path / "o").string() + "\" \"" + path.string() + "\"",
                dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error[fit] degenerate") != std::string::npos);
    CHECK(r.err.find("l_phi") != std::string::npos);
}

TEST_CASE("malformed input maps to error[parse] and exit 2") {
    TempDir dir;
    const auto path = dir.path / "bad.csv";
    {
        std::ofstream out(path);
        out << "B_T,G_S\n-8,1e-5\n-4,1e-5\n0,oops\n4,1e-5\n8,1e-5\n";
    }
    const CliResult r =
        run_cli("fit-wl --out \"" + (dir.path / "o").string() + "\" \"" + path.string() + "\"",
                dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error[parse]") != std::string::npos);
    CHECK(r.err.find("line 4") != std::string::npos);
}

TEST_CASE("missing input maps to error[domain] and exit 1") {
    TempDir dir;
    const CliResult r = run_cli("fit-wl --out \"" + (dir.path / "o").string() +
                                    "\" \"" + (dir.path / "absent.csv").string() + "\"",
                                dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error[domain]") != std::string::npos);
}

TEST_CASE("gpa and line-scan pipeline") {
    TempDir dir;
    std::vector<gpa::LatticeRegion> regions;
    regions.push_back({{0, 0, 128, 128}, 0.35, 0.0, 1.0, 0.0});
    regions.push_back({{128, 0, 128, 128}, 0.35, 0.0, 1.0, -0.025});
    const gpa::Raster image = gpa::synthesize_lattice(128, 256, 0.05, regions, 0.0, 0);
    const auto img_path = dir.path / "image.gpa1";
    io::write_raster(img_path, image);

    const auto gpa_out = (dir.path / "gpa").string();
    const std::string g = io::format_double(1.0 / 0.35);
    const CliResult r = run_cli("gpa --out \"" + gpa_out + "\" --set g_x=" + g +
                                    " --set g_y=0 --set ref_x=20 --set ref_y=20"
                                    " --set ref_w=80 --set ref_h=88 \"" +
                                    img_path.string() + "\"",
                                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    const gpa::Raster strain = io::parse_raster(gpa_out + "/strain.gpa1");
    CHECK(strain.rows == 128);
    CHECK(strain.cols == 256);

    const auto scan_out = (dir.path / "scan").string();
    const CliResult scan = run_cli("line-scan --out \"" + scan_out +
                                       "\" --set x0=30 --set y0=64 --set x1=220 --set y1=64"
                                       " --set avg_width=9 \"" +
                                       gpa_out + "/strain.gpa1\"",
                                   dir);
    REQUIRE_MESSAGE(scan.exit_code == 0, scan.err);
    const auto profile = io::read_table(scan_out + "/profile.dat");
    REQUIRE(profile.size() > 100);
    // Step from ~0 to ~-0.025 across the boundary.
    CHECK(std::abs(profile.front().second) < 0.004);
    CHECK(profile.back().second == doctest::Approx(-0.025).epsilon(0.15));

    // Requires a reference region.
    const CliResult no_ref = run_cli("gpa --out \"" + gpa_out + "\" --set g_x=" + g +
                                         " --set g_y=0 \"" + img_path.string() + "\"",
                                     dir);
    CHECK(no_ref.exit_code == 1);
    CHECK(no_ref.err.find("error[domain]") != std::string::npos);
}

TEST_CASE("shape-minimize writes a reparsable energy table and the optimum") {
    TempDir dir;
    const auto out_dir = (dir.path / "shape").string();
    const CliResult r = run_cli("shape-minimize --out \"" + out_dir +
                                    "\" --set gamma_top=1.0 --set gamma_side=1.0"
                                    " --set misfit_eps0=0 --set relaxation_k=0",
                                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    const auto table = io::read_table(out_dir + "/energy_vs_r.dat");
    CHECK(table.size() == 200);
    const std::string report = slurp(out_dir + "/report.txt");
    CHECK(report.find("r* = 0.5") != std::string::npos);
    CHECK(report.find("90 deg") != std::string::npos);
}

TEST_CASE("tlm command reports fit and control comparison") {
    TempDir dir;
    tlm::TlmDataset data;
    data.points = {{1e-6, 300.0}, {2e-6, 400.0}, {3e-6, 500.0}};
    data.label = "example";
    const auto path = dir.path / "tlm.csv";
    io::write_tlm_csv(path, data);

    const auto out_dir = (dir.path / "tlm").string();
    const CliResult r = run_cli("tlm --out \"" + out_dir +
                                    "\" --set control_R=40e9 \"" + path.string() + "\"",
                                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    const std::string report = slurp(out_dir + "/report.txt");
    CHECK(report.find("Rc = 100") != std::string::npos);
    CHECK(report.find("conduction attributed") != std::string::npos);
    const auto per_wire = io::read_table(out_dir + "/per_wire.dat");
    const auto fit_line = io::read_table(out_dir + "/fit_line.dat");
    REQUIRE(per_wire.size() == 3);
    REQUIRE(fit_line.size() == 3);
    CHECK(per_wire[0].second == doctest::Approx(fit_line[0].second).epsilon(1e-9));
}

TEST_CASE("outputs land inside --out only") {
    TempDir dir;
    const auto nested = dir.path / "a" / "b";
    const CliResult r = run_cli("simulate-wl --out \"" + nested.string() +
                                    "\" --set n_points=21",
                                dir);
    REQUIRE(r.exit_code == 0);
    CHECK(std::filesystem::exists(nested / "trace.csv"));
    CHECK(std::filesystem::exists(nested / "report.txt"));
    int entries = 0;
    for (const auto& entry : std::filesystem::directory_iterator(nested)) {
        (void)entry;
        ++entries;
    }
    CHECK(entries == 2);
}
