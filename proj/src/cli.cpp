#include "nwkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "nwkit/errors.hpp"
#include "nwkit/fitting.hpp"
#include "nwkit/gpa.hpp"
#include "nwkit/io.hpp"
#include "nwkit/morphology.hpp"
#include "nwkit/tlm.hpp"
#include "nwkit/transport.hpp"

namespace nwkit::cli {

namespace {

std::string fmt(double v, const char* format = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

class Params {
public:
    explicit Params(const std::map<std::string, std::string>& map) : map_(map) {}

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = map_.find(key);
        return it == map_.end() ? fallback : it->second;
    }

    double get_number(const std::string& key, double fallback) const {
        const auto it = map_.find(key);
        return it == map_.end() ? fallback : to_number(key, it->second);
    }

    double require_number(const std::string& key) const {
        const auto it = map_.find(key);
        if (it == map_.end())
            throw DomainError("missing required parameter '" + key + "'");
        return to_number(key, it->second);
    }

    long get_integer(const std::string& key, long fallback) const {
        const auto it = map_.find(key);
        if (it == map_.end())
            return fallback;
        try {
            return io::parse_long(it->second);
        } catch (const ParseError&) {
            throw DomainError("invalid integer for '" + key + "': " + it->second);
        }
    }

private:
    static double to_number(const std::string& key, const std::string& text) {
        try {
            return io::parse_double(text);
        } catch (const ParseError&) {
            throw DomainError("invalid numeric value for '" + key + "': " + text);
        }
    }

    const std::map<std::string, std::string>& map_;
};

std::filesystem::path prepare_output_dir(const RunConfig& config) {
    std::filesystem::create_directories(config.output_dir);
    return config.output_dir;
}

const std::string& single_input(const RunConfig& config, const char* what) {
    if (config.inputs.size() != 1)
        throw DomainError(std::string(config.command) + " expects exactly one input file (" +
                          what + ")");
    return config.inputs.front();
}

void check_inputs_exist(const RunConfig& config) {
    for (const auto& in : config.inputs)
        if (!std::filesystem::exists(in))
            throw DomainError("input file does not exist: " + in);
}

std::vector<double> field_grid(double b_min, double b_max, long n_points) {
    if (n_points < 2)
        throw DomainError("n_points must be >= 2");
    if (!(b_max > b_min))
        throw DomainError("B_max must exceed B_min");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    for (long i = 0; i < n_points; ++i)
        grid[static_cast<std::size_t>(i)] =
            b_min + (b_max - b_min) * static_cast<double>(i) / static_cast<double>(n_points - 1);
    return grid;
}

fitting::FitConfig make_fit_config(const Params& params) {
    fitting::FitConfig cfg;
    const std::string model = params.get_string("model", "base");
    if (model == "base")
        cfg.model = fitting::WlModel::base;
    else if (model == "spin_orbit")
        cfg.model = fitting::WlModel::spin_orbit;
    else
        throw DomainError("unknown model '" + model + "' (expected base or spin_orbit)");

    cfg.fixed["L"] = params.get_number("L", 1.25e-6);
    const double width = params.get_number("W", 20e-9);
    if (params.get_integer("free_W", 0) != 0)
        cfg.initial["W"] = width;
    else
        cfg.fixed["W"] = width;
    if (params.has("l_phi0"))
        cfg.initial["l_phi"] = params.require_number("l_phi0");
    if (params.has("l_so0"))
        cfg.initial["l_so"] = params.require_number("l_so0");
    if (params.has("G_bg0"))
        cfg.initial["G_bg"] = params.require_number("G_bg0");
    cfg.max_iterations = static_cast<int>(params.get_integer("max_iterations", 100));
    cfg.convergence_tol = params.get_number("tol", 1e-10);
    cfg.damping_init = params.get_number("damping_init", 1e-3);
    cfg.field_window_min = params.get_number("B_window_min", 0.0);
    cfg.field_window_max =
        params.get_number("B_window_max", std::numeric_limits<double>::infinity());
    cfg.lso_grid_min = params.get_number("lso_grid_min", 10e-9);
    cfg.lso_grid_max = params.get_number("lso_grid_max", 10e-6);
    cfg.lso_grid_per_decade = static_cast<int>(params.get_integer("lso_grid_per_decade", 60));
    return cfg;
}

void run_simulate_wl(const RunConfig& config) {
    const Params params(config.params);
    const auto out_dir = prepare_output_dir(config);

    const double l_phi = params.get_number("l_phi", 130e-9);
    const double width = params.get_number("W", 20e-9);
    const double spacing = params.get_number("L", 1.25e-6);
    const double background = params.get_number("G_bg", 1e-4);
    const double noise = params.get_number("noise_sigma", 0.0);
    const auto grid = field_grid(params.get_number("B_min", -8.0),
                                 params.get_number("B_max", 8.0),
                                 params.get_integer("n_points", 201));

    transport::TransportGeometry geometry(spacing, width);
    std::optional<transport::WlParams> wl;
    if (params.has("l_so"))
        wl.emplace(l_phi, params.require_number("l_so"), geometry);
    else
        wl.emplace(l_phi, geometry);

    fitting::MagnetoTrace trace =
        fitting::simulate_trace(*wl, background, grid, noise, config.seed);
    trace.bias_mV = params.get_number("bias_mV", 0.0);
    trace.temperature_K = params.get_number("temperature_K", 1.5);
    trace.label = params.get_string("label", "synthetic");

    io::write_trace_csv(out_dir / "trace.csv", trace);

    std::ofstream report(out_dir / "report.txt");
    report << "nwkit simulate-wl\n";
    report << "model: " << (wl->spin_orbit_length ? "spin_orbit" : "base") << "\n";
    report << "l_phi: " << fmt(l_phi * 1e9) << " nm\n";
    if (wl->spin_orbit_length)
        report << "l_so: " << fmt(*wl->spin_orbit_length * 1e9) << " nm\n";
    report << "W: " << fmt(width * 1e9) << " nm\n";
    report << "L: " << fmt(spacing * 1e9) << " nm\n";
    report << "G_bg: " << fmt(background * 1e6) << " uS\n";
    report << "noise_sigma: " << fmt(noise * 1e6) << " uS\n";
    report << "seed: " << config.seed << "\n";
    report << "points: " << grid.size() << " over B in [" << fmt(grid.front()) << ", "
           << fmt(grid.back()) << "] T\n";
    report << "wrote: trace.csv\n";
}

void run_fit_wl(const RunConfig& config) {
    const Params params(config.params);
    const auto out_dir = prepare_output_dir(config);
    const std::string& input = single_input(config, "trace CSV");

    const fitting::MagnetoTrace trace = io::parse_trace_csv(input);
    const fitting::FitConfig fit_cfg = make_fit_config(params);
    const fitting::FitResult result = fitting::fit_wl(trace, fit_cfg);

    // Per-wire data and fitted curve over the full sweep: the overlay tables.
    std::vector<std::pair<double, double>> data_rows, model_rows;
    data_rows.reserve(trace.field.size());
    model_rows.reserve(trace.field.size());
    for (std::size_t i = 0; i < trace.field.size(); ++i) {
        const double b = trace.field[i];
        data_rows.emplace_back(b, trace.conductance[i] / trace.n_parallel);
        const double dg = result.l_so
                              ? transport::wl_so_delta_g(b, result.l_phi, *result.l_so,
                                                         result.channel_width,
                                                         result.contact_spacing)
                              : transport::wl_delta_g(b, result.l_phi, result.channel_width,
                                                      result.contact_spacing);
        model_rows.emplace_back(b, result.background + dg);
    }
    io::write_table(out_dir / "data_per_wire.dat", data_rows, "B_T G_perwire_S");
    io::write_table(out_dir / "model.dat", model_rows, "B_T G_model_S");

    std::optional<fitting::LsoBound> bound;
    if (params.get_integer("lso_profile", 0) != 0) {
        if (fit_cfg.model != fitting::WlModel::spin_orbit)
            throw DomainError("lso_profile requires model=spin_orbit");
        bound = fitting::lso_lower_bound(trace, fit_cfg, params.get_number("confidence", 0.95));
        io::write_table(out_dir / "lso_profile.dat", bound->profile,
                        "l_so_m chi2_S2 (profile scan)");
    }

    std::ofstream report(out_dir / "report.txt");
    report << "nwkit fit-wl\n";
    report << "input: " << std::filesystem::path(input).filename().string() << "\n";
    if (!trace.label.empty())
        report << "label: " << trace.label << "\n";
    report << "points: " << trace.field.size() << ", n_parallel: " << trace.n_parallel
           << " (fit is per wire)\n";
    report << "model: " << (fit_cfg.model == fitting::WlModel::base ? "base" : "spin_orbit")
           << "\n";
    report << "L: " << fmt(result.contact_spacing * 1e9) << " nm ("
           << (fit_cfg.fixed.count("W") ? "W fixed" : "W free") << " at start "
           << fmt(params.get_number("W", 20e-9) * 1e9) << " nm)\n";
    report << "converged: " << (result.converged ? "yes" : "no") << " ("
           << result.n_iterations << " iterations)\n";
    if (!result.message.empty())
        report << "note: " << result.message << "\n";
    report << "chi2: " << fmt(result.chi2, "%.8g") << " S^2\n";
    for (Eigen::Index j = 0; j < result.free_values.size(); ++j) {
        const std::string& name = result.free_names[static_cast<std::size_t>(j)];
        const double value = result.free_values[j];
        const double err = result.std_errors[j];
        if (name == "G_bg")
            report << "G_bg = " << fmt(value * 1e6, "%.8g") << " +/- " << fmt(err * 1e6)
                   << " uS\n";
        else
            report << name << " = " << fmt(value * 1e9, "%.8g") << " +/- " << fmt(err * 1e9)
                   << " nm\n";
    }
    if (bound) {
        if (bound->bounded)
            report << "l_so lower bound: " << fmt(bound->lower_bound * 1e9, "%.8g")
                   << " nm (chi2_min " << fmt(bound->chi2_min, "%.8g") << ", threshold "
                   << fmt(bound->threshold, "%.8g") << ")\n";
        else
            report << "l_so lower bound: unbounded (no grid value rejected)\n";
        report << "wrote: lso_profile.dat\n";
    }
    if (params.has("mean_free_path")) {
        const double le = params.require_number("mean_free_path");
        transport::TransportGeometry geom(result.contact_spacing, result.channel_width);
        if (!geom.diffusive_regime_ok(le))
            report << "warning: W < 5 l_e; quasi-1D diffusive model validity is doubtful\n";
        else
            report << "diffusive check: W >= 5 l_e ok\n";
    }
    report << "wrote: data_per_wire.dat, model.dat\n";
}

void run_gpa(const RunConfig& config) {
    const Params params(config.params);
    const auto out_dir = prepare_output_dir(config);
    const std::string& input = single_input(config, "GPA1 raster");

    const gpa::Raster image = io::parse_raster(input);

    std::ofstream report(out_dir / "report.txt");
    report << "nwkit gpa\n";
    report << "input: " << std::filesystem::path(input).filename().string() << " (" << image.rows << "x" << image.cols << ", "
           << io::format_double(image.pixel_size_nm) << " nm/px)\n";

    const long list_peaks = params.get_integer("list_peaks", 0);
    if (list_peaks > 0) {
        const auto peaks = gpa::fft_peak_candidates(image, static_cast<int>(list_peaks));
        report << "fft peak candidates (gx gy |F|):\n";
        for (const auto& p : peaks)
            report << "  " << fmt(p.gx, "%.8g") << " " << fmt(p.gy, "%.8g") << " "
                   << fmt(p.magnitude) << "\n";
        if (!params.has("g_x")) {
            report << "no g supplied; listed candidates only\n";
            return;
        }
    }

    const double gx = params.require_number("g_x");
    const double gy = params.require_number("g_y");
    const double sigma = params.get_number("mask_sigma", gpa::default_mask_sigma(gx, gy));
    const gpa::ReciprocalPeak peak(gx, gy, sigma);

    gpa::Rect ref;
    ref.x0 = static_cast<int>(params.get_integer("ref_x", -1));
    ref.y0 = static_cast<int>(params.get_integer("ref_y", -1));
    ref.width = static_cast<int>(params.get_integer("ref_w", 0));
    ref.height = static_cast<int>(params.get_integer("ref_h", 0));
    if (ref.x0 < 0 || ref.y0 < 0 || ref.width <= 0 || ref.height <= 0)
        throw DomainError("reference region ref_x/ref_y/ref_w/ref_h is required");

    const gpa::Raster phase = gpa::compute_phase_map(image, peak);
    const gpa::Raster unwrapped = gpa::unwrap_phase(phase);
    const gpa::StrainMap strain = gpa::strain_from_phase(unwrapped, peak, ref);
    io::write_raster(out_dir / "strain.gpa1", strain.raster);

    double ref_mean = 0.0, ref_min = 0.0, ref_max = 0.0;
    bool first = true;
    for (int r = ref.y0; r < ref.y0 + ref.height; ++r)
        for (int c = ref.x0; c < ref.x0 + ref.width; ++c) {
            const double v = strain.raster.at(r, c);
            ref_mean += v;
            ref_min = first ? v : std::min(ref_min, v);
            ref_max = first ? v : std::max(ref_max, v);
            first = false;
        }
    ref_mean /= static_cast<double>(ref.width) * ref.height;

    report << "peak g = (" << fmt(gx, "%.8g") << ", " << fmt(gy, "%.8g")
           << ") cycles/nm, |g| = " << fmt(peak.magnitude(), "%.8g") << ", mask_sigma = "
           << fmt(sigma, "%.8g") << "\n";
    report << "reference region: x0=" << ref.x0 << " y0=" << ref.y0 << " w=" << ref.width
           << " h=" << ref.height << "\n";
    report << "reference strain mean (anchored): " << fmt(ref_mean) << ", spread ["
           << fmt(ref_min) << ", " << fmt(ref_max) << "]\n";
    report << "border: outer " << strain.border_px
           << " px use one-sided derivatives; treat as untrusted\n";
    report << "wrote: strain.gpa1\n";
}

void run_line_scan(const RunConfig& config) {
    const Params params(config.params);
    const auto out_dir = prepare_output_dir(config);
    const std::string& input = single_input(config, "GPA1 raster");

    const gpa::Raster map = io::parse_raster(input);
    const double x0 = params.require_number("x0");
    const double y0 = params.require_number("y0");
    const double x1 = params.require_number("x1");
    const double y1 = params.require_number("y1");
    const int width = static_cast<int>(params.get_integer("avg_width", 1));

    const auto profile = gpa::line_scan(map, x0, y0, x1, y1, width);
    std::vector<std::pair<double, double>> rows;
    rows.reserve(profile.size());
    for (const auto& p : profile)
        rows.emplace_back(p.distance_nm, p.value);
    io::write_table(out_dir / "profile.dat", rows, "distance_nm value");

    std::ofstream report(out_dir / "report.txt");
    report << "nwkit line-scan\n";
    report << "input: " << std::filesystem::path(input).filename().string() << "\n";
    report << "segment: (" << fmt(x0) << ", " << fmt(y0) << ") -> (" << fmt(x1) << ", "
           << fmt(y1) << ") px, avg_width " << width << " px\n";
    report << "samples: " << profile.size() << ", length "
           << fmt(profile.back().distance_nm) << " nm\n";
    report << "endpoints value: " << fmt(profile.front().value) << " -> "
           << fmt(profile.back().value) << "\n";
    report << "wrote: profile.dat\n";
}

void run_shape_minimize(const RunConfig& config) {
    const Params params(config.params);
    const auto out_dir = prepare_output_dir(config);

    morphology::CrossSectionModel model;
    model.gamma_top = params.get_number("gamma_top", 0.66);
    model.gamma_side = params.get_number("gamma_side", 0.75);
    model.gamma_interface = params.get_number("gamma_interface", 0.0);
    model.area = params.get_number("area_A", 1.25e-15);
    model.misfit = params.get_number("misfit_eps0", -0.072);
    model.elastic_modulus = params.get_number("elastic_modulus_M", 7.9e10);
    model.relaxation_k = params.get_number("relaxation_k", 1.0);

    const double r_lo = params.get_number("r_min", 0.01);
    const double r_hi = params.get_number("r_max", 100.0);
    const long n_table = params.get_integer("table_points", 200);
    if (n_table < 2)
        throw DomainError("table_points must be >= 2");

    const auto result = morphology::minimize_aspect_ratio(model, r_lo, r_hi);

    std::vector<std::pair<double, double>> table;
    table.reserve(static_cast<std::size_t>(n_table));
    const double log_lo = std::log(r_lo), log_hi = std::log(r_hi);
    for (long i = 0; i < n_table; ++i) {
        const double r =
            std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                  static_cast<double>(n_table - 1));
        table.emplace_back(r, morphology::total_energy(model, r));
    }
    io::write_table(out_dir / "energy_vs_r.dat", table, "aspect_ratio energy_J_per_m");
    io::write_table(out_dir / "optimum.dat", {{result.aspect_ratio, result.energy}},
                    "r_star energy_J_per_m");

    std::ofstream report(out_dir / "report.txt");
    report << "nwkit shape-minimize\n";
    report << "gamma_top: " << fmt(model.gamma_top) << " J/m^2, gamma_side: "
           << fmt(model.gamma_side) << " J/m^2, gamma_interface: "
           << fmt(model.gamma_interface) << " J/m^2\n";
    report << "area: " << fmt(model.area) << " m^2, misfit: " << fmt(model.misfit)
           << ", modulus: " << fmt(model.elastic_modulus) << " Pa, relaxation_k: "
           << fmt(model.relaxation_k) << "\n";
    report << "facet check: (1,-1,0)^(1,1,1) dihedral = "
           << fmt(morphology::facet_dihedral({1, -1, 0}, {1, 1, 1}), "%.9g")
           << " deg (vertical sides), (1,1,0)^(1,1,1) = "
           << fmt(morphology::facet_dihedral({1, 1, 0}, {1, 1, 1}), "%.9g") << " deg\n";
    report << "bracket: [" << fmt(r_lo) << ", " << fmt(r_hi) << "]\n";
    report << "optimum: r* = " << fmt(result.aspect_ratio, "%.9g") << ", E = "
           << fmt(result.energy, "%.9g") << " J/m" << (result.edge_minimum ? " (edge minimum)" : "")
           << "\n";
    report << "shape: w = " << fmt(result.shape.width * 1e9) << " nm, h = "
           << fmt(result.shape.height * 1e9) << " nm\n";
    report << "wrote: energy_vs_r.dat, optimum.dat\n";
}

void run_tlm(const RunConfig& config) {
    const Params params(config.params);
    const auto out_dir = prepare_output_dir(config);
    const std::string& input = single_input(config, "TLM CSV");

    const tlm::TlmDataset data = io::parse_tlm_csv(input);
    const tlm::TlmResult result = tlm::fit_tlm(data);

    std::vector<std::pair<double, double>> per_wire, fit_line;
    per_wire.reserve(data.points.size());
    fit_line.reserve(data.points.size());
    for (const auto& p : data.points) {
        per_wire.emplace_back(p.segment_length, p.resistance * data.n_parallel);
        fit_line.emplace_back(p.segment_length, 2.0 * result.contact_resistance +
                                                    result.resistance_per_length *
                                                        p.segment_length);
    }
    io::write_table(out_dir / "per_wire.dat", per_wire, "L_m R_perwire_ohm");
    io::write_table(out_dir / "fit_line.dat", fit_line, "L_m R_fit_ohm");

    std::ofstream report(out_dir / "report.txt");
    report << "nwkit tlm\n";
    report << "input: " << std::filesystem::path(input).filename().string() << "\n";
    if (!data.label.empty())
        report << "label: " << data.label << "\n";
    report << "points: " << data.points.size() << ", n_parallel: " << data.n_parallel
           << " (per-wire resistance = measured x n_parallel)\n";
    report << "intercept convention: R(L=0) = 2 Rc (two identical contacts)\n";
    report << "Rc = " << fmt(result.contact_resistance, "%.8g") << " +/- "
           << fmt(result.stderr_contact) << " ohm per contact per wire"
           << (result.negative_rc_warning ? " (warning: negative, non-physical)" : "") << "\n";
    report << "rho_lin = " << fmt(result.resistance_per_length, "%.8g") << " +/- "
           << fmt(result.stderr_per_length) << " ohm/m per wire\n";
    report << "r_squared = " << fmt(result.r_squared, "%.8g") << "\n";
    if (params.has("control_R")) {
        const double control = params.require_number("control_R");
        const double mean_sample = [&] {
            double s = 0.0;
            for (const auto& p : data.points)
                s += p.resistance;
            return s / static_cast<double>(data.points.size());
        }();
        const auto cmp = tlm::control_ratio(mean_sample, control,
                                            params.get_number("control_threshold", 1e5));
        report << "control/sample ratio = " << fmt(cmp.ratio, "%.8g") << " -> "
               << (cmp.conduction_attributed ? "conduction attributed to deposited wires"
                                             : "below attribution threshold")
               << "\n";
    }
    report << "wrote: per_wire.dat, fit_line.dat\n";
}

} // namespace

std::string usage_text() {
    return "usage: nwkit <command> [--config <path>] [--out <dir>] [--seed <u64>]\n"
           "             [--set key=value]... [input files...]\n"
           "\n"
           "commands:\n"
           "  simulate-wl     synthesize a weak-localization magnetoconductance trace\n"
           "  fit-wl          fit l_phi (and optionally l_so) to a trace CSV\n"
           "  gpa             strain map from a GPA1 lattice raster\n"
           "  line-scan       profile across a GPA1 map\n"
           "  shape-minimize  cross-section energy minimum vs aspect ratio\n"
           "  tlm             contact resistance / resistivity from R(L) data\n"
           "\n"
           "Parameter precedence: --set > --config file > built-in defaults.\n"
           "See README.md for per-command parameter keys.\n";
}

RunConfig parse_args(const std::vector<std::string>& args) {
    if (args.empty())
        throw DomainError("missing command");
    RunConfig config;
    config.command = args[0];

    std::map<std::string, std::string> file_params;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::optional<std::uint64_t> seed_flag;

    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& arg = args[i];
        const auto next = [&]() -> const std::string& {
            if (i + 1 >= args.size())
                throw DomainError("flag " + arg + " expects a value");
            return args[++i];
        };
        if (arg == "--config") {
            file_params = io::parse_key_value(next());
        } else if (arg == "--out") {
            config.output_dir = next();
        } else if (arg == "--seed") {
            const std::string& text = next();
            try {
                std::size_t pos = 0;
                config.seed = std::stoull(text, &pos);
                if (pos != text.size())
                    throw std::invalid_argument(text);
            } catch (const std::exception&) {
                throw DomainError("invalid seed '" + text + "'");
            }
            seed_flag = config.seed;
        } else if (arg == "--set") {
            const std::string& kv = next();
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw DomainError("--set expects key=value, got '" + kv + "'");
            overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        } else if (arg.rfind("--", 0) == 0) {
            throw DomainError("unknown flag " + arg);
        } else {
            config.inputs.push_back(arg);
        }
    }

    config.params = std::move(file_params);
    for (auto& [k, v] : overrides)
        config.params[k] = std::move(v);
    if (!seed_flag && config.params.count("seed")) {
        const Params p(config.params);
        config.seed = static_cast<std::uint64_t>(p.get_integer("seed", 0));
    }
    return config;
}

int run(const RunConfig& config) {
    check_inputs_exist(config);
    if (config.command == "simulate-wl")
        run_simulate_wl(config);
    else if (config.command == "fit-wl")
        run_fit_wl(config);
    else if (config.command == "gpa")
        run_gpa(config);
    else if (config.command == "line-scan")
        run_line_scan(config);
    else if (config.command == "shape-minimize")
        run_shape_minimize(config);
    else if (config.command == "tlm")
        run_tlm(config);
    else {
        std::cerr << "error[domain] unknown command '" << config.command << "'\n"
                  << usage_text();
        return 1;
    }
    return 0;
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
        std::ostream& stream = args.empty() ? std::cerr : std::cout;
        stream << usage_text();
        return args.empty() ? 1 : 0;
    }
    try {
        return run(parse_args(args));
    } catch (const ParseError& e) {
        std::cerr << "error[parse] " << e.what() << "\n";
        return 2;
    } catch (const DegenerateFitError& e) {
        std::cerr << "error[fit] " << e.what() << "\n";
        return 1;
    } catch (const FitError& e) {
        std::cerr << "error[fit] " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error[domain] " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error[domain] " << e.what() << "\n";
        return 1;
    }
}

} // namespace nwkit::cli
