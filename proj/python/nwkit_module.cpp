#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nwkit/constants.hpp"
#include "nwkit/errors.hpp"
#include "nwkit/fitting.hpp"
#include "nwkit/gpa.hpp"
#include "nwkit/io.hpp"
#include "nwkit/morphology.hpp"
#include "nwkit/tlm.hpp"
#include "nwkit/transport.hpp"

namespace py = pybind11;
using namespace nwkit;

namespace {

py::array_t<double> raster_to_numpy(const gpa::Raster& raster) {
    py::array_t<double> out({raster.rows, raster.cols});
    std::copy(raster.values.begin(), raster.values.end(), out.mutable_data());
    return out;
}

gpa::Raster raster_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& array,
                              double pixel_size_nm) {
    if (array.ndim() != 2)
        throw DomainError("expected a 2D array");
    gpa::Raster raster;
    raster.rows = static_cast<int>(array.shape(0));
    raster.cols = static_cast<int>(array.shape(1));
    raster.pixel_size_nm = pixel_size_nm;
    raster.values.assign(array.data(), array.data() + array.size());
    return raster;
}

} // namespace

PYBIND11_MODULE(nwkit, m) {
    m.doc() = "Nanowire magnetotransport, GPA strain, TLM and cross-section shape toolkit";

    py::register_exception<ParseError>(m, "NwkitParseError", PyExc_ValueError);
    py::register_exception<DegenerateFitError>(m, "DegenerateFitError", PyExc_RuntimeError);
    py::register_exception<FitError>(m, "NwkitFitError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "NwkitDomainError", PyExc_ValueError);

    m.attr("ELEMENTARY_CHARGE") = constants::elementary_charge;
    m.attr("PLANCK") = constants::planck;
    m.attr("HBAR") = constants::hbar;
    m.attr("CONDUCTANCE_QUANTUM") = constants::conductance_quantum;

    // transport --------------------------------------------------------------
    py::class_<transport::TransportGeometry>(m, "TransportGeometry")
        .def(py::init<double, double>(), py::arg("contact_spacing"), py::arg("channel_width"))
        .def_readonly("contact_spacing", &transport::TransportGeometry::contact_spacing)
        .def_readonly("channel_width", &transport::TransportGeometry::channel_width)
        .def("diffusive_regime_ok", &transport::TransportGeometry::diffusive_regime_ok,
             py::arg("mean_free_path"));

    py::class_<transport::WlParams>(m, "WlParams")
        .def(py::init<double, transport::TransportGeometry>(), py::arg("l_phi"),
             py::arg("geometry"))
        .def(py::init<double, double, transport::TransportGeometry>(), py::arg("l_phi"),
             py::arg("l_so"), py::arg("geometry"))
        .def_readonly("l_phi", &transport::WlParams::coherence_length)
        .def_readonly("l_so", &transport::WlParams::spin_orbit_length)
        .def_readonly("geometry", &transport::WlParams::geometry);

    py::class_<transport::MaterialParams>(m, "MaterialParams")
        .def(py::init<double, double>(), py::arg("fermi_velocity"), py::arg("mean_free_path"))
        .def_readonly("fermi_velocity", &transport::MaterialParams::fermi_velocity)
        .def_readonly("mean_free_path", &transport::MaterialParams::mean_free_path);

    m.def("magnetic_length", &transport::magnetic_length, py::arg("field"));
    m.def("magnetic_dephasing_length", &transport::magnetic_dephasing_length, py::arg("field"),
          py::arg("channel_width"));
    m.def("magnetic_dephasing_time", &transport::magnetic_dephasing_time, py::arg("field"),
          py::arg("channel_width"), py::arg("diffusion_constant"));
    m.def("diffusion_constant_1d", &transport::diffusion_constant_1d, py::arg("material"));
    m.def(
        "wl_delta_g",
        [](double field, double l_phi, double channel_width, double contact_spacing) {
            return transport::wl_delta_g(field, l_phi, channel_width, contact_spacing);
        },
        py::arg("field"), py::arg("l_phi"), py::arg("channel_width"),
        py::arg("contact_spacing"));
    m.def(
        "wl_so_delta_g",
        [](double field, double l_phi, double l_so, double channel_width,
           double contact_spacing) {
            return transport::wl_so_delta_g(field, l_phi, l_so, channel_width, contact_spacing);
        },
        py::arg("field"), py::arg("l_phi"), py::arg("l_so"), py::arg("channel_width"),
        py::arg("contact_spacing"));

    // fitting ----------------------------------------------------------------
    py::class_<fitting::MagnetoTrace>(m, "MagnetoTrace")
        .def(py::init<>())
        .def_readwrite("field", &fitting::MagnetoTrace::field)
        .def_readwrite("conductance", &fitting::MagnetoTrace::conductance)
        .def_readwrite("bias_mV", &fitting::MagnetoTrace::bias_mV)
        .def_readwrite("temperature_K", &fitting::MagnetoTrace::temperature_K)
        .def_readwrite("n_parallel", &fitting::MagnetoTrace::n_parallel)
        .def_readwrite("label", &fitting::MagnetoTrace::label)
        .def("validate", &fitting::MagnetoTrace::validate);

    py::enum_<fitting::WlModel>(m, "WlModel")
        .value("base", fitting::WlModel::base)
        .value("spin_orbit", fitting::WlModel::spin_orbit);

    py::class_<fitting::FitConfig>(m, "FitConfig")
        .def(py::init<>())
        .def_readwrite("model", &fitting::FitConfig::model)
        .def_readwrite("fixed", &fitting::FitConfig::fixed)
        .def_readwrite("initial", &fitting::FitConfig::initial)
        .def_readwrite("max_iterations", &fitting::FitConfig::max_iterations)
        .def_readwrite("convergence_tol", &fitting::FitConfig::convergence_tol)
        .def_readwrite("damping_init", &fitting::FitConfig::damping_init)
        .def_readwrite("field_window_min", &fitting::FitConfig::field_window_min)
        .def_readwrite("field_window_max", &fitting::FitConfig::field_window_max)
        .def_readwrite("lso_grid_min", &fitting::FitConfig::lso_grid_min)
        .def_readwrite("lso_grid_max", &fitting::FitConfig::lso_grid_max)
        .def_readwrite("lso_grid_per_decade", &fitting::FitConfig::lso_grid_per_decade);

    py::class_<fitting::FitResult>(m, "FitResult")
        .def_readonly("l_phi", &fitting::FitResult::l_phi)
        .def_readonly("l_so", &fitting::FitResult::l_so)
        .def_readonly("channel_width", &fitting::FitResult::channel_width)
        .def_readonly("contact_spacing", &fitting::FitResult::contact_spacing)
        .def_readonly("background", &fitting::FitResult::background)
        .def_readonly("free_names", &fitting::FitResult::free_names)
        .def_readonly("free_values", &fitting::FitResult::free_values)
        .def_readonly("std_errors", &fitting::FitResult::std_errors)
        .def_readonly("covariance", &fitting::FitResult::covariance)
        .def_readonly("chi2", &fitting::FitResult::chi2)
        .def_readonly("n_iterations", &fitting::FitResult::n_iterations)
        .def_readonly("converged", &fitting::FitResult::converged)
        .def_readonly("chi2_history", &fitting::FitResult::chi2_history)
        .def_readonly("message", &fitting::FitResult::message)
        .def("wl_params", &fitting::FitResult::wl_params);

    py::class_<fitting::LsoBound>(m, "LsoBound")
        .def_readonly("lower_bound", &fitting::LsoBound::lower_bound)
        .def_readonly("bounded", &fitting::LsoBound::bounded)
        .def_readonly("chi2_min", &fitting::LsoBound::chi2_min)
        .def_readonly("threshold", &fitting::LsoBound::threshold)
        .def_readonly("profile", &fitting::LsoBound::profile);

    m.def("fit_wl", &fitting::fit_wl, py::arg("trace"), py::arg("config"));
    m.def("lso_lower_bound", &fitting::lso_lower_bound, py::arg("trace"), py::arg("config"),
          py::arg("confidence") = 0.95);
    m.def("simulate_trace", &fitting::simulate_trace, py::arg("params"), py::arg("background"),
          py::arg("field_grid"), py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);
    m.def("chi2_quantile_1dof", &fitting::chi2_quantile_1dof, py::arg("confidence"));

    // gpa ----------------------------------------------------------------------
    py::class_<gpa::Raster>(m, "Raster")
        .def_readonly("rows", &gpa::Raster::rows)
        .def_readonly("cols", &gpa::Raster::cols)
        .def_readonly("pixel_size_nm", &gpa::Raster::pixel_size_nm)
        .def("to_numpy", &raster_to_numpy)
        .def_static("from_numpy", &raster_from_numpy, py::arg("array"),
                    py::arg("pixel_size_nm"));

    py::class_<gpa::ReciprocalPeak>(m, "ReciprocalPeak")
        .def(py::init<double, double, double>(), py::arg("gx"), py::arg("gy"),
             py::arg("mask_sigma"))
        .def_readonly("gx", &gpa::ReciprocalPeak::gx)
        .def_readonly("gy", &gpa::ReciprocalPeak::gy)
        .def_readonly("mask_sigma", &gpa::ReciprocalPeak::mask_sigma)
        .def("magnitude", &gpa::ReciprocalPeak::magnitude);

    m.def("default_mask_sigma", &gpa::default_mask_sigma, py::arg("gx"), py::arg("gy"));

    py::class_<gpa::Rect>(m, "Rect")
        .def(py::init([](int x0, int y0, int width, int height) {
                 return gpa::Rect{x0, y0, width, height};
             }),
             py::arg("x0"), py::arg("y0"), py::arg("width"), py::arg("height"))
        .def_readwrite("x0", &gpa::Rect::x0)
        .def_readwrite("y0", &gpa::Rect::y0)
        .def_readwrite("width", &gpa::Rect::width)
        .def_readwrite("height", &gpa::Rect::height);

    py::class_<gpa::StrainMap>(m, "StrainMap")
        .def_readonly("raster", &gpa::StrainMap::raster)
        .def_readonly("reference_region", &gpa::StrainMap::reference_region)
        .def_readonly("border_px", &gpa::StrainMap::border_px);

    py::class_<gpa::LatticeRegion>(m, "LatticeRegion")
        .def(py::init([](gpa::Rect rect, double period_nm, double orientation_deg,
                         double amplitude, double strain) {
                 return gpa::LatticeRegion{rect, period_nm, orientation_deg, amplitude, strain};
             }),
             py::arg("rect"), py::arg("period_nm"), py::arg("orientation_deg") = 0.0,
             py::arg("amplitude") = 1.0, py::arg("strain") = 0.0)
        .def_readwrite("rect", &gpa::LatticeRegion::rect)
        .def_readwrite("period_nm", &gpa::LatticeRegion::period_nm)
        .def_readwrite("orientation_deg", &gpa::LatticeRegion::orientation_deg)
        .def_readwrite("amplitude", &gpa::LatticeRegion::amplitude)
        .def_readwrite("strain", &gpa::LatticeRegion::strain);

    py::class_<gpa::ProfilePoint>(m, "ProfilePoint")
        .def_readonly("distance_nm", &gpa::ProfilePoint::distance_nm)
        .def_readonly("value", &gpa::ProfilePoint::value);

    py::class_<gpa::PeakCandidate>(m, "PeakCandidate")
        .def_readonly("gx", &gpa::PeakCandidate::gx)
        .def_readonly("gy", &gpa::PeakCandidate::gy)
        .def_readonly("magnitude", &gpa::PeakCandidate::magnitude);

    m.def("compute_phase_map", &gpa::compute_phase_map, py::arg("image"), py::arg("peak"));
    m.def("unwrap_phase", &gpa::unwrap_phase, py::arg("wrapped"));
    m.def("strain_from_phase", &gpa::strain_from_phase, py::arg("unwrapped_phase"),
          py::arg("peak"), py::arg("reference_region"));
    m.def("line_scan", &gpa::line_scan, py::arg("map"), py::arg("x0"), py::arg("y0"),
          py::arg("x1"), py::arg("y1"), py::arg("avg_width_px") = 1);
    m.def("synthesize_lattice", &gpa::synthesize_lattice, py::arg("rows"), py::arg("cols"),
          py::arg("pixel_size_nm"), py::arg("regions"), py::arg("noise_sigma") = 0.0,
          py::arg("seed") = 0);
    m.def("fft_peak_candidates", &gpa::fft_peak_candidates, py::arg("image"),
          py::arg("top_k") = 5);

    // morphology ----------------------------------------------------------------
    py::class_<morphology::CrossSectionModel>(m, "CrossSectionModel")
        .def(py::init<>())
        .def_readwrite("gamma_top", &morphology::CrossSectionModel::gamma_top)
        .def_readwrite("gamma_side", &morphology::CrossSectionModel::gamma_side)
        .def_readwrite("gamma_interface", &morphology::CrossSectionModel::gamma_interface)
        .def_readwrite("area", &morphology::CrossSectionModel::area)
        .def_readwrite("misfit", &morphology::CrossSectionModel::misfit)
        .def_readwrite("elastic_modulus", &morphology::CrossSectionModel::elastic_modulus)
        .def_readwrite("relaxation_k", &morphology::CrossSectionModel::relaxation_k)
        .def("validate", &morphology::CrossSectionModel::validate);

    py::class_<morphology::CrossSectionShape>(m, "CrossSectionShape")
        .def_readonly("width", &morphology::CrossSectionShape::width)
        .def_readonly("height", &morphology::CrossSectionShape::height)
        .def_readonly("aspect_ratio", &morphology::CrossSectionShape::aspect_ratio);

    py::class_<morphology::MinimizeResult>(m, "MinimizeResult")
        .def_readonly("aspect_ratio", &morphology::MinimizeResult::aspect_ratio)
        .def_readonly("energy", &morphology::MinimizeResult::energy)
        .def_readonly("shape", &morphology::MinimizeResult::shape)
        .def_readonly("edge_minimum", &morphology::MinimizeResult::edge_minimum)
        .def_readonly("n_evaluations", &morphology::MinimizeResult::n_evaluations);

    m.def(
        "facet_dihedral",
        [](std::array<int, 3> plane1, std::array<int, 3> plane2) {
            return morphology::facet_dihedral(plane1, plane2);
        },
        py::arg("plane1"), py::arg("plane2"));
    m.def("relaxation_factor", &morphology::relaxation_factor, py::arg("relaxation_k"),
          py::arg("aspect_ratio"));
    m.def("total_energy", &morphology::total_energy, py::arg("model"), py::arg("aspect_ratio"));
    m.def("minimize_aspect_ratio", &morphology::minimize_aspect_ratio, py::arg("model"),
          py::arg("r_lo"), py::arg("r_hi"), py::arg("rel_tol") = 1e-8);

    // tlm -------------------------------------------------------------------------
    py::class_<tlm::TlmPoint>(m, "TlmPoint")
        .def(py::init([](double length, double resistance) {
                 return tlm::TlmPoint{length, resistance};
             }),
             py::arg("segment_length"), py::arg("resistance"))
        .def_readwrite("segment_length", &tlm::TlmPoint::segment_length)
        .def_readwrite("resistance", &tlm::TlmPoint::resistance);

    py::class_<tlm::TlmDataset>(m, "TlmDataset")
        .def(py::init<>())
        .def_readwrite("points", &tlm::TlmDataset::points)
        .def_readwrite("n_parallel", &tlm::TlmDataset::n_parallel)
        .def_readwrite("temperature_K", &tlm::TlmDataset::temperature_K)
        .def_readwrite("label", &tlm::TlmDataset::label);

    py::class_<tlm::TlmResult>(m, "TlmResult")
        .def_readonly("contact_resistance", &tlm::TlmResult::contact_resistance)
        .def_readonly("resistance_per_length", &tlm::TlmResult::resistance_per_length)
        .def_readonly("r_squared", &tlm::TlmResult::r_squared)
        .def_readonly("stderr_contact", &tlm::TlmResult::stderr_contact)
        .def_readonly("stderr_per_length", &tlm::TlmResult::stderr_per_length)
        .def_readonly("negative_rc_warning", &tlm::TlmResult::negative_rc_warning);

    py::class_<tlm::ControlComparison>(m, "ControlComparison")
        .def_readonly("ratio", &tlm::ControlComparison::ratio)
        .def_readonly("conduction_attributed", &tlm::ControlComparison::conduction_attributed);

    m.def("fit_tlm", &tlm::fit_tlm, py::arg("data"));
    m.def("control_ratio", &tlm::control_ratio, py::arg("sample_resistance"),
          py::arg("control_resistance"), py::arg("threshold") = 1e5);

    // io ----------------------------------------------------------------------------
    m.def("parse_trace_csv", &io::parse_trace_csv, py::arg("path"));
    m.def("write_trace_csv", &io::write_trace_csv, py::arg("path"), py::arg("trace"));
    m.def("parse_raster", &io::parse_raster, py::arg("path"));
    m.def("write_raster", &io::write_raster, py::arg("path"), py::arg("raster"));
    m.def("parse_tlm_csv", &io::parse_tlm_csv, py::arg("path"));
    m.def("write_tlm_csv", &io::write_tlm_csv, py::arg("path"), py::arg("data"));
    m.def("read_table", &io::read_table, py::arg("path"));
}
