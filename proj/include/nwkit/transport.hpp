#pragma once

#include <optional>

namespace nwkit::transport {

// Contact spacing L and conducting-channel width W, in meters.
struct TransportGeometry {
    double contact_spacing; // L
    double channel_width;   // W

    TransportGeometry(double spacing, double width);

    // The quasi-1D diffusive model assumes l_e << W. Advisory, not an error.
    bool diffusive_regime_ok(double mean_free_path) const;
};

struct WlParams {
    double coherence_length;                 // l_phi, meters
    std::optional<double> spin_orbit_length; // l_so; empty = no spin-orbit term
    TransportGeometry geometry;

    WlParams(double l_phi, TransportGeometry geom);
    WlParams(double l_phi, double l_so, TransportGeometry geom);
};

struct MaterialParams {
    double fermi_velocity; // m/s
    double mean_free_path; // m

    MaterialParams(double v_f, double l_e);
};

// l_m = sqrt(hbar / e|B|). Returns +infinity at B = 0.
double magnetic_length(double field);

// l_B = sqrt(D tau_B) = sqrt(3) l_m^2 / W; the diffusion constant cancels
// and is deliberately not a parameter. Returns +infinity at B = 0.
double magnetic_dephasing_length(double field, double channel_width);

// tau_B = 3 l_m^4 / (W^2 D). Returns +infinity at B = 0.
double magnetic_dephasing_time(double field, double channel_width, double diffusion_constant);

// D_1D = v_F l_e.
double diffusion_constant_1d(const MaterialParams& material);

// Quasi-1D weak-localization correction, even in B and <= 0 everywhere:
//   dG(B) = -(2e^2 / h L) (1/l_phi^2 + 1/l_B^2)^(-1/2)
double wl_delta_g(double field, double l_phi, double channel_width, double contact_spacing);

// Spin-orbit (triplet/singlet) extension; reduces to wl_delta_g as l_so -> inf:
//   dG(B) = -(e^2 / h L) [ 3 (1/l_phi^2 + 4/(3 l_so^2) + 1/l_B^2)^(-1/2)
//                            - (1/l_phi^2 + 1/l_B^2)^(-1/2) ]
double wl_so_delta_g(double field, double l_phi, double l_so, double channel_width,
                     double contact_spacing);

// Typed wrappers. wl_delta_g requires params without l_so, wl_so_delta_g with.
double wl_delta_g(double field, const WlParams& params);
double wl_so_delta_g(double field, const WlParams& params);

} // namespace nwkit::transport
