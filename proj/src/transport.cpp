#include "nwkit/transport.hpp"

#include <cmath>
#include <limits>

#include "nwkit/constants.hpp"
#include "nwkit/errors.hpp"

namespace nwkit::transport {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// 1/l_B^2 = (e W |B| / (sqrt(3) hbar))^2; zero at B = 0 (l_B infinite).
double inverse_lb_squared(double field, double channel_width) {
    const double b = std::abs(field);
    if (b == 0.0)
        return 0.0;
    const double inv_lb = constants::elementary_charge * channel_width * b /
                          (std::sqrt(3.0) * constants::hbar);
    return inv_lb * inv_lb;
}
} // namespace

TransportGeometry::TransportGeometry(double spacing, double width)
    : contact_spacing(spacing), channel_width(width) {
    if (!(spacing > 0.0))
        throw DomainError("contact spacing L must be positive");
    if (!(width > 0.0))
        throw DomainError("channel width W must be positive");
}

bool TransportGeometry::diffusive_regime_ok(double mean_free_path) const {
    if (!(mean_free_path > 0.0))
        throw DomainError("mean free path must be positive");
    return channel_width >= 5.0 * mean_free_path;
}

WlParams::WlParams(double l_phi, TransportGeometry geom)
    : coherence_length(l_phi), spin_orbit_length(std::nullopt), geometry(geom) {
    if (!(l_phi > 0.0))
        throw DomainError("coherence length l_phi must be positive");
}

WlParams::WlParams(double l_phi, double l_so, TransportGeometry geom)
    : coherence_length(l_phi), spin_orbit_length(l_so), geometry(geom) {
    if (!(l_phi > 0.0))
        throw DomainError("coherence length l_phi must be positive");
    if (!(l_so > 0.0))
        throw DomainError("spin-orbit length l_so must be positive");
}

MaterialParams::MaterialParams(double v_f, double l_e)
    : fermi_velocity(v_f), mean_free_path(l_e) {
    if (!(v_f > 0.0))
        throw DomainError("Fermi velocity must be positive");
    if (!(l_e > 0.0))
        throw DomainError("mean free path must be positive");
}

double magnetic_length(double field) {
    const double b = std::abs(field);
    if (b == 0.0)
        return kInf;
    return std::sqrt(constants::hbar / (constants::elementary_charge * b));
}

double magnetic_dephasing_length(double field, double channel_width) {
    if (!(channel_width > 0.0))
        throw DomainError("channel width W must be positive");
    const double b = std::abs(field);
    if (b == 0.0)
        return kInf;
    const double lm = magnetic_length(field);
    return std::sqrt(3.0) * lm * lm / channel_width;
}

double magnetic_dephasing_time(double field, double channel_width, double diffusion_constant) {
    if (!(channel_width > 0.0))
        throw DomainError("channel width W must be positive");
    if (!(diffusion_constant > 0.0))
        throw DomainError("diffusion constant D must be positive");
    const double b = std::abs(field);
    if (b == 0.0)
        return kInf;
    const double lm2 = constants::hbar / (constants::elementary_charge * b);
    return 3.0 * lm2 * lm2 / (channel_width * channel_width * diffusion_constant);
}

double diffusion_constant_1d(const MaterialParams& material) {
    return material.fermi_velocity * material.mean_free_path;
}

double wl_delta_g(double field, double l_phi, double channel_width, double contact_spacing) {
    if (!(l_phi > 0.0))
        throw DomainError("coherence length l_phi must be positive");
    if (!(contact_spacing > 0.0))
        throw DomainError("contact spacing L must be positive");
    const double rate = 1.0 / (l_phi * l_phi) + inverse_lb_squared(field, channel_width);
    return -(constants::conductance_quantum / contact_spacing) / std::sqrt(rate);
}

double wl_so_delta_g(double field, double l_phi, double l_so, double channel_width,
                     double contact_spacing) {
    if (!(l_phi > 0.0))
        throw DomainError("coherence length l_phi must be positive");
    if (!(l_so > 0.0))
        throw DomainError("spin-orbit length l_so must be positive");
    if (!(contact_spacing > 0.0))
        throw DomainError("contact spacing L must be positive");
    const double inv_lb2 = inverse_lb_squared(field, channel_width);
    const double singlet_rate = 1.0 / (l_phi * l_phi) + inv_lb2;
    const double triplet_rate = singlet_rate + 4.0 / (3.0 * l_so * l_so);
    return -(0.5 * constants::conductance_quantum / contact_spacing) *
           (3.0 / std::sqrt(triplet_rate) - 1.0 / std::sqrt(singlet_rate));
}

double wl_delta_g(double field, const WlParams& params) {
    if (params.spin_orbit_length)
        throw DomainError("base WL model takes params without a spin-orbit length");
    return wl_delta_g(field, params.coherence_length, params.geometry.channel_width,
                      params.geometry.contact_spacing);
}

double wl_so_delta_g(double field, const WlParams& params) {
    if (!params.spin_orbit_length)
        throw DomainError("spin-orbit WL model requires a spin-orbit length");
    return wl_so_delta_g(field, params.coherence_length, *params.spin_orbit_length,
                         params.geometry.channel_width, params.geometry.contact_spacing);
}

} // namespace nwkit::transport
