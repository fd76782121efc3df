#pragma once

#include <array>

namespace nwkit::morphology {

// Inputs of the cross-section energy model. All coefficients are user
// configuration, not asserted material constants.
struct CrossSectionModel {
    double gamma_top = 0.0;       // (111) top facet surface energy, J/m^2
    double gamma_side = 0.0;      // (110) side facet surface energy, J/m^2
    double gamma_interface = 0.0; // energy replaced at the base, J/m^2
    double area = 0.0;            // fixed cross-section area, m^2
    double misfit = 0.0;          // lattice misfit strain; compressive < 0
    double elastic_modulus = 0.0; // effective biaxial modulus, Pa
    double relaxation_k = 0.0;    // dimensionless relaxation rate

    void validate() const;
};

// Rectangular cross-section of fixed area: h = sqrt(A r), w = sqrt(A / r).
struct CrossSectionShape {
    double width = 0.0;
    double height = 0.0;
    double aspect_ratio = 0.0; // h / w
};

CrossSectionShape shape_for_aspect_ratio(double area, double aspect_ratio);

// Angle between cubic lattice planes, degrees in [0, 90].
double facet_dihedral(const std::array<int, 3>& plane1, const std::array<int, 3>& plane2);

// Strain relaxation factor R(r) = 1 / (1 + k r); R(0) = 1, decreasing in r.
double relaxation_factor(double relaxation_k, double aspect_ratio);

// Energy per unit wire length:
//   E(r) = 2 gamma_side h + (gamma_top - gamma_interface) w
//          + M eps0^2 A R(r)
double total_energy(const CrossSectionModel& model, double aspect_ratio);

struct MinimizeResult {
    double aspect_ratio = 0.0;
    double energy = 0.0;
    CrossSectionShape shape;
    bool edge_minimum = false; // argmin pinned at a bracket edge
    int n_evaluations = 0;
};

// Golden-section search over [r_lo, r_hi] to a relative tolerance on r.
MinimizeResult minimize_aspect_ratio(const CrossSectionModel& model, double r_lo, double r_hi,
                                     double rel_tol = 1e-8);

} // namespace nwkit::morphology
