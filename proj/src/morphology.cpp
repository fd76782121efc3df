#include "nwkit/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nwkit/errors.hpp"

namespace nwkit::morphology {

void CrossSectionModel::validate() const {
    if (gamma_top < 0.0 || gamma_side < 0.0 || gamma_interface < 0.0)
        throw DomainError("surface energies must be nonnegative");
    if (!(area > 0.0))
        throw DomainError("cross-section area must be positive");
    if (!(elastic_modulus > 0.0))
        throw DomainError("elastic modulus must be positive");
    if (relaxation_k < 0.0)
        throw DomainError("relaxation_k must be nonnegative");
    if (!std::isfinite(misfit))
        throw DomainError("misfit must be finite");
}

CrossSectionShape shape_for_aspect_ratio(double area, double aspect_ratio) {
    if (!(area > 0.0))
        throw DomainError("cross-section area must be positive");
    if (!(aspect_ratio > 0.0))
        throw DomainError("aspect ratio must be positive");
    CrossSectionShape s;
    s.height = std::sqrt(area * aspect_ratio);
    s.width = std::sqrt(area / aspect_ratio);
    s.aspect_ratio = aspect_ratio;
    return s;
}

double facet_dihedral(const std::array<int, 3>& plane1, const std::array<int, 3>& plane2) {
    if ((plane1[0] == 0 && plane1[1] == 0 && plane1[2] == 0) ||
        (plane2[0] == 0 && plane2[1] == 0 && plane2[2] == 0))
        throw DomainError("Miller index triple must be nonzero");
    // atan2(|n1 x n2|, |n1 . n2|) equals acos(|n1.n2|/|n1||n2|) but stays
    // exact for parallel (cross = 0) and orthogonal (dot = 0) index triples.
    const long long dot = static_cast<long long>(plane1[0]) * plane2[0] +
                          static_cast<long long>(plane1[1]) * plane2[1] +
                          static_cast<long long>(plane1[2]) * plane2[2];
    const long long cx = static_cast<long long>(plane1[1]) * plane2[2] -
                         static_cast<long long>(plane1[2]) * plane2[1];
    const long long cy = static_cast<long long>(plane1[2]) * plane2[0] -
                         static_cast<long long>(plane1[0]) * plane2[2];
    const long long cz = static_cast<long long>(plane1[0]) * plane2[1] -
                         static_cast<long long>(plane1[1]) * plane2[0];
    const double cross = std::sqrt(static_cast<double>(cx) * cx + static_cast<double>(cy) * cy +
                                   static_cast<double>(cz) * cz);
    return std::atan2(cross, std::abs(static_cast<double>(dot))) * 180.0 / std::numbers::pi;
}

double relaxation_factor(double relaxation_k, double aspect_ratio) {
    if (relaxation_k < 0.0)
        throw DomainError("relaxation_k must be nonnegative");
    if (aspect_ratio < 0.0)
        throw DomainError("aspect ratio must be nonnegative");
    return 1.0 / (1.0 + relaxation_k * aspect_ratio);
}

double total_energy(const CrossSectionModel& model, double aspect_ratio) {
    model.validate();
    if (!(aspect_ratio > 0.0))
        throw DomainError("aspect ratio must be positive");
    const CrossSectionShape s = shape_for_aspect_ratio(model.area, aspect_ratio);
    const double surface =
        2.0 * model.gamma_side * s.height + (model.gamma_top - model.gamma_interface) * s.width;
    const double strain = model.elastic_modulus * model.misfit * model.misfit * model.area *
                          relaxation_factor(model.relaxation_k, aspect_ratio);
    return surface + strain;
}

MinimizeResult minimize_aspect_ratio(const CrossSectionModel& model, double r_lo, double r_hi,
                                     double rel_tol) {
    model.validate();
    if (!(r_lo > 0.0) || !(r_hi > r_lo))
        throw DomainError("bracket must satisfy 0 < r_lo < r_hi");
    if (!(rel_tol > 0.0))
        throw DomainError("rel_tol must be positive");

    int evals = 0;
    const auto energy = [&](double r) {
        ++evals;
        return total_energy(model, r);
    };

    constexpr double kInvPhi = 0.6180339887498949; // 1/phi
    double a = r_lo, b = r_hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = energy(x1);
    double f2 = energy(x2);
    // Tolerance is relative to the probe points, so wide log-scale brackets
    // still resolve small optima.
    while (b - a > rel_tol * (std::abs(x1) + std::abs(x2)) && evals < 500) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = energy(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = energy(x2);
        }
    }

    MinimizeResult result;
    double r_star = f1 < f2 ? x1 : x2;
    double e_star = std::min(f1, f2);

    // An argmin pinned at (or beaten by) an edge means the bracket holds no
    // interior minimum.
    const double e_lo = total_energy(model, r_lo);
    const double e_hi = total_energy(model, r_hi);
    const double span = r_hi - r_lo;
    const bool near_edge =
        r_star - r_lo < 4.0 * rel_tol * span || r_hi - r_star < 4.0 * rel_tol * span;
    if (e_lo <= e_star) {
        r_star = r_lo;
        e_star = e_lo;
        result.edge_minimum = true;
    } else if (e_hi <= e_star) {
        r_star = r_hi;
        e_star = e_hi;
        result.edge_minimum = true;
    } else if (near_edge) {
        result.edge_minimum = true;
    }

    result.aspect_ratio = r_star;
    result.energy = e_star;
    result.shape = shape_for_aspect_ratio(model.area, r_star);
    result.n_evaluations = evals;
    return result;
}

} // namespace nwkit::morphology
