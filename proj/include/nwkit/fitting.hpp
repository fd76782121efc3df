#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nwkit/transport.hpp"

namespace nwkit::fitting {

// One conductance-vs-field sweep. `conductance` is the measured total for
// `n_parallel` identical wires; fits normalize to per-wire values first.
struct MagnetoTrace {
    std::vector<double> field;       // tesla, ascending
    std::vector<double> conductance; // siemens
    double bias_mV = 0.0;
    double temperature_K = 0.0;
    int n_parallel = 1;
    std::string label;

    // Throws DomainError on violated invariants (length >= 5, equal lengths,
    // finite values, ascending field, n_parallel >= 1).
    void validate() const;
};

enum class WlModel { base, spin_orbit };

// Parameter names understood by the fitter: "l_phi", "l_so", "W", "L", "G_bg".
// "L" must always be fixed. "W" defaults to fixed; list it in `initial`
// (and not in `fixed`) to free it. "l_phi" and "G_bg" are free by default
// with data-driven starting guesses when no initial value is given.
struct FitConfig {
    WlModel model = WlModel::base;
    std::map<std::string, double> fixed;
    std::map<std::string, double> initial;
    int max_iterations = 100;
    double convergence_tol = 1e-10; // relative parameter step
    double damping_init = 1e-3;

    // Optional fit window on |B|; default uses the whole sweep.
    double field_window_min = 0.0;
    double field_window_max = std::numeric_limits<double>::infinity();

    // l_so profile-scan grid (lso_lower_bound).
    double lso_grid_min = 10e-9;
    double lso_grid_max = 10e-6;
    int lso_grid_per_decade = 60;
};

struct FitResult {
    double l_phi = 0.0;
    std::optional<double> l_so;
    double channel_width = 0.0;
    double contact_spacing = 0.0;
    double background = 0.0; // per-wire G_bg

    std::vector<std::string> free_names;
    Eigen::VectorXd free_values;
    Eigen::VectorXd std_errors;
    Eigen::MatrixXd covariance;
    double chi2 = 0.0;
    int n_iterations = 0;
    bool converged = false;
    std::vector<double> chi2_history; // accepted steps; non-increasing
    std::string message;

    transport::WlParams wl_params() const;
};

// Damped Gauss-Newton least squares of per-wire conductance against
// G_bg + dG_model(B). Non-convergence is reported in the result, never
// thrown; unidentifiable parameters throw DegenerateFitError.
FitResult fit_wl(const MagnetoTrace& trace, const FitConfig& config);

struct Uncertainty {
    Eigen::VectorXd std_errors;
    Eigen::MatrixXd covariance;
};

// Linearized covariance s^2 (J^T J)^-1 with s^2 = chi2 / (n - p)
// (0 when n == p). Throws DegenerateFitError naming the parameter along
// the null direction when J is rank deficient.
Uncertainty parameter_uncertainty(const Eigen::MatrixXd& jacobian,
                                  const Eigen::VectorXd& residuals,
                                  const std::vector<std::string>& names = {});

struct LsoBound {
    double lower_bound = 0.0; // meters; meaningful only when bounded
    bool bounded = false;     // false: no grid value rejected (uninformative data)
    double chi2_min = 0.0;
    double threshold = 0.0;
    std::vector<std::pair<double, double>> profile; // (l_so, chi2), descending l_so
};

// Profile scan: refit the remaining free parameters on a descending log grid
// of fixed l_so; the bound is the smallest l_so with
// chi2 <= chi2_min + quantile(confidence) * chi2_min/(n - p).
LsoBound lso_lower_bound(const MagnetoTrace& trace, const FitConfig& config, double confidence);

// Synthetic trace G_i = background + dG(B_i) + N(0, noise_sigma), seeded and
// bit-reproducible. The model (base vs spin-orbit) follows params.
MagnetoTrace simulate_trace(const transport::WlParams& params, double background,
                            const std::vector<double>& field_grid, double noise_sigma,
                            std::uint64_t seed);

// Central-difference Jacobian used by the fitter. Step per column:
// relative_step * max(|x_j|, scale_j) with scale_j = 0 when no scale given.
Eigen::MatrixXd numerical_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double relative_step = 1e-6, const Eigen::VectorXd& scales = Eigen::VectorXd());

// Quantile of chi^2 with 1 dof, e.g. 0.95 -> 3.8415.
double chi2_quantile_1dof(double confidence);

} // namespace nwkit::fitting
