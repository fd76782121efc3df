#include "nwkit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nwkit/constants.hpp"
#include "nwkit/errors.hpp"
#include "nwkit/rng.hpp"

namespace nwkit::fitting {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_length_name(const std::string& name) {
    return name == "l_phi" || name == "l_so" || name == "W" || name == "L";
}

// Resolves the free/fixed split and evaluates the model for a free-parameter
// vector. Canonical free order: l_phi, l_so, W, G_bg.
struct ParameterLayout {
    WlModel model = WlModel::base;
    double contact_spacing = 0.0;
    std::vector<std::string> free_names;
    std::map<std::string, double> fixed;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < free_names.size(); ++i)
            if (free_names[i] == name)
                return static_cast<int>(i);
        return -1;
    }

    double value(const std::string& name, const Eigen::VectorXd& theta) const {
        const int idx = index_of(name);
        if (idx >= 0)
            return theta[idx];
        const auto it = fixed.find(name);
        if (it != fixed.end())
            return it->second;
        throw DomainError("parameter '" + name + "' is neither free nor fixed");
    }

    bool valid_point(const Eigen::VectorXd& theta) const {
        for (std::size_t i = 0; i < free_names.size(); ++i)
            if (is_length_name(free_names[i]) && !(theta[static_cast<Eigen::Index>(i)] > 0.0))
                return false;
        return true;
    }

    Eigen::VectorXd model_values(const Eigen::VectorXd& theta,
                                 const std::vector<double>& fields) const {
        const double l_phi = value("l_phi", theta);
        const double width = value("W", theta);
        const double g_bg = value("G_bg", theta);
        const double l_so = model == WlModel::spin_orbit ? value("l_so", theta) : 0.0;
        Eigen::VectorXd out(static_cast<Eigen::Index>(fields.size()));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const double dg =
                model == WlModel::spin_orbit
                    ? transport::wl_so_delta_g(fields[i], l_phi, l_so, width, contact_spacing)
                    : transport::wl_delta_g(fields[i], l_phi, width, contact_spacing);
            out[static_cast<Eigen::Index>(i)] = g_bg + dg;
        }
        return out;
    }
};

struct FitData {
    std::vector<double> fields;
    std::vector<double> per_wire_g; // conductance / n_parallel
};

FitData select_fit_data(const MagnetoTrace& trace, const FitConfig& config) {
    trace.validate();
    FitData data;
    for (std::size_t i = 0; i < trace.field.size(); ++i) {
        const double b = std::abs(trace.field[i]);
        if (b < config.field_window_min || b > config.field_window_max)
            continue;
        data.fields.push_back(trace.field[i]);
        data.per_wire_g.push_back(trace.conductance[i] / trace.n_parallel);
    }
    if (data.fields.size() < 5)
        throw DomainError("fewer than 5 points inside the fit window");
    double min_abs = kInf, max_abs = 0.0;
    for (double b : data.fields) {
        min_abs = std::min(min_abs, std::abs(b));
        max_abs = std::max(max_abs, std::abs(b));
    }
    // Dynamic-range guard: the dip needs near-zero-field points, the
    // background needs high-field ones.
    if (!(min_abs <= 0.5 && max_abs >= 2.0))
        throw DomainError(
            "fit requires field coverage with at least one |B| <= 0.5 T and one |B| >= 2 T");
    return data;
}

ParameterLayout build_layout(const FitConfig& config, const FitData& data,
                             Eigen::VectorXd& init_out, Eigen::VectorXd& scales_out) {
    if (config.max_iterations < 1)
        throw DomainError("max_iterations must be >= 1");
    for (const auto& [name, val] : config.initial)
        if (is_length_name(name) && !(val > 0.0))
            throw DomainError("initial guess for '" + name + "' must be positive");

    ParameterLayout layout;
    layout.model = config.model;
    layout.fixed = config.fixed;

    const auto it_l = config.fixed.find("L");
    if (it_l == config.fixed.end())
        throw DomainError("contact spacing 'L' must be supplied as a fixed parameter");
    if (!(it_l->second > 0.0))
        throw DomainError("contact spacing 'L' must be positive");
    layout.contact_spacing = it_l->second;

    const auto is_fixed = [&](const std::string& n) { return config.fixed.count(n) > 0; };
    const auto has_init = [&](const std::string& n) { return config.initial.count(n) > 0; };

    std::vector<std::string> free_names;
    if (!is_fixed("l_phi"))
        free_names.push_back("l_phi");
    if (config.model == WlModel::spin_orbit && !is_fixed("l_so"))
        free_names.push_back("l_so");
    if (!is_fixed("W")) {
        if (!has_init("W"))
            throw DomainError("channel width 'W' must be fixed or given an initial guess");
        free_names.push_back("W");
    }
    if (!is_fixed("G_bg"))
        free_names.push_back("G_bg");
    if (free_names.empty())
        throw DomainError("no free parameters to fit");
    layout.free_names = free_names;

    if (config.fixed.count("W") && !(config.fixed.at("W") > 0.0))
        throw DomainError("channel width 'W' must be positive");
    if (config.fixed.count("l_phi") && !(config.fixed.at("l_phi") > 0.0))
        throw DomainError("fixed 'l_phi' must be positive");
    if (config.model == WlModel::spin_orbit && config.fixed.count("l_so") &&
        !(config.fixed.at("l_so") > 0.0))
        throw DomainError("fixed 'l_so' must be positive");

    // Data-driven defaults: the dip amplitude sets l_phi's scale, the maximum
    // conductance the background's.
    const auto [y_min_it, y_max_it] =
        std::minmax_element(data.per_wire_g.begin(), data.per_wire_g.end());
    const double amplitude = *y_max_it - *y_min_it;
    const double quantum_per_l = constants::conductance_quantum / layout.contact_spacing;
    const double l_phi_guess =
        std::clamp(amplitude / quantum_per_l, 1e-9, 1e-5);
    double max_abs_y = 0.0;
    for (double y : data.per_wire_g)
        max_abs_y = std::max(max_abs_y, std::abs(y));

    init_out.resize(static_cast<Eigen::Index>(free_names.size()));
    scales_out.resize(static_cast<Eigen::Index>(free_names.size()));
    for (std::size_t j = 0; j < free_names.size(); ++j) {
        const std::string& name = free_names[j];
        double v;
        if (config.initial.count(name)) {
            v = config.initial.at(name);
        } else if (name == "l_phi") {
            v = l_phi_guess;
        } else if (name == "l_so") {
            v = 2.0 * (config.initial.count("l_phi") ? config.initial.at("l_phi") : l_phi_guess);
        } else if (name == "G_bg") {
            v = *y_max_it;
        } else {
            throw DomainError("parameter '" + name + "' requires an initial guess");
        }
        init_out[static_cast<Eigen::Index>(j)] = v;
        const double floor = is_length_name(name) ? 1e-10 : std::max(1e-9, 1e-3 * max_abs_y);
        scales_out[static_cast<Eigen::Index>(j)] = std::max(std::abs(v), floor);
    }
    return layout;
}

double chi_squared(const Eigen::VectorXd& model, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - model[static_cast<Eigen::Index>(i)];
        sum += r * r;
    }
    return sum;
}

} // namespace

void MagnetoTrace::validate() const {
    if (field.size() != conductance.size())
        throw DomainError("field and conductance arrays differ in length");
    if (field.size() < 5)
        throw DomainError("trace needs at least 5 points");
    if (n_parallel < 1)
        throw DomainError("n_parallel must be >= 1");
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (!std::isfinite(field[i]) || !std::isfinite(conductance[i]))
            throw DomainError("trace contains non-finite values");
        if (i > 0 && field[i] < field[i - 1])
            throw DomainError("field values must be ascending");
    }
}

transport::WlParams FitResult::wl_params() const {
    transport::TransportGeometry geom(contact_spacing, channel_width);
    if (l_so)
        return transport::WlParams(l_phi, *l_so, geom);
    return transport::WlParams(l_phi, geom);
}

Eigen::MatrixXd numerical_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double relative_step, const Eigen::VectorXd& scales) {
    const Eigen::Index p = x.size();
    Eigen::MatrixXd jac;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double scale = scales.size() == p ? scales[j] : 0.0;
        double h = relative_step * std::max(std::abs(x[j]), scale);
        if (h == 0.0)
            h = relative_step;
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Eigen::VectorXd fp = f(xp);
        const Eigen::VectorXd fm = f(xm);
        if (jac.size() == 0)
            jac.resize(fp.size(), p);
        jac.col(j) = (fp - fm) / (2.0 * h);
    }
    return jac;
}

Uncertainty parameter_uncertainty(const Eigen::MatrixXd& jacobian,
                                  const Eigen::VectorXd& residuals,
                                  const std::vector<std::string>& names) {
    const Eigen::Index n = jacobian.rows();
    const Eigen::Index p = jacobian.cols();
    if (residuals.size() != n)
        throw DomainError("residual length does not match the Jacobian");
    if (n < p)
        throw DegenerateFitError(names.empty() ? "p0" : names.front());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = sv[0] * std::max(n, p) * std::numeric_limits<double>::epsilon();
    if (!(sv[0] > 0.0) || sv[p - 1] <= tol) {
        // Name the parameter dominating the null direction.
        Eigen::Index worst = 0;
        svd.matrixV().col(p - 1).cwiseAbs().maxCoeff(&worst);
        std::string name = worst < static_cast<Eigen::Index>(names.size())
                               ? names[static_cast<std::size_t>(worst)]
                               : "p" + std::to_string(worst);
        throw DegenerateFitError(name);
    }

    const double chi2 = residuals.squaredNorm();
    const double s2 = n > p ? chi2 / static_cast<double>(n - p) : 0.0;
    const Eigen::VectorXd inv_sv2 = sv.array().square().inverse();
    Eigen::MatrixXd cov =
        svd.matrixV() * inv_sv2.asDiagonal() * svd.matrixV().transpose() * s2;
    cov = 0.5 * (cov + cov.transpose()).eval(); // exact symmetry
    Uncertainty out;
    out.covariance = cov;
    out.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return out;
}

FitResult fit_wl(const MagnetoTrace& trace, const FitConfig& config) {
    const FitData data = select_fit_data(trace, config);
    const auto n = static_cast<Eigen::Index>(data.fields.size());

    const auto [y_min, y_max] =
        std::minmax_element(data.per_wire_g.begin(), data.per_wire_g.end());
    if (*y_max - *y_min <= 1e-14 * std::max(std::abs(*y_max), std::abs(*y_min)))
        throw DegenerateFitError("l_phi"); // flat trace: no field dependence to fit

    Eigen::VectorXd theta, scales;
    const ParameterLayout layout = build_layout(config, data, theta, scales);
    const auto p = static_cast<Eigen::Index>(layout.free_names.size());
    if (n <= p)
        throw DomainError("more free parameters than data points");

    const auto model_fn = [&](const Eigen::VectorXd& t) {
        return layout.model_values(t, data.fields);
    };
    const auto residual_of = [&](const Eigen::VectorXd& m) {
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i)
            r[i] = data.per_wire_g[static_cast<std::size_t>(i)] - m[i];
        return r;
    };

    Eigen::VectorXd model = model_fn(theta);
    double chi2 = chi_squared(model, data.per_wire_g);
    double damping = config.damping_init;
    bool converged = false;
    int iterations = 0;
    std::string message;
    std::vector<double> history{chi2};

    while (iterations < config.max_iterations && !converged) {
        ++iterations;
        const Eigen::MatrixXd jac = numerical_jacobian(model_fn, theta, 1e-6, scales);
        const Eigen::MatrixXd normal = jac.transpose() * jac;
        const double max_diag = normal.diagonal().maxCoeff();
        if (!(max_diag > 0.0))
            throw DegenerateFitError(layout.free_names.front());
        for (Eigen::Index j = 0; j < p; ++j)
            if (normal(j, j) <= 1e-24 * max_diag)
                throw DegenerateFitError(layout.free_names[static_cast<std::size_t>(j)]);

        const Eigen::VectorXd gradient = jac.transpose() * residual_of(model);

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = normal;
            damped.diagonal() += damping * normal.diagonal();
            const Eigen::VectorXd step = damped.ldlt().solve(gradient);
            const Eigen::VectorXd candidate = theta + step;
            double cand_chi2 = kInf;
            if (layout.valid_point(candidate) && step.allFinite()) {
                const Eigen::VectorXd cand_model = model_fn(candidate);
                cand_chi2 = chi_squared(cand_model, data.per_wire_g);
                if (cand_chi2 <= chi2) {
                    double rel_step = 0.0;
                    for (Eigen::Index j = 0; j < p; ++j)
                        rel_step = std::max(
                            rel_step, std::abs(step[j]) / std::max(std::abs(theta[j]), scales[j]));
                    theta = candidate;
                    model = cand_model;
                    chi2 = cand_chi2;
                    history.push_back(chi2);
                    damping *= 0.5;
                    accepted = true;
                    if (rel_step < config.convergence_tol)
                        converged = true;
                    break;
                }
            }
            damping *= 4.0;
            if (damping > 1e16) {
                message = "damping exhausted without an accepted step";
                break;
            }
        }
        if (!accepted)
            break;
    }
    if (!converged && message.empty())
        message = "iteration limit reached before the step tolerance";

    FitResult result;
    result.l_phi = layout.value("l_phi", theta);
    if (config.model == WlModel::spin_orbit)
        result.l_so = layout.value("l_so", theta);
    result.channel_width = layout.value("W", theta);
    result.contact_spacing = layout.contact_spacing;
    result.background = layout.value("G_bg", theta);
    result.free_names = layout.free_names;
    result.free_values = theta;
    result.chi2 = chi2;
    result.n_iterations = iterations;
    result.converged = converged;
    result.chi2_history = std::move(history);
    result.message = message;

    const Eigen::MatrixXd jac = numerical_jacobian(model_fn, theta, 1e-6, scales);
    const Uncertainty unc = parameter_uncertainty(jac, residual_of(model), layout.free_names);
    result.std_errors = unc.std_errors;
    result.covariance = unc.covariance;
    return result;
}

double chi2_quantile_1dof(double confidence) {
    if (!(confidence >= 0.0 && confidence < 1.0))
        throw DomainError("confidence must lie in [0, 1)");
    if (confidence == 0.0)
        return 0.0;
    // Solve erf(z) = confidence; quantile = 2 z^2.
    double lo = 0.0, hi = 10.0;
    double z = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double err = std::erf(z) - confidence;
        if (err > 0.0)
            hi = z;
        else
            lo = z;
        const double derivative = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-z * z);
        double next = z - err / derivative;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - z) <= 1e-15 * std::max(1.0, std::abs(z))) {
            z = next;
            break;
        }
        z = next;
    }
    return 2.0 * z * z;
}

LsoBound lso_lower_bound(const MagnetoTrace& trace, const FitConfig& config, double confidence) {
    if (config.model != WlModel::spin_orbit)
        throw DomainError("lso_lower_bound requires the spin_orbit model");
    if (!(config.lso_grid_min > 0.0) || !(config.lso_grid_max > config.lso_grid_min))
        throw DomainError("invalid l_so profile grid");
    if (config.lso_grid_per_decade < 1)
        throw DomainError("lso_grid_per_decade must be >= 1");

    FitConfig base_cfg = config;
    base_cfg.model = WlModel::base;
    base_cfg.fixed.erase("l_so");
    base_cfg.initial.erase("l_so");
    const FitResult base = fit_wl(trace, base_cfg);
    if (!base.converged)
        throw FitError("l_so profile requires a converged base-model fit");

    const double decades = std::log10(config.lso_grid_max / config.lso_grid_min);
    const int n_grid =
        std::max(2, static_cast<int>(std::lround(decades * config.lso_grid_per_decade)) + 1);
    const double log_max = std::log(config.lso_grid_max);
    const double log_min = std::log(config.lso_grid_min);

    FitConfig prof_cfg = config;
    prof_cfg.initial.erase("l_so");
    prof_cfg.initial["l_phi"] = base.l_phi;
    prof_cfg.initial["G_bg"] = base.background;
    if (!config.fixed.count("W"))
        prof_cfg.initial["W"] = base.channel_width;

    LsoBound bound;
    bound.profile.reserve(static_cast<std::size_t>(n_grid));
    int free_count = 0;
    for (int k = 0; k < n_grid; ++k) {
        const double t = static_cast<double>(k) / (n_grid - 1);
        const double l_so = std::exp(log_max + t * (log_min - log_max));
        prof_cfg.fixed["l_so"] = l_so;
        const FitResult fr = fit_wl(trace, prof_cfg);
        bound.profile.emplace_back(l_so, fr.chi2);
        free_count = static_cast<int>(fr.free_names.size());
        // Warm start the next, slightly smaller l_so.
        prof_cfg.initial["l_phi"] = fr.l_phi;
        prof_cfg.initial["G_bg"] = fr.background;
        if (!config.fixed.count("W"))
            prof_cfg.initial["W"] = fr.channel_width;
    }

    double chi2_min = kInf;
    for (const auto& [lso, chi2] : bound.profile)
        chi2_min = std::min(chi2_min, chi2);
    bound.chi2_min = chi2_min;

    const FitData data = select_fit_data(trace, config);
    const int n_points = static_cast<int>(data.fields.size());
    const int p_total = free_count + 1; // profiled l_so counts as a parameter
    const double sigma2_hat = chi2_min / std::max(1, n_points - p_total);
    bound.threshold = chi2_min + chi2_quantile_1dof(confidence) * sigma2_hat;

    double smallest_accepted = kInf;
    std::size_t n_accepted = 0;
    for (const auto& [lso, chi2] : bound.profile) {
        if (chi2 <= bound.threshold) {
            ++n_accepted;
            smallest_accepted = std::min(smallest_accepted, lso);
        }
    }
    if (n_accepted == bound.profile.size()) {
        bound.bounded = false;
        bound.lower_bound = config.lso_grid_min;
    } else {
        bound.bounded = true;
        bound.lower_bound = smallest_accepted;
    }
    return bound;
}

MagnetoTrace simulate_trace(const transport::WlParams& params, double background,
                            const std::vector<double>& field_grid, double noise_sigma,
                            std::uint64_t seed) {
    if (field_grid.empty())
        throw DomainError("field grid must be nonempty");
    if (noise_sigma < 0.0)
        throw DomainError("noise_sigma must be nonnegative");
    Rng rng(seed);
    MagnetoTrace trace;
    trace.field = field_grid;
    trace.conductance.reserve(field_grid.size());
    for (double b : field_grid) {
        const double dg = params.spin_orbit_length ? transport::wl_so_delta_g(b, params)
                                                   : transport::wl_delta_g(b, params);
        double g = background + dg;
        if (noise_sigma > 0.0)
            g += noise_sigma * rng.normal();
        trace.conductance.push_back(g);
    }
    trace.n_parallel = 1;
    trace.label = "synthetic";
    return trace;
}

} // namespace nwkit::fitting
