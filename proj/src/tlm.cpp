#include "nwkit/tlm.hpp"

#include <algorithm>
#include <cmath>

#include "nwkit/errors.hpp"

namespace nwkit::tlm {

void TlmDataset::validate() const {
    if (points.size() < 2)
        throw DomainError("TLM dataset needs at least 2 points");
    if (n_parallel < 1)
        throw DomainError("n_parallel must be >= 1");
    bool distinct = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].segment_length > 0.0))
            throw DomainError("segment lengths must be positive");
        if (!(points[i].resistance > 0.0))
            throw DomainError("resistances must be positive");
        if (i > 0 && points[i].segment_length != points[0].segment_length)
            distinct = true;
    }
    if (!distinct)
        throw DegenerateFitError("resistance_per_length");
}

TlmResult fit_tlm(const TlmDataset& data) {
    data.validate();
    const auto n = static_cast<double>(data.points.size());

    double mean_l = 0.0, mean_r = 0.0;
    for (const auto& p : data.points) {
        mean_l += p.segment_length;
        mean_r += p.resistance * data.n_parallel;
    }
    mean_l /= n;
    mean_r /= n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : data.points) {
        const double dl = p.segment_length - mean_l;
        const double dr = p.resistance * data.n_parallel - mean_r;
        sxx += dl * dl;
        sxy += dl * dr;
    }
    if (!(sxx > 0.0))
        throw DegenerateFitError("resistance_per_length");

    const double slope = sxy / sxx;
    const double intercept = mean_r - slope * mean_l;

    double ssr = 0.0, sst = 0.0;
    for (const auto& p : data.points) {
        const double r = p.resistance * data.n_parallel;
        const double fit = intercept + slope * p.segment_length;
        ssr += (r - fit) * (r - fit);
        sst += (r - mean_r) * (r - mean_r);
    }

    TlmResult result;
    result.resistance_per_length = slope;
    result.contact_resistance = intercept / 2.0;
    result.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    result.r_squared = std::clamp(result.r_squared, 0.0, 1.0);

    const double s2 = data.points.size() > 2 ? ssr / (n - 2.0) : 0.0;
    result.stderr_per_length = std::sqrt(s2 / sxx);
    result.stderr_contact = 0.5 * std::sqrt(s2 * (1.0 / n + mean_l * mean_l / sxx));
    result.negative_rc_warning = result.contact_resistance < 0.0;
    return result;
}

ControlComparison control_ratio(double sample_resistance, double control_resistance,
                                double threshold) {
    if (!(sample_resistance > 0.0) || !(control_resistance > 0.0))
        throw DomainError("resistances must be positive");
    if (!(threshold > 0.0))
        throw DomainError("threshold must be positive");
    ControlComparison out;
    out.ratio = control_resistance / sample_resistance;
    out.conduction_attributed = out.ratio >= threshold;
    return out;
}

} // namespace nwkit::tlm
