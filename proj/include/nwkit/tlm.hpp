#pragma once

#include <string>
#include <vector>

namespace nwkit::tlm {

struct TlmPoint {
    double segment_length; // meters
    double resistance;     // ohms, as measured across the parallel array
};

struct TlmDataset {
    std::vector<TlmPoint> points;
    int n_parallel = 1;
    double temperature_K = 0.0;
    std::string label;

    void validate() const;
};

// Two-contact convention: per-wire R(L) = 2 Rc + rho_lin L.
struct TlmResult {
    double contact_resistance = 0.0;     // Rc per contact, per wire (ohm)
    double resistance_per_length = 0.0;  // rho_lin per wire (ohm/m)
    double r_squared = 0.0;
    double stderr_contact = 0.0;
    double stderr_per_length = 0.0;
    bool negative_rc_warning = false; // non-physical intercept, still reported
};

// Ordinary least squares of per-wire resistance (measured R x n_parallel)
// against segment length. Throws DegenerateFitError when all lengths match.
TlmResult fit_tlm(const TlmDataset& data);

struct ControlComparison {
    double ratio = 0.0; // control / sample
    bool conduction_attributed = false;
};

// Flags conduction as attributed to the deposited wires when the
// control/sample resistance ratio reaches `threshold` (default five orders).
ControlComparison control_ratio(double sample_resistance, double control_resistance,
                                double threshold = 1e5);

} // namespace nwkit::tlm
