#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nwkit::gpa {

// Row-major raster. Pixel (row r, col c) sits at physical
// (x, y) = (c, r) * pixel_size_nm; reciprocal vectors are in cycles/nm.
struct Raster {
    int rows = 0;
    int cols = 0;
    double pixel_size_nm = 1.0;
    std::vector<double> values;

    static Raster zeros(int rows, int cols, double pixel_size_nm);

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }

    // Lattice-image invariants: dims >= 32, positive pixel size, finite values.
    void validate_lattice_image() const;
};

struct ReciprocalPeak {
    double gx; // cycles/nm
    double gy;
    double mask_sigma; // cycles/nm, in (0, |g|/2) so the mask clears the central beam

    ReciprocalPeak(double gx, double gy, double mask_sigma);
    double magnitude() const;
};

// |g|/6, the default Gaussian mask width.
double default_mask_sigma(double gx, double gy);

// Axis-aligned pixel rectangle; x0 is a column index, y0 a row index.
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;
};

struct StrainMap {
    Raster raster;
    Rect reference_region;
    // Frame of pixels computed with one-sided differences; treat as untrusted.
    int border_px = 1;
};

// FFT -> Gaussian mask at the peak -> inverse FFT -> phase minus the carrier
// 2 pi g.r, wrapped to (-pi, pi].
Raster compute_phase_map(const Raster& image, const ReciprocalPeak& peak);

// Deterministic row-wise unwrap with first-column seam alignment. Noisy
// pixels can propagate along their row; no quality guiding.
Raster unwrap_phase(const Raster& wrapped);

// eps_g(r) = -(1 / 2 pi |g|) dP/dr_g (central differences, physical units),
// re-anchored so the mean over `reference_region` is zero. Compressive < 0.
StrainMap strain_from_phase(const Raster& unwrapped_phase, const ReciprocalPeak& peak,
                            const Rect& reference_region);

struct ProfilePoint {
    double distance_nm;
    double value;
};

// Bilinear samples at unit-pixel steps from (x0,y0) to (x1,y1), averaged over
// avg_width_px perpendicular offsets (border-clamped).
std::vector<ProfilePoint> line_scan(const Raster& map, double x0, double y0, double x1, double y1,
                                    int avg_width_px);

struct LatticeRegion {
    Rect rect;
    double period_nm = 1.0;
    double orientation_deg = 0.0; // direction of the lattice g vector
    double amplitude = 1.0;
    double strain = 0.0; // local period = period_nm * (1 + strain)
};

// Sum-of-cosines test image with seeded Gaussian noise over the whole canvas.
Raster synthesize_lattice(int rows, int cols, double pixel_size_nm,
                          const std::vector<LatticeRegion>& regions, double noise_sigma,
                          std::uint64_t seed);

struct PeakCandidate {
    double gx;
    double gy;
    double magnitude;
};

// Top-k FFT magnitude maxima in the positive-frequency half plane, DC and
// near-neighbours of already-listed peaks excluded. Helper for picking g.
std::vector<PeakCandidate> fft_peak_candidates(const Raster& image, int top_k);

} // namespace nwkit::gpa
