#include "nwkit/gpa.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "nwkit/errors.hpp"
#include "nwkit/rng.hpp"

namespace nwkit::gpa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> fft2(const std::vector<std::complex<double>>& in, int rows,
                                       int cols, int sign) {
    std::vector<std::complex<double>> out(in.size());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(
        const_cast<std::complex<double>*>(in.data()));
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(rows, cols, in_ptr, out_ptr, sign,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

// Signed frequency in cycles/nm of FFT bin `index` along an axis of `n`
// pixels of size `pixel_nm`.
double bin_frequency(int index, int n, double pixel_nm) {
    const int signed_index = index <= n / 2 ? index : index - n;
    return signed_index / (n * pixel_nm);
}

double wrap_to_pi(double v) {
    double w = std::remainder(v, kTwoPi); // [-pi, pi]
    if (w <= -std::numbers::pi)
        w += kTwoPi;
    return w;
}

void check_rect(const Rect& rect, const Raster& raster, const char* what) {
    if (rect.width <= 0 || rect.height <= 0 || rect.x0 < 0 || rect.y0 < 0 ||
        rect.x0 + rect.width > raster.cols || rect.y0 + rect.height > raster.rows)
        throw DomainError(std::string(what) + " rectangle out of bounds");
}

double bilinear(const Raster& map, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(map.cols - 1));
    y = std::clamp(y, 0.0, static_cast<double>(map.rows - 1));
    const int c0 = std::min(static_cast<int>(x), map.cols - 2 >= 0 ? map.cols - 2 : 0);
    const int r0 = std::min(static_cast<int>(y), map.rows - 2 >= 0 ? map.rows - 2 : 0);
    const int c1 = std::min(c0 + 1, map.cols - 1);
    const int r1 = std::min(r0 + 1, map.rows - 1);
    const double fx = x - c0;
    const double fy = y - r0;
    return (1 - fy) * ((1 - fx) * map.at(r0, c0) + fx * map.at(r0, c1)) +
           fy * ((1 - fx) * map.at(r1, c0) + fx * map.at(r1, c1));
}

} // namespace

Raster Raster::zeros(int rows, int cols, double pixel_size_nm) {
    if (rows <= 0 || cols <= 0)
        throw DomainError("raster dimensions must be positive");
    if (!(pixel_size_nm > 0.0))
        throw DomainError("pixel size must be positive");
    Raster r;
    r.rows = rows;
    r.cols = cols;
    r.pixel_size_nm = pixel_size_nm;
    r.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    return r;
}

void Raster::validate_lattice_image() const {
    if (rows < 32 || cols < 32)
        throw DomainError("lattice image must be at least 32x32");
    if (!(pixel_size_nm > 0.0))
        throw DomainError("pixel size must be positive");
    if (values.size() != static_cast<std::size_t>(rows) * cols)
        throw DomainError("raster value count does not match its dimensions");
    for (double v : values)
        if (!std::isfinite(v))
            throw DomainError("lattice image contains non-finite values");
}

ReciprocalPeak::ReciprocalPeak(double gx_, double gy_, double mask_sigma_)
    : gx(gx_), gy(gy_), mask_sigma(mask_sigma_) {
    const double g = magnitude();
    if (!(g > 0.0))
        throw DomainError("reciprocal peak |g| must be positive");
    if (!(mask_sigma > 0.0) || !(mask_sigma < g / 2.0))
        throw DomainError("mask_sigma must lie in (0, |g|/2) to clear the central beam");
}

double ReciprocalPeak::magnitude() const { return std::hypot(gx, gy); }

double default_mask_sigma(double gx, double gy) { return std::hypot(gx, gy) / 6.0; }

Raster compute_phase_map(const Raster& image, const ReciprocalPeak& peak) {
    image.validate_lattice_image();
    const double nyquist = 1.0 / (2.0 * image.pixel_size_nm);
    if (!(peak.magnitude() < nyquist))
        throw DomainError("reciprocal peak lies outside the Nyquist band");
    if (!(peak.mask_sigma < peak.magnitude() / 2.0))
        throw DomainError("Gaussian mask overlaps the central beam");

    const int rows = image.rows, cols = image.cols;
    std::vector<std::complex<double>> buf(image.values.begin(), image.values.end());
    std::vector<std::complex<double>> spectrum = fft2(buf, rows, cols, FFTW_FORWARD);

    const double inv_two_sigma2 = 1.0 / (2.0 * peak.mask_sigma * peak.mask_sigma);
    for (int r = 0; r < rows; ++r) {
        const double ky = bin_frequency(r, rows, image.pixel_size_nm);
        for (int c = 0; c < cols; ++c) {
            const double kx = bin_frequency(c, cols, image.pixel_size_nm);
            const double dx = kx - peak.gx;
            const double dy = ky - peak.gy;
            spectrum[static_cast<std::size_t>(r) * cols + c] *=
                std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
        }
    }
    const std::vector<std::complex<double>> filtered = fft2(spectrum, rows, cols, FFTW_BACKWARD);

    Raster phase = Raster::zeros(rows, cols, image.pixel_size_nm);
    for (int r = 0; r < rows; ++r) {
        const double y = r * image.pixel_size_nm;
        for (int c = 0; c < cols; ++c) {
            const double x = c * image.pixel_size_nm;
            const std::complex<double>& z = filtered[static_cast<std::size_t>(r) * cols + c];
            const double carrier = kTwoPi * (peak.gx * x + peak.gy * y);
            phase.at(r, c) = wrap_to_pi(std::arg(z) - carrier);
        }
    }
    return phase;
}

Raster unwrap_phase(const Raster& wrapped) {
    if (wrapped.rows < 1 || wrapped.cols < 1)
        throw DomainError("empty phase map");
    Raster out = wrapped;
    // First column sets the seam, then every row unwraps left to right.
    for (int r = 1; r < wrapped.rows; ++r)
        out.at(r, 0) = out.at(r - 1, 0) + wrap_to_pi(wrapped.at(r, 0) - wrapped.at(r - 1, 0));
    for (int r = 0; r < wrapped.rows; ++r)
        for (int c = 1; c < wrapped.cols; ++c)
            out.at(r, c) = out.at(r, c - 1) + wrap_to_pi(wrapped.at(r, c) - wrapped.at(r, c - 1));
    return out;
}

StrainMap strain_from_phase(const Raster& unwrapped_phase, const ReciprocalPeak& peak,
                            const Rect& reference_region) {
    const Raster& phase = unwrapped_phase;
    if (phase.rows < 3 || phase.cols < 3)
        throw DomainError("phase map too small for derivatives");
    check_rect(reference_region, phase, "reference");
    if (reference_region.width * reference_region.height < 16)
        throw DomainError("degenerate reference region: area must be >= 16 px");

    const double g = peak.magnitude();
    const double ux = peak.gx / g;
    const double uy = peak.gy / g;
    const double inv_2pi_g = 1.0 / (kTwoPi * g);
    const double px = phase.pixel_size_nm;

    Raster strain = Raster::zeros(phase.rows, phase.cols, px);
    for (int r = 0; r < phase.rows; ++r) {
        for (int c = 0; c < phase.cols; ++c) {
            double dpx, dpy; // dP/dx, dP/dy in rad/nm
            if (c == 0)
                dpx = (phase.at(r, 1) - phase.at(r, 0)) / px;
            else if (c == phase.cols - 1)
                dpx = (phase.at(r, c) - phase.at(r, c - 1)) / px;
            else
                dpx = (phase.at(r, c + 1) - phase.at(r, c - 1)) / (2.0 * px);
            if (r == 0)
                dpy = (phase.at(1, c) - phase.at(0, c)) / px;
            else if (r == phase.rows - 1)
                dpy = (phase.at(r, c) - phase.at(r - 1, c)) / px;
            else
                dpy = (phase.at(r + 1, c) - phase.at(r - 1, c)) / (2.0 * px);
            strain.at(r, c) = -(ux * dpx + uy * dpy) * inv_2pi_g;
        }
    }

    // Anchor: strain is relative to the reference lattice.
    double mean = 0.0;
    for (int r = reference_region.y0; r < reference_region.y0 + reference_region.height; ++r)
        for (int c = reference_region.x0; c < reference_region.x0 + reference_region.width; ++c)
            mean += strain.at(r, c);
    mean /= static_cast<double>(reference_region.width) * reference_region.height;
    for (double& v : strain.values)
        v -= mean;

    StrainMap out;
    out.raster = std::move(strain);
    out.reference_region = reference_region;
    out.border_px = 1;
    return out;
}

std::vector<ProfilePoint> line_scan(const Raster& map, double x0, double y0, double x1, double y1,
                                    int avg_width_px) {
    if (avg_width_px < 1)
        throw DomainError("avg_width_px must be >= 1");
    const auto in_bounds = [&](double x, double y) {
        return x >= 0.0 && y >= 0.0 && x <= map.cols - 1 && y <= map.rows - 1;
    };
    if (!in_bounds(x0, y0) || !in_bounds(x1, y1))
        throw DomainError("line scan endpoints out of bounds");
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    const double length_px = std::hypot(dx, dy);
    if (!(length_px > 0.0))
        throw DomainError("line scan segment has zero length");

    const int n_steps = std::max(1, static_cast<int>(std::lround(length_px)));
    const double tx = dx / length_px, ty = dy / length_px;
    const double nx = -ty, ny = tx; // unit perpendicular

    std::vector<ProfilePoint> profile;
    profile.reserve(static_cast<std::size_t>(n_steps) + 1);
    for (int i = 0; i <= n_steps; ++i) {
        const double t = static_cast<double>(i) / n_steps;
        const double cx = x0 + t * dx;
        const double cy = y0 + t * dy;
        double sum = 0.0;
        for (int k = 0; k < avg_width_px; ++k) {
            const double offset = k - 0.5 * (avg_width_px - 1);
            sum += bilinear(map, cx + offset * nx, cy + offset * ny);
        }
        profile.push_back({t * length_px * map.pixel_size_nm, sum / avg_width_px});
    }
    return profile;
}

Raster synthesize_lattice(int rows, int cols, double pixel_size_nm,
                          const std::vector<LatticeRegion>& regions, double noise_sigma,
                          std::uint64_t seed) {
    if (rows < 32 || cols < 32)
        throw DomainError("lattice image must be at least 32x32");
    if (!(pixel_size_nm > 0.0))
        throw DomainError("pixel size must be positive");
    if (noise_sigma < 0.0)
        throw DomainError("noise_sigma must be nonnegative");

    Raster image = Raster::zeros(rows, cols, pixel_size_nm);
    for (const auto& region : regions) {
        check_rect(region.rect, image, "lattice region");
        const double period = region.period_nm * (1.0 + region.strain);
        if (!(period >= 4.0 * pixel_size_nm))
            throw DomainError("sub-Nyquist lattice region: effective period must be >= 4 px");
        const double angle = region.orientation_deg * std::numbers::pi / 180.0;
        const double kx = std::cos(angle) / period;
        const double ky = std::sin(angle) / period;
        for (int r = region.rect.y0; r < region.rect.y0 + region.rect.height; ++r) {
            const double y = r * pixel_size_nm;
            for (int c = region.rect.x0; c < region.rect.x0 + region.rect.width; ++c) {
                const double x = c * pixel_size_nm;
                image.at(r, c) += region.amplitude * std::cos(kTwoPi * (kx * x + ky * y));
            }
        }
    }
    if (noise_sigma > 0.0) {
        Rng rng(seed);
        for (double& v : image.values)
            v += noise_sigma * rng.normal();
    }
    return image;
}

std::vector<PeakCandidate> fft_peak_candidates(const Raster& image, int top_k) {
    image.validate_lattice_image();
    if (top_k < 1)
        throw DomainError("top_k must be >= 1");
    const int rows = image.rows, cols = image.cols;
    std::vector<std::complex<double>> buf(image.values.begin(), image.values.end());
    const std::vector<std::complex<double>> spectrum = fft2(buf, rows, cols, FFTW_FORWARD);

    struct Bin {
        double magnitude;
        double kx, ky;
        int r, c;
    };
    std::vector<Bin> bins;
    bins.reserve(spectrum.size() / 2);
    for (int r = 0; r < rows; ++r) {
        const double ky = bin_frequency(r, rows, image.pixel_size_nm);
        for (int c = 0; c < cols; ++c) {
            const double kx = bin_frequency(c, cols, image.pixel_size_nm);
            if (kx < 0.0 || (kx == 0.0 && ky <= 0.0))
                continue; // half plane, DC excluded
            bins.push_back({std::abs(spectrum[static_cast<std::size_t>(r) * cols + c]), kx, ky,
                            r, c});
        }
    }
    std::stable_sort(bins.begin(), bins.end(),
                     [](const Bin& a, const Bin& b) { return a.magnitude > b.magnitude; });

    std::vector<PeakCandidate> peaks;
    std::vector<const Bin*> taken;
    for (const Bin& bin : bins) {
        if (static_cast<int>(peaks.size()) >= top_k)
            break;
        bool near_taken = false;
        for (const Bin* t : taken) {
            const int dr = std::min(std::abs(bin.r - t->r), rows - std::abs(bin.r - t->r));
            const int dc = std::min(std::abs(bin.c - t->c), cols - std::abs(bin.c - t->c));
            if (dr <= 2 && dc <= 2) {
                near_taken = true;
                break;
            }
        }
        if (near_taken)
            continue;
        peaks.push_back({bin.kx, bin.ky, bin.magnitude});
        taken.push_back(&bin);
    }
    return peaks;
}

} // namespace nwkit::gpa
