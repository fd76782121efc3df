#include "doctest.h"

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "nwkit/errors.hpp"
#include "nwkit/gpa.hpp"

using namespace nwkit;
using namespace nwkit::gpa;

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double v) {
    double w = std::remainder(v, 2.0 * kPi);
    if (w <= -kPi)
        w += 2.0 * kPi;
    return w;
}

// Mean over an interior rectangle.
double region_mean(const Raster& map, int x0, int y0, int w, int h) {
    double sum = 0.0;
    for (int r = y0; r < y0 + h; ++r)
        for (int c = x0; c < x0 + w; ++c)
            sum += map.at(r, c);
    return sum / (static_cast<double>(w) * h);
}

// Two-region test image: left half reference, right half strained by delta.
struct StepImage {
    Raster image;
    ReciprocalPeak peak;
    Rect ref;
    Rect window;
};

StepImage make_step_image(int rows, int cols, double delta, double sigma_frac = 6.0) {
    const double pixel = 0.05, period = 0.35; // (111)-like spacing, 7 px/period
    std::vector<LatticeRegion> regions;
    regions.push_back({{0, 0, cols / 2, rows}, period, 0.0, 1.0, 0.0});
    regions.push_back({{cols / 2, 0, cols - cols / 2, rows}, period, 0.0, 1.0, delta});
    const double g = 1.0 / period;
    StepImage out{synthesize_lattice(rows, cols, pixel, regions, 0.0, 1),
                  ReciprocalPeak(g, 0.0, g / sigma_frac),
                  {40, 40, cols / 2 - 80, rows - 80},
                  {cols / 2 + 40, 40, cols / 2 - 80, rows - 80}};
    return out;
}

Raster full_strain(const StepImage& s) {
    const Raster phase = compute_phase_map(s.image, s.peak);
    const Raster unwrapped = unwrap_phase(phase);
    return strain_from_phase(unwrapped, s.peak, s.ref).raster;
}

} // namespace

TEST_CASE("synthesize_lattice determinism and validation") {
    std::vector<LatticeRegion> regions{{{0, 0, 64, 64}, 0.4, 0.0, 1.0, 0.0}};
    const Raster a = synthesize_lattice(64, 64, 0.05, regions, 0.1, 42);
    const Raster b = synthesize_lattice(64, 64, 0.05, regions, 0.1, 42);
    const Raster c = synthesize_lattice(64, 64, 0.05, regions, 0.1, 43);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);

    std::vector<LatticeRegion> sub_nyquist{{{0, 0, 64, 64}, 0.15, 0.0, 1.0, 0.0}}; // 3 px
    CHECK_THROWS_AS(synthesize_lattice(64, 64, 0.05, sub_nyquist, 0.0, 0), DomainError);
    CHECK_THROWS_AS(synthesize_lattice(16, 64, 0.05, regions, 0.0, 0), DomainError);
}

TEST_CASE("perfect lattice gives a flat phase map") {
    // 16 whole periods across 128 px: bin-exact, no leakage.
    std::vector<LatticeRegion> regions{{{0, 0, 128, 128}, 0.4, 0.0, 1.0, 0.0}};
    const Raster image = synthesize_lattice(128, 128, 0.05, regions, 0.0, 0);
    const ReciprocalPeak peak(1.0 / 0.4, 0.0, (1.0 / 0.4) / 6.0);
    const Raster phase = compute_phase_map(image, peak);
    for (double v : phase.values) { // wrapped range contract
        CHECK(v > -kPi);
        CHECK(v <= kPi);
    }
    for (int r = 12; r < 116; ++r)
        for (int c = 12; c < 116; ++c)
            CHECK(std::abs(phase.at(r, c) - phase.at(64, 64)) < 1e-6);
}

TEST_CASE("phase maps are identical across concurrent calls") {
    const StepImage s = make_step_image(192, 384, -0.02);
    const Raster sequential = compute_phase_map(s.image, s.peak);
    std::vector<Raster> results(8);
    std::vector<std::thread> workers;
    for (int t = 0; t < 8; ++t)
        workers.emplace_back(
            [&, t] { results[static_cast<std::size_t>(t)] = compute_phase_map(s.image, s.peak); });
    for (auto& w : workers)
        w.join();
    for (const auto& r : results)
        CHECK(r.values == sequential.values);
}

TEST_CASE("detuned lattice gives the analytic phase gradient") {
    // Lattice at g(1+delta): build period p/(1+delta), analyze at g = 1/p.
    const double delta = 0.01, period = 0.4, pixel = 0.05;
    std::vector<LatticeRegion> regions{
        {{0, 0, 256, 128}, period / (1.0 + delta), 0.0, 1.0, 0.0}};
    const Raster image = synthesize_lattice(128, 256, pixel, regions, 0.0, 0);
    const double g = 1.0 / period;
    const Raster phase = compute_phase_map(image, ReciprocalPeak(g, 0.0, g / 6.0));
    const Raster unwrapped = unwrap_phase(phase);
    // dP/dx should be 2 pi g delta rad/nm in the interior.
    const double expected = 2.0 * kPi * g * delta;
    for (int r = 20; r < 108; r += 8) {
        for (int c = 30; c < 220; c += 10) {
            const double grad =
                (unwrapped.at(r, c + 1) - unwrapped.at(r, c - 1)) / (2.0 * pixel);
            CHECK(grad == doctest::Approx(expected).epsilon(0.03));
        }
    }
}

TEST_CASE("unwrap recovers a 6-pi ramp") {
    const int rows = 48, cols = 96;
    Raster truth = Raster::zeros(rows, cols, 0.1);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            truth.at(r, c) = 6.0 * kPi * c / (cols - 1);
    Raster wrapped = truth;
    for (double& v : wrapped.values)
        v = wrap(v);
    const Raster unwrapped = unwrap_phase(wrapped);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            CHECK(std::abs(unwrapped.at(r, c) - truth.at(r, c)) < 1e-9);
}

TEST_CASE("unwrap leaves constants alone and undoes wrapping up to 2 pi k") {
    Raster constant = Raster::zeros(32, 32, 1.0);
    for (double& v : constant.values)
        v = 1.234;
    CHECK(unwrap_phase(constant).values == constant.values);

    // Smooth field spanning several wraps.
    const int n = 64;
    Raster truth = Raster::zeros(n, n, 1.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            truth.at(r, c) = 9.0 + 2.0 * std::sin(2.0 * kPi * r / n) +
                             2.5 * std::cos(2.0 * kPi * c / n) + 0.05 * c;
    Raster wrapped = truth;
    for (double& v : wrapped.values)
        v = wrap(v);
    const Raster unwrapped = unwrap_phase(wrapped);
    const double offset = unwrapped.at(0, 0) - truth.at(0, 0);
    CHECK(std::abs(offset / (2.0 * kPi) - std::round(offset / (2.0 * kPi))) < 1e-9);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            CHECK(std::abs(unwrapped.at(r, c) - truth.at(r, c) - offset) < 1e-9);
}

TEST_CASE("uniform lattice maps to zero strain") {
    std::vector<LatticeRegion> regions{{{0, 0, 128, 128}, 0.4, 0.0, 1.0, 0.0}};
    const Raster image = synthesize_lattice(128, 128, 0.05, regions, 0.0, 0);
    const ReciprocalPeak peak(2.5, 0.0, 2.5 / 6.0);
    const StrainMap strain =
        strain_from_phase(unwrap_phase(compute_phase_map(image, peak)), peak, {32, 32, 64, 64});
    for (int r = 12; r < 116; ++r)
        for (int c = 12; c < 116; ++c)
            CHECK(std::abs(strain.raster.at(r, c)) < 1e-4);
}

TEST_CASE("reference region mean is anchored to zero") {
    const StepImage s = make_step_image(192, 384, -0.025);
    const Raster phase = compute_phase_map(s.image, s.peak);
    const StrainMap strain = strain_from_phase(unwrap_phase(phase), s.peak, s.ref);
    CHECK(std::abs(region_mean(strain.raster, s.ref.x0, s.ref.y0, s.ref.width, s.ref.height)) <
          1e-10);
}

TEST_CASE("two-region step is recovered quantitatively") {
    const StepImage s = make_step_image(256, 512, -0.025);
    const Raster strain = full_strain(s);
    const double window =
        region_mean(strain, s.window.x0, s.window.y0, s.window.width, s.window.height);
    CHECK(window == doctest::Approx(-0.025).epsilon(0.08)); // within +/- 0.002
    const double reference = region_mean(strain, s.ref.x0 + 10, s.ref.y0 + 10,
                                         s.ref.width - 20, s.ref.height - 20);
    CHECK(std::abs(reference) < 1e-3);
}

TEST_CASE("strain response is linear in the applied strain") {
    for (double delta : {-0.02, 0.02, 0.03}) {
        const StepImage s = make_step_image(192, 384, delta);
        const Raster strain = full_strain(s);
        const double recovered =
            region_mean(strain, s.window.x0, s.window.y0, s.window.width, s.window.height);
        CHECK(recovered / delta > 0.95);
        CHECK(recovered / delta < 1.05);
        CHECK(std::abs(recovered - delta) < 0.003); // end-to-end absolute band
    }
}

TEST_CASE("mask width tradeoff stays within 20 percent") {
    std::vector<double> recovered;
    for (double frac : {8.0, 6.0, 4.0}) { // sigma = g/8 .. g/4
        const StepImage s = make_step_image(192, 384, -0.025, frac);
        const Raster strain = full_strain(s);
        recovered.push_back(
            region_mean(strain, s.window.x0, s.window.y0, s.window.width, s.window.height));
    }
    for (double v : recovered) {
        CHECK(std::abs(v - recovered[1]) / std::abs(recovered[1]) < 0.20);
    }
}

TEST_CASE("translation invariance under circular shift") {
    const StepImage s = make_step_image(192, 384, -0.02);
    const int shift = 17; // columns, along the lattice direction
    const int cols = s.image.cols;
    Raster shifted = s.image;
    for (int r = 0; r < s.image.rows; ++r)
        for (int c = 0; c < cols; ++c)
            shifted.at(r, (c + shift) % cols) = s.image.at(r, c);

    const Raster strain_a = full_strain(s);
    StepImage s2 = s;
    s2.image = shifted;
    // Shift the reference window along with the image (stays clear of the
    // wrap seam near column `shift`).
    s2.ref.x0 = s.ref.x0 + shift;
    const Raster strain_b = full_strain(s2);

    // Compare away from borders; shifted columns stay off the wrap seam.
    for (int r = 40; r < 150; r += 7)
        for (int c = 40; c < 320; c += 11)
            CHECK(std::abs(strain_b.at(r, c + shift) - strain_a.at(r, c)) < 1e-4);
}

TEST_CASE("line scans") {
    SUBCASE("constant map gives a constant profile") {
        Raster map = Raster::zeros(64, 64, 0.1);
        for (double& v : map.values)
            v = 3.25;
        const auto profile = line_scan(map, 5.0, 10.0, 50.0, 40.0, 3);
        for (const auto& p : profile)
            CHECK(p.value == doctest::Approx(3.25).epsilon(1e-12));
        CHECK(profile.front().distance_nm == 0.0);
    }

    SUBCASE("reversing endpoints reverses the profile") {
        const StepImage s = make_step_image(192, 384, -0.025);
        const Raster strain = full_strain(s);
        const auto fwd = line_scan(strain, 60.0, 96.0, 320.0, 96.0, 9);
        const auto rev = line_scan(strain, 320.0, 96.0, 60.0, 96.0, 9);
        REQUIRE(fwd.size() == rev.size());
        for (std::size_t i = 0; i < fwd.size(); ++i)
            CHECK(fwd[i].value ==
                  doctest::Approx(rev[rev.size() - 1 - i].value).epsilon(1e-9));
    }

    SUBCASE("step profile crosses from 0 to the applied strain") {
        const StepImage s = make_step_image(192, 384, -0.025);
        const Raster strain = full_strain(s);
        const auto profile = line_scan(strain, 60.0, 96.0, 320.0, 96.0, 17);
        const std::size_t n = profile.size();
        double left = 0.0, right = 0.0;
        const std::size_t quarter = n / 4;
        for (std::size_t i = 0; i < quarter; ++i) {
            left += profile[i].value;
            right += profile[n - 1 - i].value;
        }
        left /= static_cast<double>(quarter);
        right /= static_cast<double>(quarter);
        CHECK(std::abs(left) < 0.002);
        CHECK(right == doctest::Approx(-0.025).epsilon(0.1));
    }

    SUBCASE("degenerate segments and widths are rejected") {
        Raster map = Raster::zeros(64, 64, 0.1);
        CHECK_THROWS_AS(line_scan(map, 5.0, 5.0, 5.0, 5.0, 1), DomainError);
        CHECK_THROWS_AS(line_scan(map, 0.0, 0.0, 10.0, 0.0, 0), DomainError);
        CHECK_THROWS_AS(line_scan(map, -1.0, 0.0, 10.0, 0.0, 1), DomainError);
    }
}

TEST_CASE("validation errors") {
    std::vector<LatticeRegion> regions{{{0, 0, 64, 64}, 0.4, 0.0, 1.0, 0.0}};
    const Raster image = synthesize_lattice(64, 64, 0.05, regions, 0.0, 0);

    // Nyquist limit is 10 cycles/nm at 0.05 nm/px.
    CHECK_THROWS_AS(compute_phase_map(image, ReciprocalPeak(11.0, 0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(ReciprocalPeak(2.5, 0.0, 1.3), DomainError); // mask hits the origin
    CHECK_THROWS_AS(ReciprocalPeak(0.0, 0.0, 0.1), DomainError);

    const ReciprocalPeak peak(2.5, 0.0, 2.5 / 6.0);
    const Raster phase = unwrap_phase(compute_phase_map(image, peak));
    CHECK_THROWS_AS(strain_from_phase(phase, peak, {0, 0, 3, 4}), DomainError);  // < 16 px
    CHECK_THROWS_AS(strain_from_phase(phase, peak, {60, 0, 10, 10}), DomainError);
}

TEST_CASE("fft peak candidates find the lattice frequency") {
    std::vector<LatticeRegion> regions{{{0, 0, 128, 128}, 0.4, 0.0, 1.0, 0.0}};
    const Raster image = synthesize_lattice(128, 128, 0.05, regions, 0.0, 0);
    const auto peaks = fft_peak_candidates(image, 3);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0].gx == doctest::Approx(2.5).epsilon(0.07));
    CHECK(std::abs(peaks[0].gy) < 0.16);
}
