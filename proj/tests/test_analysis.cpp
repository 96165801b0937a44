#include <doctest.h>

#include <cmath>
#include <random>

#include "ghost/analysis.hpp"
#include "ghost/config.hpp"
#include "ghost/forward.hpp"
#include "ghost/rng.hpp"

using namespace ghost;
using namespace ghost::analysis;

namespace {
const SlitGeometry kPaperSlit{30e-6, 60e-6, 120e-6};
}

TEST_CASE("double_slit_metrics: the truth mask itself scores a zero midpoint ratio") {
    TransmissionMask m = make_double_slit(kPaperSlit, 3e-6, 128);
    ProfileMetrics pm = double_slit_metrics(m.grid, kPaperSlit);
    CHECK(pm.midpoint_ratio == doctest::Approx(0.0).scale(1.0));
    CHECK(pm.resolved);
    REQUIRE(pm.peak_positions.size() == 2);
    CHECK(pm.peak_positions[0] == doctest::Approx(-30e-6).epsilon(0.1));
    CHECK(pm.peak_positions[1] == doctest::Approx(30e-6).epsilon(0.1));
    CHECK(pm.fwhm > 0.0);
}

TEST_CASE("double_slit_metrics: a single Gaussian blob is unresolved with ratio 1") {
    RealGrid img(128, 128, 3e-6);
    for (std::size_t r = 0; r < 128; ++r)
        for (std::size_t c = 0; c < 128; ++c) {
            const double x = img.x(c), y = img.y(r);
            img(r, c) = std::exp(-(x * x + y * y) / (2.0 * 50e-6 * 50e-6));
        }
    ProfileMetrics pm = double_slit_metrics(img, kPaperSlit);
    CHECK(pm.midpoint_ratio >= doctest::Approx(1.0).epsilon(0.02));
    CHECK_FALSE(pm.resolved);
}

TEST_CASE("double_slit_metrics: symmetric under horizontal mirroring") {
    std::mt19937 gen(3);
    RealGrid img(96, 96, 3e-6);
    TransmissionMask m = make_double_slit(kPaperSlit, 3e-6, 96);
    for (std::size_t i = 0; i < img.size(); ++i)
        img.values()[i] = m.grid.values()[i] + 0.05 * static_cast<double>(gen() % 100) / 100.0;
    RealGrid mir(96, 96, 3e-6);
    for (std::size_t r = 0; r < 96; ++r)
        for (std::size_t c = 0; c < 96; ++c) mir(r, c) = img(r, 95 - c);

    ProfileMetrics a = double_slit_metrics(img, kPaperSlit);
    ProfileMetrics b = double_slit_metrics(mir, kPaperSlit);
    CHECK(a.midpoint_ratio == doctest::Approx(b.midpoint_ratio).epsilon(1e-9));
    CHECK(a.peak_positions[0] == doctest::Approx(-b.peak_positions[1]).epsilon(1e-9));
    CHECK(a.fwhm == doctest::Approx(b.fwhm).epsilon(1e-9));
}

TEST_CASE("double_slit_metrics: invariant under positive rescaling") {
    TransmissionMask m = make_double_slit(kPaperSlit, 3e-6, 96);
    RealGrid scaled = m.grid;
    for (auto& v : scaled.values()) v *= 123.0;
    ProfileMetrics a = double_slit_metrics(m.grid, kPaperSlit);
    ProfileMetrics b = double_slit_metrics(scaled, kPaperSlit);
    CHECK(a.midpoint_ratio == b.midpoint_ratio);
    CHECK(a.peak_positions == b.peak_positions);
}

TEST_CASE("image_error: exact estimate and binary complement") {
    TransmissionMask truth = make_double_slit(kPaperSlit, 3e-6, 64);
    ImageErrorRecord same = image_error(truth.grid, truth);
    CHECK(same.mse == 0.0);
    CHECK(same.peak_snr == kPeakSnrCap);

    RealGrid comp(64, 64, 3e-6);
    for (std::size_t i = 0; i < comp.size(); ++i) comp.values()[i] = 1.0 - truth.grid.values()[i];
    ImageErrorRecord c = image_error(comp, truth);
    CHECK(c.mse == doctest::Approx(1.0).epsilon(1e-12));

    RealGrid wrong(32, 32, 3e-6, 0.0);
    CHECK_THROWS_AS(image_error(wrong, truth), std::invalid_argument);
}

TEST_CASE("speckle_correlation_width: delta-correlated noise is at most one pitch wide") {
    std::mt19937 gen(5);
    std::exponential_distribution<double> ed(1.0);
    std::vector<IntensityGrid> frames;
    for (int i = 0; i < 150; ++i) {
        IntensityGrid f(48, 48, 2e-6);
        for (auto& v : f.values()) v = ed(gen);
        frames.push_back(std::move(f));
    }
    CHECK(speckle_correlation_width(frames) <= 2e-6);

    frames.resize(50);
    CHECK_THROWS_AS(speckle_correlation_width(frames), std::invalid_argument);
}

TEST_CASE("speckle_correlation_width: invariant under common rescaling, decreasing in D") {
    // fast-preset geometry: object-plane speckle width ~ wl z / D
    auto frames_for = [&](double D) {
        OpticalLayout lay = preset_config("fast").layout;
        lay.source.diameter = D;
        std::vector<IntensityGrid> frames;
        const std::size_t w = lay.frame_window();
        for (std::size_t r = 0; r < 120; ++r) {
            OpticalField src =
                generate_source_realization(lay.source, lay.wavelength, rng::split_seed(17, r));
            OpticalField obj = fresnel_propagate(src, lay.z, lay.source_method);
            frames.push_back(intensity_of(OpticalField(obj.grid.crop_center(w, w), lay.wavelength)));
        }
        return frames;
    };

    std::vector<IntensityGrid> base = frames_for(0.4e-3);
    const double w1 = speckle_correlation_width(base);
    std::vector<IntensityGrid> scaled = base;
    for (auto& f : scaled)
        for (auto& v : f.values()) v *= 42.0;
    CHECK(speckle_correlation_width(scaled) == doctest::Approx(w1).epsilon(1e-12));

    const double w2 = speckle_correlation_width(frames_for(0.8e-3));
    const double w3 = speckle_correlation_width(frames_for(1.6e-3));
    CHECK(w1 > w2);
    CHECK(w2 > w3);
}
