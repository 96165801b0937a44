#include <doctest.h>

#include <cmath>
#include <random>

#include "ghost/optics.hpp"
#include "ghost/rng.hpp"

using namespace ghost;

namespace {

SourceSpec small_disk() { return SourceSpec{1e-3, ApertureShape::Disk, 1.0, 128, 20e-6}; }

OpticalField random_field(std::size_t n, double pitch, double wl, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    ComplexGrid g(n, n, pitch);
    for (auto& v : g.values()) v = {nd(gen), nd(gen)};
    return OpticalField(std::move(g), wl);
}

}  // namespace

TEST_CASE("source: zero-phase hook gives the aperture indicator") {
    SourceSpec spec = small_disk();
    spec.mean_intensity = 4.0;
    OpticalField f = generate_source_realization(spec, 650e-9, 99, true);
    double inside = 0.0;
    std::size_t n_in = 0;
    for (std::size_t r = 0; r < f.rows(); ++r)
        for (std::size_t c = 0; c < f.cols(); ++c) {
            const double x = f.grid.x(c), y = f.grid.y(r);
            const bool in = x * x + y * y <= 2.5e-7;  // (D/2)^2
            if (in) {
                CHECK(f.grid(r, c).real() == doctest::Approx(2.0));
                CHECK(f.grid(r, c).imag() == 0.0);
                inside += std::norm(f.grid(r, c));
                ++n_in;
            } else {
                CHECK(std::norm(f.grid(r, c)) == 0.0);
            }
        }
    CHECK(n_in > 0);
}

TEST_CASE("source: unit mean intensity over aperture cells, bit-identical reruns") {
    SourceSpec spec = small_disk();
    OpticalField a = generate_source_realization(spec, 650e-9, 1234);
    OpticalField b = generate_source_realization(spec, 650e-9, 1234);
    double sum = 0.0;
    std::size_t n_in = 0;
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        CHECK(a.grid.values()[i] == b.grid.values()[i]);
        const double p = std::norm(a.grid.values()[i]);
        if (p > 0.0) {
            sum += p;
            ++n_in;
        }
    }
    CHECK(sum / static_cast<double>(n_in) == doctest::Approx(1.0).epsilon(1e-12));

    OpticalField c = generate_source_realization(spec, 650e-9, 1235);
    bool differs = false;
    for (std::size_t i = 0; i < a.grid.size(); ++i)
        if (a.grid.values()[i] != c.grid.values()[i]) differs = true;
    CHECK(differs);
}

TEST_CASE("source: aperture exceeding the grid is rejected") {
    SourceSpec spec = small_disk();
    spec.diameter = 10e-3;  // grid is 2.56 mm wide
    CHECK_THROWS_AS(generate_source_realization(spec, 650e-9, 1), std::invalid_argument);
}

TEST_CASE("propagation: distance 0 is the identity, negative rejected") {
    OpticalField f = random_field(32, 10e-6, 650e-9, 7);
    for (auto method : {PropagationMethod::TransferFunction, PropagationMethod::SingleTransformScaled}) {
        OpticalField g = fresnel_propagate(f, 0.0, method);
        for (std::size_t i = 0; i < f.grid.size(); ++i)
            CHECK(g.grid.values()[i] == f.grid.values()[i]);
        CHECK_THROWS_AS(fresnel_propagate(f, -1e-3, method), std::invalid_argument);
    }
}

TEST_CASE("propagation: transfer-function method conserves energy") {
    for (unsigned seed : {1u, 2u, 3u}) {
        OpticalField f = random_field(64, 10e-6, 650e-9, seed);
        const double z_max = 64 * 1e-10 / 650e-9;
        OpticalField g = fresnel_propagate(f, 0.8 * z_max, PropagationMethod::TransferFunction);
        CHECK(g.energy() == doctest::Approx(f.energy()).epsilon(1e-9));
        CHECK(g.pitch() == f.pitch());
    }
}

TEST_CASE("propagation: transfer-function kernel multiplicativity") {
    OpticalField f = random_field(64, 10e-6, 650e-9, 11);
    const double z_max = 64 * 1e-10 / 650e-9;
    const double za = 0.3 * z_max, zb = 0.45 * z_max;
    OpticalField split = fresnel_propagate(fresnel_propagate(f, za, PropagationMethod::TransferFunction),
                                           zb, PropagationMethod::TransferFunction);
    OpticalField direct = fresnel_propagate(f, za + zb, PropagationMethod::TransferFunction);
    double rms = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        rms += std::norm(split.grid.values()[i] - direct.grid.values()[i]);
        scale += std::norm(direct.grid.values()[i]);
    }
    CHECK(std::sqrt(rms / scale) < 1e-10);
}

TEST_CASE("propagation: transfer-function sampling guard") {
    OpticalField f = random_field(64, 10e-6, 650e-9, 4);
    const double z_max = 64 * 1e-10 / 650e-9;
    CHECK_THROWS_AS(fresnel_propagate(f, 3.0 * z_max, PropagationMethod::TransferFunction),
                    SamplingError);
}

TEST_CASE("propagation: scaled method conserves energy and rescales the pitch") {
    SourceSpec spec = small_disk();
    OpticalField f = generate_source_realization(spec, 650e-9, 5);
    const double z = 0.2;
    OpticalField g = fresnel_propagate(f, z, PropagationMethod::SingleTransformScaled);
    CHECK(g.pitch() == doctest::Approx(scaled_output_pitch(650e-9, z, 128, 20e-6)));
    CHECK(g.energy() == doctest::Approx(f.energy()).epsilon(1e-9));
}

TEST_CASE("propagation: scaled-method chirp support guard") {
    // a field filling the grid violates the chirp sampling radius for short hops
    OpticalField f = random_field(128, 20e-6, 650e-9, 8);
    CHECK_THROWS_AS(fresnel_propagate(f, 1e-3, PropagationMethod::SingleTransformScaled),
                    SamplingError);
}

TEST_CASE("propagation: Gaussian beam radius matches the analytic width") {
    // w0 = 100 um, z = 200 mm, wl = 650 nm -> w(z) = w0 sqrt(1 + (wl z / pi w0^2)^2)
    const double w0 = 100e-6, wl = 650e-9, z = 0.2;
    const std::size_t n = 1024;
    const double pitch = 5e-6;
    ComplexGrid g(n, n, pitch);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double x = g.x(c), y = g.y(r);
            g(r, c) = std::exp(-(x * x + y * y) / (w0 * w0));
        }
    OpticalField beam(std::move(g), wl);
    OpticalField out = fresnel_propagate(beam, z, PropagationMethod::SingleTransformScaled);

    double m0 = 0.0, m2 = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double I = std::norm(out.grid(r, c));
            const double x = out.grid.x(c);
            m0 += I;
            m2 += I * x * x;
        }
    const double w_meas = 2.0 * std::sqrt(m2 / m0);
    const double w_true = w0 * std::sqrt(1.0 + std::pow(wl * z / (M_PI * w0 * w0), 2));
    CHECK(w_meas == doctest::Approx(w_true).epsilon(0.01));
    CHECK(w_true == doctest::Approx(426e-6).epsilon(0.01));
}

TEST_CASE("thin lens: pure phase, on-axis sample unchanged") {
    OpticalField f = random_field(32, 10e-6, 650e-9, 3);
    OpticalField g = apply_thin_lens(f, 0.1);
    for (std::size_t i = 0; i < f.grid.size(); ++i)
        CHECK(std::abs(g.grid.values()[i]) ==
              doctest::Approx(std::abs(f.grid.values()[i])).epsilon(1e-12));
    CHECK_THROWS_AS(apply_thin_lens(f, 0.0), std::invalid_argument);

    // the cell nearest the axis carries a phase factor within rounding of 1
    ComplexGrid h(33, 33, 10e-6, {1.0, 0.0});
    OpticalField odd(std::move(h), 650e-9);
    OpticalField lo = apply_thin_lens(odd, 0.1);
    CHECK(lo.grid(16, 16).real() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("thin lens: 2f-2f conjugate refocus lands on the inverted point") {
    const double wl = 650e-9, pitch = 12e-6, f_lens = 0.024, z = 0.048;
    const std::size_t n = 256;
    // tight Gaussian spot off axis at (x0, y0)
    const double w0 = 30e-6, x0 = 246e-6, y0 = -150e-6;
    ComplexGrid g(n, n, pitch);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double x = g.x(c) - x0, y = g.y(r) - y0;
            g(r, c) = std::exp(-(x * x + y * y) / (w0 * w0));
        }
    OpticalField src(std::move(g), wl);
    OpticalField at_lens = fresnel_propagate(src, z, PropagationMethod::TransferFunction);
    OpticalField after = apply_thin_lens(at_lens, f_lens);
    OpticalField img = fresnel_propagate(after, z, PropagationMethod::TransferFunction);

    IntensityGrid I = intensity_of(img);
    std::size_t br = 0, bc = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (I(r, c) > best) {
                best = I(r, c);
                br = r;
                bc = c;
            }
    // geometric conjugate of (x0, y0) at unit magnification is (-x0, -y0)
    CHECK(std::abs(I.x(bc) - (-x0)) <= pitch);
    CHECK(std::abs(I.y(br) - (-y0)) <= pitch);
}

TEST_CASE("aperture: identity when larger than the grid, area ratio for a half-width square") {
    OpticalField f = random_field(64, 10e-6, 650e-9, 21);
    OpticalField id = apply_aperture(f, ApertureShape::Square, 1.0);
    for (std::size_t i = 0; i < f.grid.size(); ++i)
        CHECK(id.grid.values()[i] == f.grid.values()[i]);

    ComplexGrid ones(64, 64, 10e-6, {1.0, 0.0});
    OpticalField u(std::move(ones), 650e-9);
    OpticalField half = apply_aperture(u, ApertureShape::Square, 64 * 10e-6 / 2.0);
    CHECK(half.energy() == doctest::Approx(u.energy() / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(apply_aperture(f, ApertureShape::Disk, 0.0), std::invalid_argument);
}

TEST_CASE("aperture: 6 mm square on a 0.21 mm grid spans 28 or 29 samples") {
    ComplexGrid ones(64, 64, 0.21e-3, {1.0, 0.0});
    OpticalField u(std::move(ones), 650e-9);
    OpticalField ap = apply_aperture(u, ApertureShape::Square, 6e-3);
    std::size_t count = 0;
    for (std::size_t c = 0; c < 64; ++c)
        if (std::norm(ap.grid(32, c)) > 0.0) ++count;
    CHECK(count >= 28);
    CHECK(count <= 29);
}

TEST_CASE("transmission: identity, zero and energy bookkeeping") {
    OpticalField f = random_field(32, 10e-6, 650e-9, 17);
    TransmissionMask ones(RealGrid(32, 32, 10e-6, 1.0));
    TransmissionMask zeros(RealGrid(32, 32, 10e-6, 0.0));
    OpticalField a = apply_transmission(f, ones);
    for (std::size_t i = 0; i < f.grid.size(); ++i)
        CHECK(a.grid.values()[i] == f.grid.values()[i]);
    CHECK(apply_transmission(f, zeros).energy() == 0.0);

    RealGrid binary(32, 32, 10e-6, 0.0);
    for (std::size_t c = 10; c < 20; ++c) binary(16, c) = 1.0;
    TransmissionMask mask(std::move(binary));
    OpticalField b = apply_transmission(f, mask);
    double open_energy = 0.0;
    for (std::size_t c = 10; c < 20; ++c) open_energy += std::norm(f.grid(16, c));
    CHECK(b.energy() == doctest::Approx(open_energy * 1e-10).epsilon(1e-12));

    TransmissionMask wrong(RealGrid(16, 16, 10e-6, 1.0));
    CHECK_THROWS_AS(apply_transmission(f, wrong), std::invalid_argument);
}

TEST_CASE("intensity_of: modulus squared with energy preserved") {
    OpticalField f = random_field(16, 10e-6, 650e-9, 31);
    IntensityGrid I = intensity_of(f);
    CHECK(grid_energy(I) == doctest::Approx(f.energy()).epsilon(1e-12));

    ComplexGrid ones(4, 4, 1e-6, {1.0, 0.0});
    IntensityGrid u = intensity_of(OpticalField(std::move(ones), 650e-9));
    for (double v : u.values()) CHECK(v == 1.0);
    ComplexGrid z(4, 4, 1e-6);
    IntensityGrid zi = intensity_of(OpticalField(std::move(z), 650e-9));
    for (double v : zi.values()) CHECK(v == 0.0);
}
