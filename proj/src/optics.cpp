#include "ghost/optics.hpp"

#include <cmath>
#include <numbers>

#include "ghost/fft.hpp"
#include "ghost/rng.hpp"

namespace ghost {

namespace {
constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;
}  // namespace

void SourceSpec::validate() const {
    if (!(diameter > 0.0)) throw std::invalid_argument("SourceSpec: diameter must be > 0");
    if (!(pitch > 0.0)) throw std::invalid_argument("SourceSpec: pitch must be > 0");
    if (grid_size == 0) throw std::invalid_argument("SourceSpec: grid_size must be > 0");
    if (!(mean_intensity >= 0.0))
        throw std::invalid_argument("SourceSpec: mean_intensity must be >= 0");
    if (diameter > static_cast<double>(grid_size) * pitch * (1.0 + 1e-12))
        throw std::invalid_argument("SourceSpec: aperture exceeds the grid");
}

OpticalField generate_source_realization(const SourceSpec& spec, double wavelength,
                                         std::uint64_t seed, bool zero_phases) {
    spec.validate();
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be > 0");

    const std::size_t n = spec.grid_size;
    ComplexGrid g(n, n, spec.pitch);
    const double amp = std::sqrt(spec.mean_intensity);
    const double half = spec.diameter / 2.0;

    for (std::size_t r = 0; r < n; ++r) {
        const double y = g.y(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = g.x(c);
            bool inside = spec.shape == ApertureShape::Disk
                              ? (x * x + y * y <= half * half)
                              : (std::abs(x) <= half && std::abs(y) <= half);
            if (!inside) continue;
            if (zero_phases) {
                g(r, c) = cd(amp, 0.0);
            } else {
                const double ph = 2.0 * kPi * rng::to_unit(rng::stream_at(seed, r * n + c));
                g(r, c) = std::polar(amp, ph);
            }
        }
    }
    return OpticalField(std::move(g), wavelength, "source");
}

double scaled_output_pitch(double wavelength, double distance, std::size_t n, double pitch_in) {
    return wavelength * distance / (static_cast<double>(n) * pitch_in);
}

namespace {

OpticalField propagate_transfer(const OpticalField& field, double z) {
    const std::size_t nr = field.rows(), nc = field.cols();
    const double p = field.pitch();
    const double wl = field.wavelength;

    // kernel phase is sampled aliasing-free only while z <= min(n) * p^2 / wl
    const double z_max = static_cast<double>(std::min(nr, nc)) * p * p / wl;
    if (z > z_max * (1.0 + 1e-9))
        throw SamplingError("transfer-function propagation: distance exceeds the sampling bound " +
                            std::to_string(z_max) + " m for this grid");

    ComplexGrid g = field.grid;
    detail::fft2(g, false);
    std::vector<double> fx2(nc), fy2(nr);
    for (std::size_t c = 0; c < nc; ++c) {
        const double k = c < (nc + 1) / 2 ? static_cast<double>(c)
                                          : static_cast<double>(c) - static_cast<double>(nc);
        const double f = k / (static_cast<double>(nc) * p);
        fx2[c] = f * f;
    }
    for (std::size_t r = 0; r < nr; ++r) {
        const double k = r < (nr + 1) / 2 ? static_cast<double>(r)
                                          : static_cast<double>(r) - static_cast<double>(nr);
        const double f = k / (static_cast<double>(nr) * p);
        fy2[r] = f * f;
    }
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c)
            g(r, c) *= std::polar(1.0, -kPi * wl * z * (fx2[c] + fy2[r]));
    detail::fft2(g, true);
    const double scale = 1.0 / (static_cast<double>(nr) * static_cast<double>(nc));
    for (auto& v : g.values()) v *= scale;
    return OpticalField(std::move(g), wl, field.plane_label);
}

OpticalField propagate_scaled(const OpticalField& field, double z) {
    if (field.rows() != field.cols())
        throw std::invalid_argument("scaled propagation requires a square grid");
    const std::size_t n = field.rows();
    const double p_in = field.pitch();
    const double wl = field.wavelength;
    const double p_out = scaled_output_pitch(wl, z, n, p_in);

    // The input chirp exp(j pi r^2 / (wl z)) is adequately sampled only where
    // the field lives within wl*z / (2 p_in) of the axis.
    double max_abs2 = 0.0;
    for (const auto& v : field.grid.values()) max_abs2 = std::max(max_abs2, std::norm(v));
    if (max_abs2 > 0.0) {
        const double floor = max_abs2 * 1e-24;  // |u| > 1e-12 * max
        double r2_support = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double y = field.grid.y(r);
            for (std::size_t c = 0; c < n; ++c) {
                if (std::norm(field.grid(r, c)) > floor) {
                    const double x = field.grid.x(c);
                    r2_support = std::max(r2_support, x * x + y * y);
                }
            }
        }
        const double r_limit = wl * z / (2.0 * p_in);
        if (std::sqrt(r2_support) > r_limit * (1.0 + 1e-9))
            throw SamplingError(
                "scaled propagation: field support extends beyond the chirp sampling radius " +
                std::to_string(r_limit) + " m; use a shorter hop or the transfer-function method");
    }

    // centered-coordinate single-FFT Fresnel transform
    const double nd = static_cast<double>(n);
    const double a = 0.5 - nd / 2.0;
    std::vector<cd> ramp_in(n), ramp_out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = (static_cast<double>(i) + a) * p_in;
        const double xo = (static_cast<double>(i) + a) * p_out;
        const double shift = -2.0 * kPi * a * static_cast<double>(i) / nd;
        ramp_in[i] = std::polar(1.0, kPi * xi * xi / (wl * z) + shift);
        ramp_out[i] = std::polar(1.0, kPi * xo * xo / (wl * z) + shift);
    }

    ComplexGrid g(n, n, p_in);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            g(r, c) = field.grid(r, c) * ramp_in[r] * ramp_in[c];
    detail::fft2(g, false);

    const cd unit_shift = std::polar(1.0, -2.0 * kPi * a * a / nd);
    const cd constant = (p_in * p_in / (wl * z)) * cd(0.0, -1.0) * unit_shift * unit_shift;
    ComplexGrid out(n, n, p_out);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out(r, c) = constant * ramp_out[r] * ramp_out[c] * g(r, c);
    return OpticalField(std::move(out), wl, field.plane_label);
}

}  // namespace

OpticalField fresnel_propagate(const OpticalField& field, double distance,
                               PropagationMethod method) {
    if (distance < 0.0) throw std::invalid_argument("propagation distance must be >= 0");
    if (distance == 0.0) return field;
    return method == PropagationMethod::TransferFunction ? propagate_transfer(field, distance)
                                                         : propagate_scaled(field, distance);
}

OpticalField apply_thin_lens(const OpticalField& field, double focal_length) {
    if (focal_length == 0.0) throw std::invalid_argument("focal length must be nonzero");
    OpticalField out = field;
    const double wl = field.wavelength;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        const double y = out.grid.y(r);
        for (std::size_t c = 0; c < out.cols(); ++c) {
            const double x = out.grid.x(c);
            out.grid(r, c) *= std::polar(1.0, -kPi * (x * x + y * y) / (wl * focal_length));
        }
    }
    return out;
}

OpticalField apply_aperture(const OpticalField& field, ApertureShape shape, double size) {
    if (!(size > 0.0)) throw std::invalid_argument("aperture size must be > 0");
    OpticalField out = field;
    const double half = size / 2.0;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        const double y = out.grid.y(r);
        for (std::size_t c = 0; c < out.cols(); ++c) {
            const double x = out.grid.x(c);
            bool inside = shape == ApertureShape::Disk
                              ? (x * x + y * y <= half * half)
                              : (std::abs(x) <= half && std::abs(y) <= half);
            if (!inside) out.grid(r, c) = cd(0.0, 0.0);
        }
    }
    return out;
}

OpticalField apply_transmission(const OpticalField& field, const TransmissionMask& mask) {
    if (!field.grid.congruent_with(mask.grid))
        throw std::invalid_argument("apply_transmission: mask grid does not match the field grid");
    OpticalField out = field;
    for (std::size_t i = 0; i < out.grid.size(); ++i)
        out.grid.values()[i] *= mask.grid.values()[i];
    return out;
}

IntensityGrid intensity_of(const OpticalField& field) {
    IntensityGrid out(field.rows(), field.cols(), field.pitch());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = std::norm(field.grid.values()[i]);
    return out;
}

}  // namespace ghost
