#include "ghost/layout.hpp"

#include <cmath>
#include <string>

namespace ghost {

double OpticalLayout::object_pitch() const {
    if (source_method == PropagationMethod::SingleTransformScaled)
        return scaled_output_pitch(wavelength, z, source.grid_size, source.pitch);
    return source.pitch;
}

std::size_t OpticalLayout::reference_pixel_factor() const {
    const double native = object_pitch();
    const double ratio = reference_pixel_pitch / native;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * rounded)
        throw std::invalid_argument(
            "layout: reference_pixel_pitch (" + std::to_string(reference_pixel_pitch) +
            ") is not an integer multiple of the object-plane pitch " + std::to_string(native));
    return static_cast<std::size_t>(rounded);
}

std::size_t OpticalLayout::frame_window() const {
    const std::size_t k = reference_pixel_factor();
    const std::size_t w = (working_window / k) * k;
    if (w == 0) throw std::invalid_argument("layout: working window smaller than one pixel");
    return w;
}

double OpticalLayout::conjugate_defect() const {
    return std::abs(1.0 / z1 + 1.0 / z2 - 1.0 / f) * f;
}

void OpticalLayout::validate() const {
    if (!(wavelength > 0.0)) throw std::invalid_argument("layout: wavelength must be > 0");
    source.validate();
    if (!(z > 0.0)) throw std::invalid_argument("layout: z must be > 0");
    if (!(z1 > 0.0)) throw std::invalid_argument("layout: z1 must be > 0");
    if (variant == PathVariant::Lensed) {
        if (!(z2 > 0.0)) throw std::invalid_argument("layout: z2 must be > 0");
        if (f == 0.0) throw std::invalid_argument("layout: f must be nonzero");
        if (!(L > 0.0)) throw std::invalid_argument("layout: L must be > 0");
    } else {
        if (!(L1 > 0.0)) throw std::invalid_argument("layout: L1 must be > 0");
    }
    if (!(reference_pixel_pitch > 0.0))
        throw std::invalid_argument("layout: reference_pixel_pitch must be > 0");
    if (working_window == 0 || working_window > source.grid_size)
        throw std::invalid_argument("layout: working_window must be in [1, source grid]");
    reference_pixel_factor();  // validates divisibility
}

}  // namespace ghost
