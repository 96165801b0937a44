#pragma once

#include "ghost/optics.hpp"

namespace ghost {

enum class PathVariant {
    Lensed,  // object -> lens (aperture L, focal f) -> detector spanning the image plane
    Open,    // object -> open detector collecting an L1 x L1 square
};

// Full scene geometry for the two-arm simulation.
struct OpticalLayout {
    double wavelength = 0.0;  // meters
    SourceSpec source;
    PropagationMethod source_method = PropagationMethod::SingleTransformScaled;

    double z = 0.0;   // source -> object (and source -> reference CCD)
    double z1 = 0.0;  // object -> lens, or object -> open detector
    double z2 = 0.0;  // lens -> test detector (lensed variant)
    double f = 0.0;   // focal length (lensed variant)
    double L = 0.0;   // lens aperture side (lensed variant)
    double L1 = 0.0;  // collection square side (open variant)
    PathVariant variant = PathVariant::Lensed;

    double reference_pixel_pitch = 0.0;  // integer multiple of object_pitch()
    std::size_t working_window = 256;    // native samples kept around the object

    void validate() const;

    // Simulation pitch at the object plane.
    double object_pitch() const;
    // reference_pixel_pitch / object_pitch(), validated integer.
    std::size_t reference_pixel_factor() const;
    // Largest multiple of the pixel factor that fits in working_window.
    std::size_t frame_window() const;
    // |1/z1 + 1/z2 - 1/f| * f  (0 for exact conjugate planes)
    double conjugate_defect() const;
};

}  // namespace ghost
