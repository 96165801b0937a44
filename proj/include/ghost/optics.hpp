#pragma once

#include <cstdint>

#include "ghost/grid.hpp"

namespace ghost {

enum class ApertureShape { Disk, Square };

// Pseudo-thermal source: constant amplitude sqrt(mean_intensity) inside a
// centered aperture of size `diameter`, i.i.d. uniform phase per cell.
struct SourceSpec {
    double diameter = 0.0;        // meters (disk diameter or square side)
    ApertureShape shape = ApertureShape::Disk;
    double mean_intensity = 1.0;  // arbitrary units
    std::size_t grid_size = 0;    // samples per side
    double pitch = 0.0;           // meters per sample

    void validate() const;
};

// Deterministic speckle realization keyed on (spec, seed). `zero_phases`
// is a test hook that disables the randomization.
OpticalField generate_source_realization(const SourceSpec& spec, double wavelength,
                                         std::uint64_t seed, bool zero_phases = false);

enum class PropagationMethod {
    TransferFunction,        // same pitch in/out, energy-exact
    SingleTransformScaled,   // output pitch = wl*z/(N*input pitch)
};

// Error raised when a propagation sampling rule is violated.
class SamplingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Fresnel diffraction over `distance` >= 0. distance == 0 is the identity.
OpticalField fresnel_propagate(const OpticalField& field, double distance,
                               PropagationMethod method);

// Output pitch of the scaled method for an n-sample grid.
double scaled_output_pitch(double wavelength, double distance, std::size_t n, double pitch_in);

// Quadratic lens phase exp(-j pi (x^2+y^2) / (wl f)); amplitude unchanged.
OpticalField apply_thin_lens(const OpticalField& field, double focal_length);

// Zero the field outside a centered aperture. `size` is the diameter (disk)
// or side (square); cells are kept when their center lies inside.
OpticalField apply_aperture(const OpticalField& field, ApertureShape shape, double size);

// Pointwise product with an amplitude mask on a congruent grid.
OpticalField apply_transmission(const OpticalField& field, const TransmissionMask& mask);

IntensityGrid intensity_of(const OpticalField& field);

}  // namespace ghost
