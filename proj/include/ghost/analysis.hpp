#pragma once

#include <span>
#include <vector>

#include "ghost/grid.hpp"
#include "ghost/scene.hpp"

namespace ghost::analysis {

struct ProfileMetrics {
    std::vector<double> peak_positions;  // meters
    std::vector<double> peak_values;     // of the peak-normalized profile
    double midpoint_ratio = 1.0;         // saddle value / mean peak value
    double fwhm = 0.0;                   // mean peak FWHM, 0 when undefined
    bool resolved = false;               // midpoint_ratio < 0.8
};

// Resolvability threshold echoing the Rayleigh saddle ratio (a convention,
// see docs).
inline constexpr double kResolvedThreshold = 0.8;

// Horizontal profile averaged over the rows |y| <= height/2.
std::vector<double> band_profile(const RealGrid& image, double height);

// Central-band double-slit statistics. Peaks are the two highest local
// maxima near the expected slit centers (+-d/2), refined by quadratic
// interpolation; ties break toward the expected position. Fewer than two
// local maxima reports unresolved with midpoint_ratio = 1.
ProfileMetrics double_slit_metrics(const RealGrid& image, const SlitGeometry& geometry);

// Half-width of the ensemble-averaged normalized intensity autocovariance
// along x: first zero or first <= 0.01 crossing, linearly interpolated.
// Requires >= 100 frames.
double speckle_correlation_width(std::span<const IntensityGrid> frames);

struct ImageErrorRecord {
    double mse = 0.0;             // mean squared difference, peak-normalized inputs
    double normalized_mse = 0.0;  // mse / mean(truth^2)
    double peak_snr = 0.0;        // 10 log10(1/mse), capped at kPeakSnrCap
    double snr_bg = 0.0;          // mean over true support / std over true background
};

inline constexpr double kPeakSnrCap = 300.0;

// Estimate vs truth on congruent grids; both are clamped to >= 0 and
// peak-normalized before differencing.
ImageErrorRecord image_error(const RealGrid& estimate, const TransmissionMask& truth);

}  // namespace ghost::analysis
