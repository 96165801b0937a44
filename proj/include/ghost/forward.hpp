#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ghost/layout.hpp"
#include "ghost/scene.hpp"

namespace ghost {

// One speckle realization: pixelated reference frame + bucket value.
struct RealizationRecord {
    IntensityGrid reference_frame;
    double bucket = 0.0;
    std::uint64_t seed = 0;
};

struct MeasurementSet {
    OpticalLayout layout;
    std::vector<RealizationRecord> records;
    std::optional<TransmissionMask> object_truth;
};

// Non-overlapping k x k block sums; pixel_pitch must be an integer multiple
// of the grid pitch and k must divide both dimensions.
IntensityGrid pixelate(const IntensityGrid& grid, double pixel_pitch);

// Block mean instead of block sum (used to downsample transmission masks).
RealGrid block_mean(const RealGrid& grid, std::size_t k);

// Full two-arm simulation of one realization.
RealizationRecord simulate_ghost_realization(const OpticalLayout& layout,
                                             const TransmissionMask& object,
                                             std::uint64_t seed);

// Same physics evaluated for several collection sizes at once (the detector
// plane intensity is computed once; each size integrates a different square).
// `sizes` are lens apertures (lensed variant) or collection sides (open).
struct MultiRealization {
    IntensityGrid reference_frame;
    std::vector<double> buckets;
    std::uint64_t seed = 0;
};
MultiRealization simulate_ghost_realization_multi(const OpticalLayout& layout,
                                                  const TransmissionMask& object,
                                                  std::uint64_t seed,
                                                  std::span<const double> sizes);

// m realizations with seed r = split_seed(master_seed, r). Realizations may
// be evaluated on `threads` workers (0 = hardware concurrency); results are
// identical regardless of scheduling.
MeasurementSet run_campaign(const OpticalLayout& layout, const TransmissionMask& object,
                            std::size_t m, std::uint64_t master_seed, unsigned threads = 0);

struct CampaignSweep {
    OpticalLayout layout;
    std::vector<double> sizes;
    std::vector<IntensityGrid> frames;
    std::vector<std::uint64_t> seeds;
    // buckets[a][r]: collection size a, realization r
    std::vector<std::vector<double>> buckets;
};
CampaignSweep run_campaign_multi(const OpticalLayout& layout, const TransmissionMask& object,
                                 std::size_t m, std::uint64_t master_seed,
                                 std::span<const double> sizes, unsigned threads = 0);

// Conventional (lensed, conjugate-plane) imaging.
// Analytic incoherent image: I(x,y) ~ sum |t|^2 sinc^2[L(x/z2+x'/z1)/wl] ... ,
// normalized to peak 1, sampled on the conjugate plane (magnification -z2/z1).
RealGrid conventional_image_analytic(const OpticalLayout& layout, const TransmissionMask& object);

// Long-exposure image: mean test-detector intensity over n independent
// speckle illuminations, evaluated through the coherent conjugate-plane
// kernel of the same lens system. Converges to the analytic image when the
// illumination is spatially incoherent at the object.
RealGrid conventional_image_ensemble(const OpticalLayout& layout, const TransmissionMask& object,
                                     std::size_t n_realizations, std::uint64_t master_seed,
                                     unsigned threads = 0);

}  // namespace ghost
