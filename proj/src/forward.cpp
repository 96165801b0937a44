#include "ghost/forward.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ghost/rng.hpp"

namespace ghost {

IntensityGrid pixelate(const IntensityGrid& grid, double pixel_pitch) {
    const double ratio = pixel_pitch / grid.pitch();
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded)
        throw std::invalid_argument("pixelate: pixel pitch is not an integer multiple of the grid pitch");
    const std::size_t k = static_cast<std::size_t>(rounded);
    if (k == 1) return grid;
    if (grid.rows() % k != 0 || grid.cols() % k != 0)
        throw std::invalid_argument("pixelate: block size does not divide the grid dimensions");

    IntensityGrid out(grid.rows() / k, grid.cols() / k, pixel_pitch, 0.0);
    for (std::size_t r = 0; r < grid.rows(); ++r)
        for (std::size_t c = 0; c < grid.cols(); ++c)
            out(r / k, c / k) += grid(r, c);
    return out;
}

RealGrid block_mean(const RealGrid& grid, std::size_t k) {
    RealGrid sums = pixelate(grid, grid.pitch() * static_cast<double>(k));
    const double inv = 1.0 / static_cast<double>(k * k);
    for (auto& v : sums.values()) v *= inv;
    return sums;
}

namespace {

// Object-plane field for one seed, cropped to the frame window.
OpticalField illuminate(const OpticalLayout& layout, std::uint64_t seed) {
    OpticalField src = generate_source_realization(layout.source, layout.wavelength, seed);
    OpticalField obj = fresnel_propagate(src, layout.z, layout.source_method);
    const std::size_t w = layout.frame_window();
    OpticalField out(obj.grid.crop_center(w, w), obj.wavelength, "object");
    return out;
}

std::vector<double> bucket_values(const OpticalLayout& layout, const OpticalField& masked,
                                  std::span<const double> sizes) {
    // One scaled hop to the collection plane: the lens plane (lensed variant,
    // energy past the aperture is conserved through the rest of the system)
    // or the open detector plane.
    OpticalField det = fresnel_propagate(masked, layout.z1,
                                         PropagationMethod::SingleTransformScaled);
    IntensityGrid I = intensity_of(det);
    const double cell = I.pitch() * I.pitch();

    std::vector<double> out;
    out.reserve(sizes.size());
    for (double s : sizes) {
        const double half = s / 2.0;
        double acc = 0.0;
        for (std::size_t r = 0; r < I.rows(); ++r) {
            if (std::abs(I.y(r)) > half) continue;
            for (std::size_t c = 0; c < I.cols(); ++c)
                if (std::abs(I.x(c)) <= half) acc += I(r, c);
        }
        out.push_back(acc * cell);
    }
    return out;
}

}  // namespace

MultiRealization simulate_ghost_realization_multi(const OpticalLayout& layout,
                                                  const TransmissionMask& object,
                                                  std::uint64_t seed,
                                                  std::span<const double> sizes) {
    layout.validate();
    OpticalField obj = illuminate(layout, seed);
    if (!obj.grid.congruent_with(object.grid))
        throw std::invalid_argument("simulate_ghost_realization: object mask must be " +
                                    std::to_string(layout.frame_window()) + " samples at the object pitch");

    MultiRealization out;
    out.seed = seed;
    out.reference_frame = pixelate(intensity_of(obj), layout.reference_pixel_pitch);

    OpticalField masked = apply_transmission(obj, object);
    if (masked.energy() == 0.0) {
        out.buckets.assign(sizes.size(), 0.0);
        return out;
    }
    out.buckets = bucket_values(layout, masked, sizes);
    return out;
}

RealizationRecord simulate_ghost_realization(const OpticalLayout& layout,
                                             const TransmissionMask& object,
                                             std::uint64_t seed) {
    const double size = layout.variant == PathVariant::Lensed ? layout.L : layout.L1;
    MultiRealization multi = simulate_ghost_realization_multi(layout, object, seed, {{size}});
    return RealizationRecord{std::move(multi.reference_frame), multi.buckets[0], seed};
}

namespace {

template <typename Work>
void parallel_for_indexed(std::size_t count, unsigned threads, Work work) {
    unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(count ? count : 1));

    if (n_threads == 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

CampaignSweep run_campaign_multi(const OpticalLayout& layout, const TransmissionMask& object,
                                 std::size_t m, std::uint64_t master_seed,
                                 std::span<const double> sizes, unsigned threads) {
    if (m == 0) throw std::invalid_argument("run_campaign: m must be >= 1");
    layout.validate();

    CampaignSweep sweep;
    sweep.layout = layout;
    sweep.sizes.assign(sizes.begin(), sizes.end());
    sweep.frames.resize(m);
    sweep.seeds.resize(m);
    sweep.buckets.assign(sizes.size(), std::vector<double>(m, 0.0));

    std::vector<std::string> failures(m);
    parallel_for_indexed(m, threads, [&](std::size_t r) {
        const std::uint64_t seed = rng::split_seed(master_seed, r);
        try {
            MultiRealization one = simulate_ghost_realization_multi(layout, object, seed, sizes);
            sweep.frames[r] = std::move(one.reference_frame);
            sweep.seeds[r] = seed;
            for (std::size_t a = 0; a < sizes.size(); ++a) sweep.buckets[a][r] = one.buckets[a];
        } catch (const std::exception& e) {
            failures[r] = e.what();
        }
    });

    std::string report;
    std::size_t n_failed = 0;
    for (std::size_t r = 0; r < m; ++r) {
        if (failures[r].empty()) continue;
        ++n_failed;
        if (n_failed <= 3)
            report += "  realization " + std::to_string(r) + ": " + failures[r] + "\n";
    }
    if (n_failed > 0)
        throw std::runtime_error("run_campaign: " + std::to_string(n_failed) +
                                 " realization(s) failed\n" + report);
    return sweep;
}

MeasurementSet run_campaign(const OpticalLayout& layout, const TransmissionMask& object,
                            std::size_t m, std::uint64_t master_seed, unsigned threads) {
    const double size = layout.variant == PathVariant::Lensed ? layout.L : layout.L1;
    CampaignSweep sweep = run_campaign_multi(layout, object, m, master_seed, {{size}}, threads);

    MeasurementSet set;
    set.layout = layout;
    set.object_truth = object;
    set.records.resize(m);
    for (std::size_t r = 0; r < m; ++r)
        set.records[r] = RealizationRecord{std::move(sweep.frames[r]), sweep.buckets[0][r],
                                           sweep.seeds[r]};
    return set;
}

}  // namespace ghost
