#include "ghost/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace ghost::analysis {

std::vector<double> band_profile(const RealGrid& image, double height) {
    std::vector<double> prof(image.cols(), 0.0);
    std::size_t n_rows = 0;
    for (std::size_t r = 0; r < image.rows(); ++r) {
        if (std::abs(image.y(r)) > height / 2.0) continue;
        ++n_rows;
        for (std::size_t c = 0; c < image.cols(); ++c) prof[c] += image(r, c);
    }
    if (n_rows == 0) {  // band narrower than one row: use the central rows
        const std::size_t r = image.rows() / 2;
        for (std::size_t c = 0; c < image.cols(); ++c) prof[c] = image(r, c);
        n_rows = 1;
    }
    for (auto& v : prof) v /= static_cast<double>(n_rows);
    return prof;
}

namespace {

struct Peak {
    double position;
    double value;
};

// Highest local maximum inside (lo, hi); ties broken toward `expected`.
// Quadratic sub-pixel refinement around the winning sample.
std::optional<Peak> find_peak(const std::vector<double>& prof, const RealGrid& image,
                              double lo, double hi, double expected) {
    const std::size_t n = prof.size();
    std::optional<std::size_t> best;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = image.x(i);
        if (x <= lo || x >= hi) continue;
        if (prof[i] < prof[i - 1] || prof[i] < prof[i + 1]) continue;
        if (prof[i] <= prof[i - 1] && prof[i] <= prof[i + 1]) continue;  // flat noise floor
        if (!best) {
            best = i;
            continue;
        }
        const double cur = prof[*best];
        if (prof[i] > cur ||
            (prof[i] == cur &&
             std::abs(image.x(i) - expected) < std::abs(image.x(*best) - expected))) {
            best = i;
        }
    }
    if (!best) return std::nullopt;

    const std::size_t i = *best;
    double pos = image.x(i);
    double val = prof[i];
    const double denom = prof[i - 1] - 2.0 * prof[i] + prof[i + 1];
    if (denom < 0.0) {
        const double delta = 0.5 * (prof[i - 1] - prof[i + 1]) / denom;
        if (std::abs(delta) <= 0.5) {
            pos += delta * image.pitch();
            val = prof[i] - 0.25 * (prof[i - 1] - prof[i + 1]) * delta;
        }
    }
    return Peak{pos, val};
}

double interp_profile(const std::vector<double>& prof, const RealGrid& image, double x) {
    const double fi = x / image.pitch() - 0.5 + 0.5 * static_cast<double>(image.cols());
    const double clamped = std::clamp(fi, 0.0, static_cast<double>(image.cols() - 1));
    const std::size_t i0 = static_cast<std::size_t>(clamped);
    const std::size_t i1 = std::min(i0 + 1, image.cols() - 1);
    const double w = clamped - static_cast<double>(i0);
    return prof[i0] * (1.0 - w) + prof[i1] * w;
}

// FWHM around a peak via linear interpolation of the half-max crossings.
double peak_fwhm(const std::vector<double>& prof, const RealGrid& image, const Peak& pk) {
    const double half = pk.value / 2.0;
    const double fi = pk.position / image.pitch() - 0.5 + 0.5 * static_cast<double>(image.cols());
    const long ip = std::lround(fi);
    double left = 0.0, right = 0.0;
    bool ok_l = false, ok_r = false;
    for (long i = ip; i > 0; --i) {
        const auto u = static_cast<std::size_t>(i);
        if (prof[u - 1] <= half && prof[u] >= half) {
            const double w = (half - prof[u - 1]) / (prof[u] - prof[u - 1]);
            left = image.x(u - 1) + w * image.pitch();
            ok_l = true;
            break;
        }
    }
    for (std::size_t i = static_cast<std::size_t>(std::max(ip, 0L)); i + 1 < prof.size(); ++i) {
        if (prof[i] >= half && prof[i + 1] <= half) {
            const double w = (prof[i] - half) / (prof[i] - prof[i + 1]);
            right = image.x(i) + w * image.pitch();
            ok_r = true;
            break;
        }
    }
    return ok_l && ok_r ? right - left : 0.0;
}

}  // namespace

ProfileMetrics double_slit_metrics(const RealGrid& image, const SlitGeometry& geometry) {
    const double extent_x = static_cast<double>(image.cols()) * image.pitch();
    if (geometry.separation + geometry.width > extent_x)
        throw std::invalid_argument("double_slit_metrics: image does not cover both slits");

    std::vector<double> prof = band_profile(image, geometry.height);
    const double mx = *std::max_element(prof.begin(), prof.end());
    if (mx > 0.0)
        for (auto& v : prof) v /= mx;

    ProfileMetrics out;
    const double d = geometry.separation;
    auto left = find_peak(prof, image, -d, 0.0, -d / 2.0);
    auto right = find_peak(prof, image, 0.0, d, d / 2.0);
    if (!left || !right) {
        out.midpoint_ratio = 1.0;
        out.resolved = false;
        return out;
    }
    out.peak_positions = {left->position, right->position};
    out.peak_values = {left->value, right->value};
    const double mean_peak = 0.5 * (left->value + right->value);
    const double mid = 0.5 * (left->position + right->position);
    out.midpoint_ratio = mean_peak > 0.0
                             ? std::max(0.0, interp_profile(prof, image, mid)) / mean_peak
                             : 1.0;
    const double fl = peak_fwhm(prof, image, *left);
    const double fr = peak_fwhm(prof, image, *right);
    out.fwhm = fl > 0.0 && fr > 0.0 ? 0.5 * (fl + fr) : std::max(fl, fr);
    out.resolved = out.midpoint_ratio < kResolvedThreshold;
    return out;
}

double speckle_correlation_width(std::span<const IntensityGrid> frames) {
    if (frames.size() < 100)
        throw std::invalid_argument("speckle_correlation_width: needs >= 100 frames");
    const auto& first = frames.front();
    const std::size_t nr = first.rows(), nc = first.cols();
    const std::size_t max_lag = std::min<std::size_t>(nc / 2, 128);

    // ensemble mean intensity (statistically uniform frames)
    double mean = 0.0;
    for (const auto& f : frames) {
        if (!f.congruent_with(first))
            throw std::invalid_argument("speckle_correlation_width: inconsistent frames");
        for (double v : f.values()) mean += v;
    }
    mean /= static_cast<double>(frames.size() * nr * nc);

    std::vector<double> cov(max_lag, 0.0);
    std::vector<double> counts(max_lag, 0.0);
    for (const auto& f : frames) {
        for (std::size_t r = 0; r < nr; ++r) {
            const double* row = f.data() + r * nc;
            for (std::size_t k = 0; k < max_lag; ++k) {
                double acc = 0.0;
                for (std::size_t c = 0; c + k < nc; ++c) acc += row[c] * row[c + k];
                cov[k] += acc;
                counts[k] += static_cast<double>(nc - k);
            }
        }
    }
    for (std::size_t k = 0; k < max_lag; ++k) cov[k] = cov[k] / counts[k] - mean * mean;
    const double variance = cov[0];
    if (!(variance > 0.0))
        throw std::runtime_error("speckle_correlation_width: zero-variance frames");
    for (std::size_t k = 0; k < max_lag; ++k) cov[k] /= variance;

    constexpr double kThreshold = 0.01;
    for (std::size_t k = 1; k < max_lag; ++k) {
        if (cov[k] <= kThreshold) {
            const double w = (cov[k - 1] - kThreshold) / (cov[k - 1] - cov[k]);
            return (static_cast<double>(k - 1) + w) * first.pitch();
        }
    }
    throw std::runtime_error("speckle_correlation_width: no crossing within the lag window");
}

ImageErrorRecord image_error(const RealGrid& estimate, const TransmissionMask& truth) {
    if (!estimate.congruent_with(truth.grid))
        throw std::invalid_argument("image_error: grids are not congruent");

    const std::size_t n = estimate.size();
    std::vector<double> e(n), t(n);
    double emax = 0.0, tmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = std::max(0.0, estimate.values()[i]);
        t[i] = truth.grid.values()[i];
        emax = std::max(emax, e[i]);
        tmax = std::max(tmax, t[i]);
    }
    if (emax > 0.0)
        for (auto& v : e) v /= emax;
    if (tmax > 0.0)
        for (auto& v : t) v /= tmax;

    double mse = 0.0, t2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = e[i] - t[i];
        mse += d * d;
        t2 += t[i] * t[i];
    }
    mse /= static_cast<double>(n);
    t2 /= static_cast<double>(n);

    ImageErrorRecord rec;
    rec.mse = mse;
    rec.normalized_mse = t2 > 0.0 ? mse / t2 : mse;
    rec.peak_snr = mse > 0.0 ? std::min(kPeakSnrCap, 10.0 * std::log10(1.0 / mse)) : kPeakSnrCap;

    // SNR_bg = mean over the true support / std over the true background
    double sup_sum = 0.0, bg_sum = 0.0, bg_sq = 0.0;
    std::size_t n_sup = 0, n_bg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (t[i] > 0.5) {
            sup_sum += e[i];
            ++n_sup;
        } else {
            bg_sum += e[i];
            bg_sq += e[i] * e[i];
            ++n_bg;
        }
    }
    if (n_sup > 0 && n_bg > 1) {
        const double bg_mean = bg_sum / static_cast<double>(n_bg);
        const double bg_var = std::max(0.0, bg_sq / static_cast<double>(n_bg) - bg_mean * bg_mean);
        const double bg_std = std::sqrt(bg_var);
        rec.snr_bg = bg_std > 0.0 ? (sup_sum / static_cast<double>(n_sup)) / bg_std : kPeakSnrCap;
    }
    return rec;
}

}  // namespace ghost::analysis
