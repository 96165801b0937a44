#include "ghost/solver.hpp"

namespace ghost {

ReconResult gi_reconstruct(const MeasurementSet& measurements) {
    const auto& records = measurements.records;
    if (records.size() < 2)
        throw std::invalid_argument("gi_reconstruct: needs >= 2 records");

    const auto& first = records.front().reference_frame;
    const std::size_t nr = first.rows(), nc = first.cols();
    RealGrid sum_i(nr, nc, first.pitch(), 0.0);
    RealGrid sum_ib(nr, nc, first.pitch(), 0.0);
    double sum_b = 0.0;

    for (const auto& rec : records) {
        if (!rec.reference_frame.congruent_with(first))
            throw std::invalid_argument("gi_reconstruct: inconsistent frames");
        const double b = rec.bucket;
        sum_b += b;
        const auto& f = rec.reference_frame.values();
        auto& si = sum_i.values();
        auto& sib = sum_ib.values();
        for (std::size_t i = 0; i < f.size(); ++i) {
            si[i] += f[i];
            sib[i] += f[i] * b;
        }
    }

    const double m = static_cast<double>(records.size());
    const double mean_b = sum_b / m;
    RealGrid cov(nr, nc, first.pitch(), 0.0);
    double cov_max = 0.0;
    double scale = 0.0;  // magnitude of the uncentered moments, for degeneracy detection
    for (std::size_t i = 0; i < cov.size(); ++i) {
        const double raw = sum_ib.values()[i] / m;
        const double v = raw - (sum_i.values()[i] / m) * mean_b;
        cov.values()[i] = v;
        cov_max = std::max(cov_max, v);
        scale = std::max(scale, std::abs(raw));
    }

    ReconResult out;
    out.iterations = static_cast<int>(records.size());
    if (cov_max <= 1e-12 * scale) {
        // constant buckets: covariance carries no image beyond roundoff
        out.status = SolverStatus::Degenerate;
        for (auto& v : cov.values()) v = 0.0;
        out.estimate = std::move(cov);
        return out;
    }
    for (auto& v : cov.values()) v /= cov_max;  // negatives retained
    out.status = SolverStatus::Converged;
    out.estimate = std::move(cov);
    return out;
}

}  // namespace ghost
