#include "ghost/sensing.hpp"

namespace ghost {

RoiSpec centered_roi(std::size_t frame_rows, std::size_t frame_cols, std::size_t side) {
    if (side == 0 || side > frame_rows || side > frame_cols)
        throw std::invalid_argument("centered_roi: side exceeds the frame");
    return RoiSpec{(frame_rows - side) / 2, (frame_cols - side) / 2, side, side};
}

SensingSystem assemble_sensing_system(const MeasurementSet& measurements, const RoiSpec& roi) {
    const auto& records = measurements.records;
    if (records.empty()) throw std::invalid_argument("assemble_sensing_system: no records");
    if (roi.count() == 0) throw std::invalid_argument("assemble_sensing_system: empty ROI");

    const auto& first = records.front().reference_frame;
    if (roi.row0 + roi.rows > first.rows() || roi.col0 + roi.cols > first.cols())
        throw std::invalid_argument("assemble_sensing_system: ROI outside frame bounds");

    const std::size_t m = records.size();
    const std::size_t n = roi.count();
    SensingSystem sys;
    sys.roi = roi;
    sys.roi_pitch = first.pitch();
    sys.A.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    sys.y.resize(static_cast<Eigen::Index>(m));

    for (std::size_t r = 0; r < m; ++r) {
        const auto& frame = records[r].reference_frame;
        if (!frame.congruent_with(first))
            throw std::invalid_argument("assemble_sensing_system: inconsistent frames");
        for (std::size_t i = 0; i < roi.rows; ++i)
            for (std::size_t j = 0; j < roi.cols; ++j)
                sys.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i * roi.cols + j)) =
                    frame(roi.row0 + i, roi.col0 + j);
        sys.y(static_cast<Eigen::Index>(r)) = records[r].bucket;
    }
    return sys;
}

SensingSystem normalize_system(const SensingSystem& system, NormalizeMode mode) {
    SensingSystem out = system;
    out.scaling = ScalingRecord{};
    out.scaling.mode = mode;
    if (mode == NormalizeMode::None) return out;

    if (mode == NormalizeMode::RowMean) {
        out.scaling.row_factors.resize(out.A.rows());
        for (Eigen::Index r = 0; r < out.A.rows(); ++r) {
            const double mean = out.A.row(r).mean();
            if (mean == 0.0)
                throw std::invalid_argument("normalize_system: zero row under row_mean mode");
            out.scaling.row_factors(r) = mean;
            out.A.row(r) /= mean;
            out.y(r) /= mean;
        }
        return out;
    }

    out.scaling.col_factors.resize(out.A.cols());
    for (Eigen::Index c = 0; c < out.A.cols(); ++c) {
        const double norm = out.A.col(c).norm();
        if (norm == 0.0)
            throw std::invalid_argument("normalize_system: zero column under column_unit mode");
        out.scaling.col_factors(c) = norm;
        out.A.col(c) /= norm;
    }
    return out;
}

Eigen::VectorXd unscale_solution(const SensingSystem& scaled, const Eigen::VectorXd& x) {
    if (scaled.scaling.mode != NormalizeMode::ColumnUnit) return x;
    // column scaling A' = A diag(1/c) maps solutions by x' = diag(c) x
    return x.cwiseQuotient(scaled.scaling.col_factors);
}

}  // namespace ghost
