#pragma once

#include <Eigen/Dense>

#include "ghost/forward.hpp"

namespace ghost {

// Region of interest inside the reference frames; columns of the sensing
// matrix map to ROI pixels in row-major order.
struct RoiSpec {
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t count() const { return rows * cols; }
};

// Centered ROI of `side` x `side` pixels in a frame of the given dims.
RoiSpec centered_roi(std::size_t frame_rows, std::size_t frame_cols, std::size_t side);

enum class NormalizeMode { None, RowMean, ColumnUnit };

struct ScalingRecord {
    NormalizeMode mode = NormalizeMode::None;
    Eigen::VectorXd row_factors;  // original row scale (divided out), RowMean
    Eigen::VectorXd col_factors;  // original column norms (divided out), ColumnUnit
};

struct SensingSystem {
    Eigen::MatrixXd A;       // m x n, rows are flattened ROI crops
    Eigen::VectorXd y;       // m buckets, same record order
    RoiSpec roi;
    double roi_pitch = 0.0;  // reference pixel pitch of the frames
    ScalingRecord scaling;
};

// Row r = flattened ROI crop of record r's frame; y[r] = bucket r.
SensingSystem assemble_sensing_system(const MeasurementSet& measurements, const RoiSpec& roi);

// Scale A (and y for row modes) with factors retained for un-scaling.
SensingSystem normalize_system(const SensingSystem& system, NormalizeMode mode);

// Map a solution of the scaled system back to the original variables.
Eigen::VectorXd unscale_solution(const SensingSystem& scaled, const Eigen::VectorXd& x);

}  // namespace ghost
