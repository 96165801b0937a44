#include <doctest.h>

#include <random>

#include "ghost/sensing.hpp"
#include "ghost/solver.hpp"

using namespace ghost;

namespace {

MeasurementSet synthetic_set(std::size_t m, std::size_t frame_side, unsigned seed) {
    std::mt19937 gen(seed);
    std::exponential_distribution<double> ed(1.0);
    MeasurementSet set;
    for (std::size_t r = 0; r < m; ++r) {
        RealizationRecord rec;
        rec.seed = r;
        rec.reference_frame = IntensityGrid(frame_side, frame_side, 3.173828125e-6);
        for (auto& v : rec.reference_frame.values()) v = ed(gen);
        rec.bucket = static_cast<double>(r + 1);
        set.records.push_back(std::move(rec));
    }
    return set;
}

}  // namespace

TEST_CASE("sensing assembly: 32 records with a 64x64 ROI give a 32x4096 matrix") {
    MeasurementSet set = synthetic_set(32, 64, 1);
    SensingSystem sys = assemble_sensing_system(set, centered_roi(64, 64, 64));
    CHECK(sys.A.rows() == 32);
    CHECK(sys.A.cols() == 4096);
    CHECK(sys.y.size() == 32);
    CHECK(sys.roi_pitch == doctest::Approx(3.173828125e-6));
}

TEST_CASE("sensing assembly: single record, one-pixel ROI") {
    MeasurementSet set = synthetic_set(1, 8, 2);
    RoiSpec roi{3, 5, 1, 1};
    SensingSystem sys = assemble_sensing_system(set, roi);
    CHECK(sys.A.rows() == 1);
    CHECK(sys.A.cols() == 1);
    CHECK(sys.A(0, 0) == set.records[0].reference_frame(3, 5));
}

TEST_CASE("sensing assembly: row-major flattening and record order") {
    MeasurementSet set = synthetic_set(3, 8, 3);
    RoiSpec roi{2, 1, 2, 3};
    SensingSystem sys = assemble_sensing_system(set, roi);
    CHECK(sys.A(1, 0) == set.records[1].reference_frame(2, 1));
    CHECK(sys.A(1, 2) == set.records[1].reference_frame(2, 3));
    CHECK(sys.A(1, 3) == set.records[1].reference_frame(3, 1));

    MeasurementSet permuted;
    permuted.records = {set.records[2], set.records[0], set.records[1]};
    SensingSystem psys = assemble_sensing_system(permuted, roi);
    CHECK(psys.A.row(0) == sys.A.row(2));
    CHECK(psys.y(0) == sys.y(2));
    CHECK(psys.A.row(1) == sys.A.row(0));
}

TEST_CASE("sensing assembly guards") {
    MeasurementSet set = synthetic_set(2, 8, 4);
    CHECK_THROWS_AS(assemble_sensing_system(set, RoiSpec{0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(assemble_sensing_system(set, RoiSpec{4, 4, 8, 8}), std::invalid_argument);
    set.records[1].reference_frame = IntensityGrid(4, 4, 1e-6);
    CHECK_THROWS_AS(assemble_sensing_system(set, RoiSpec{0, 0, 2, 2}), std::invalid_argument);
}

TEST_CASE("normalize_system: none is the identity") {
    MeasurementSet set = synthetic_set(4, 8, 5);
    SensingSystem sys = assemble_sensing_system(set, centered_roi(8, 8, 4));
    SensingSystem none = normalize_system(sys, NormalizeMode::None);
    CHECK(none.A == sys.A);
    CHECK(none.y == sys.y);
}

TEST_CASE("normalize_system: column_unit yields unit columns; factors restore the original") {
    MeasurementSet set = synthetic_set(6, 8, 6);
    SensingSystem sys = assemble_sensing_system(set, centered_roi(8, 8, 4));
    SensingSystem cu = normalize_system(sys, NormalizeMode::ColumnUnit);
    for (Eigen::Index c = 0; c < cu.A.cols(); ++c)
        CHECK(cu.A.col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::MatrixXd restored = cu.A * cu.scaling.col_factors.asDiagonal();
    CHECK((restored - sys.A).cwiseAbs().maxCoeff() < 1e-12 * sys.A.cwiseAbs().maxCoeff());
}

TEST_CASE("normalize_system: row_mean scales rows and observations together") {
    MeasurementSet set = synthetic_set(6, 8, 7);
    SensingSystem sys = assemble_sensing_system(set, centered_roi(8, 8, 4));
    SensingSystem rm = normalize_system(sys, NormalizeMode::RowMean);
    for (Eigen::Index r = 0; r < rm.A.rows(); ++r) {
        CHECK(rm.A.row(r).mean() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rm.y(r) * rm.scaling.row_factors(r) == doctest::Approx(sys.y(r)).epsilon(1e-12));
        CHECK((rm.A.row(r) * rm.scaling.row_factors(r) - sys.A.row(r)).cwiseAbs().maxCoeff() <
              1e-12 * sys.A.row(r).cwiseAbs().maxCoeff());
    }
}

TEST_CASE("normalize_system: zero rows / columns are rejected") {
    MeasurementSet rows_case = synthetic_set(3, 8, 8);
    for (auto& v : rows_case.records[1].reference_frame.values()) v = 0.0;
    SensingSystem rsys = assemble_sensing_system(rows_case, centered_roi(8, 8, 4));
    CHECK_THROWS_AS(normalize_system(rsys, NormalizeMode::RowMean), std::invalid_argument);

    MeasurementSet cols_case = synthetic_set(3, 8, 9);
    for (auto& rec : cols_case.records) rec.reference_frame(3, 3) = 0.0;  // one dead pixel
    SensingSystem csys = assemble_sensing_system(cols_case, centered_roi(8, 8, 4));
    CHECK_THROWS_AS(normalize_system(csys, NormalizeMode::ColumnUnit), std::invalid_argument);
}

TEST_CASE("solving the scaled system and un-scaling matches the unscaled solution") {
    std::mt19937 gen(99);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd A(10, 20);
    for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = std::abs(nd(gen)) + 0.1;
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(20);
    x0(3) = 1.2;
    x0(11) = 0.4;
    Eigen::VectorXd y = A * x0;

    SensingSystem sys;
    sys.A = A;
    sys.y = y;
    sys.roi = RoiSpec{0, 0, 4, 5};
    sys.roi_pitch = 1.0;

    SolverParams params;
    params.epsilon = 0.0;
    params.max_iters = 20000;
    ReconResult direct = cs_reconstruct(sys, params);
    ReconResult scaled = cs_reconstruct(normalize_system(sys, NormalizeMode::ColumnUnit), params);
    for (std::size_t i = 0; i < direct.estimate.size(); ++i)
        CHECK(scaled.estimate.values()[i] ==
              doctest::Approx(direct.estimate.values()[i]).epsilon(1e-4).scale(1.0));
}
