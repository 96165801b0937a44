#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ghost/analysis.hpp"
#include "ghost/config.hpp"
#include "ghost/forward.hpp"
#include "ghost/rng.hpp"
#include "ghost/sensing.hpp"
#include "ghost/solver.hpp"

namespace py = pybind11;
using namespace ghost;

namespace {

// plain-pointer numpy interop so the module behaves the same across
// pybind11 versions
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

py::array_t<double> grid_to_numpy(const RealGrid& g) {
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(g.rows()),
                                                     static_cast<py::ssize_t>(g.cols())});
    std::memcpy(out.mutable_data(), g.data(), g.size() * sizeof(double));
    return out;
}

RealGrid numpy_to_grid(const DoubleArray& a, double pitch) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    RealGrid g(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)), pitch);
    std::memcpy(g.data(), a.data(), g.size() * sizeof(double));
    return g;
}

ComplexGrid numpy_to_cgrid(const ComplexArray& a, double pitch) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    ComplexGrid g(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)), pitch);
    std::memcpy(g.data(), a.data(), g.size() * sizeof(std::complex<double>));
    return g;
}

py::array_t<std::complex<double>> cgrid_to_numpy(const ComplexGrid& g) {
    py::array_t<std::complex<double>> out(std::vector<py::ssize_t>{
        static_cast<py::ssize_t>(g.rows()), static_cast<py::ssize_t>(g.cols())});
    std::memcpy(out.mutable_data(), g.data(), g.size() * sizeof(std::complex<double>));
    return out;
}

Eigen::MatrixXd numpy_to_matrix(const DoubleArray& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    const py::ssize_t rows = a.shape(0), cols = a.shape(1);
    const double* p = a.data();
    Eigen::MatrixXd M(rows, cols);
    for (py::ssize_t r = 0; r < rows; ++r)
        for (py::ssize_t c = 0; c < cols; ++c) M(r, c) = p[r * cols + c];
    return M;
}

Eigen::VectorXd numpy_to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    Eigen::VectorXd v(a.shape(0));
    std::memcpy(v.data(), a.data(), static_cast<std::size_t>(a.shape(0)) * sizeof(double));
    return v;
}

py::array_t<double> vector_to_numpy(const Eigen::VectorXd& v) {
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::memcpy(out.mutable_data(), v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
    return out;
}

SolverParams solver_params(double epsilon, double epsilon_rel, bool nonneg, int max_iters,
                           double tol) {
    SolverParams p;
    p.epsilon = epsilon;
    p.epsilon_rel = epsilon_rel;
    p.nonneg = nonneg;
    p.max_iters = max_iters;
    p.tol = tol;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pseudo-thermal ghost-imaging simulation and reconstruction core";

    py::class_<SlitGeometry>(m, "SlitGeometry")
        .def(py::init<double, double, double>(), py::arg("width"), py::arg("separation"),
             py::arg("height"))
        .def_readwrite("width", &SlitGeometry::width)
        .def_readwrite("separation", &SlitGeometry::separation)
        .def_readwrite("height", &SlitGeometry::height);

    py::class_<OpticalLayout>(m, "OpticalLayout")
        .def_readwrite("wavelength", &OpticalLayout::wavelength)
        .def_readwrite("z", &OpticalLayout::z)
        .def_readwrite("z1", &OpticalLayout::z1)
        .def_readwrite("z2", &OpticalLayout::z2)
        .def_readwrite("f", &OpticalLayout::f)
        .def_readwrite("L", &OpticalLayout::L)
        .def_readwrite("L1", &OpticalLayout::L1)
        .def_property(
            "variant",
            [](const OpticalLayout& l) {
                return l.variant == PathVariant::Lensed ? "lensed" : "open";
            },
            [](OpticalLayout& l, const std::string& v) {
                l.variant = v == "open" ? PathVariant::Open : PathVariant::Lensed;
            })
        .def_property(
            "reference_pixel_factor",
            [](const OpticalLayout& l) { return l.reference_pixel_factor(); },
            [](OpticalLayout& l, std::size_t k) {
                l.reference_pixel_pitch = l.object_pitch() * static_cast<double>(k);
            })
        .def_property_readonly("object_pitch", &OpticalLayout::object_pitch)
        .def_property_readonly("frame_window", &OpticalLayout::frame_window);

    m.def("paper_layout", [] { return preset_config("paper").layout; });
    m.def("fast_layout", [] { return preset_config("fast").layout; });

    m.def(
        "make_double_slit",
        [](double width, double separation, double height, double pitch, std::size_t dims) {
            return grid_to_numpy(make_double_slit(width, separation, height, pitch, dims).grid);
        },
        py::arg("width"), py::arg("separation"), py::arg("height"), py::arg("pitch"),
        py::arg("dims"));

    m.def(
        "generate_source_realization",
        [](double diameter, std::size_t grid_size, double pitch, double wavelength,
           std::uint64_t seed, const std::string& shape) {
            SourceSpec spec{diameter,
                            shape == "square" ? ApertureShape::Square : ApertureShape::Disk, 1.0,
                            grid_size, pitch};
            return cgrid_to_numpy(generate_source_realization(spec, wavelength, seed).grid);
        },
        py::arg("diameter"), py::arg("grid_size"), py::arg("pitch"), py::arg("wavelength"),
        py::arg("seed"), py::arg("shape") = "disk");

    m.def(
        "fresnel_propagate",
        [](const ComplexArray& u,
           double pitch, double wavelength, double distance, const std::string& method) {
            OpticalField f(numpy_to_cgrid(u, pitch), wavelength);
            OpticalField g = fresnel_propagate(f, distance,
                                               method == "transfer"
                                                   ? PropagationMethod::TransferFunction
                                                   : PropagationMethod::SingleTransformScaled);
            return py::make_tuple(cgrid_to_numpy(g.grid), g.pitch());
        },
        py::arg("field"), py::arg("pitch"), py::arg("wavelength"), py::arg("distance"),
        py::arg("method") = "scaled");

    m.def(
        "run_campaign",
        [](const OpticalLayout& layout, const DoubleArray& mask, std::size_t m,
           std::uint64_t master_seed, unsigned threads) {
            TransmissionMask object(numpy_to_grid(mask, layout.object_pitch()));
            MeasurementSet set = run_campaign(layout, object, m, master_seed, threads);
            const auto& f0 = set.records.front().reference_frame;
            py::array_t<double> frames(std::vector<py::ssize_t>{
                static_cast<py::ssize_t>(set.records.size()), static_cast<py::ssize_t>(f0.rows()),
                static_cast<py::ssize_t>(f0.cols())});
            py::array_t<double> buckets(
                std::vector<py::ssize_t>{static_cast<py::ssize_t>(set.records.size())});
            py::array_t<std::uint64_t> seeds(
                std::vector<py::ssize_t>{static_cast<py::ssize_t>(set.records.size())});
            double* fp = frames.mutable_data();
            double* bp = buckets.mutable_data();
            std::uint64_t* sp = seeds.mutable_data();
            for (std::size_t r = 0; r < set.records.size(); ++r) {
                std::memcpy(fp + r * f0.size(), set.records[r].reference_frame.data(),
                            f0.size() * sizeof(double));
                bp[r] = set.records[r].bucket;
                sp[r] = set.records[r].seed;
            }
            return py::make_tuple(frames, buckets, seeds, f0.pitch());
        },
        py::arg("layout"), py::arg("mask"), py::arg("m"), py::arg("master_seed"),
        py::arg("threads") = 1);

    m.def(
        "gi_reconstruct",
        [](const DoubleArray& frames, const DoubleArray& buckets, double pitch) {
            if (frames.ndim() != 3) throw std::invalid_argument("frames must be (m, rows, cols)");
            const double* fp = frames.data();
            const double* bp = buckets.data();
            const auto frame_size =
                static_cast<std::size_t>(frames.shape(1)) * static_cast<std::size_t>(frames.shape(2));
            MeasurementSet set;
            for (py::ssize_t r = 0; r < frames.shape(0); ++r) {
                RealizationRecord rec;
                rec.reference_frame = RealGrid(static_cast<std::size_t>(frames.shape(1)),
                                               static_cast<std::size_t>(frames.shape(2)), pitch);
                std::memcpy(rec.reference_frame.data(), fp + static_cast<std::size_t>(r) * frame_size,
                            frame_size * sizeof(double));
                rec.bucket = bp[r];
                set.records.push_back(std::move(rec));
            }
            ReconResult res = gi_reconstruct(set);
            return py::make_tuple(grid_to_numpy(res.estimate), to_string(res.status));
        },
        py::arg("frames"), py::arg("buckets"), py::arg("pitch"));

    m.def(
        "cs_reconstruct",
        [](const DoubleArray& A,
           const DoubleArray& y,
           std::size_t roi_rows, std::size_t roi_cols, double epsilon, double epsilon_rel,
           bool nonneg, int max_iters, const std::string& normalize) {
            SensingSystem sys;
            sys.A = numpy_to_matrix(A);
            sys.y = numpy_to_vector(y);
            sys.roi = RoiSpec{0, 0, roi_rows, roi_cols};
            sys.roi_pitch = 1.0;
            if (normalize == "row_mean")
                sys = normalize_system(sys, NormalizeMode::RowMean);
            else if (normalize == "column_unit")
                sys = normalize_system(sys, NormalizeMode::ColumnUnit);
            ReconResult res =
                cs_reconstruct(sys, solver_params(epsilon, epsilon_rel, nonneg, max_iters, 1e-8));
            return py::make_tuple(grid_to_numpy(res.estimate), to_string(res.status),
                                  res.final_residual, res.iterations);
        },
        py::arg("A"), py::arg("y"), py::arg("roi_rows"), py::arg("roi_cols"),
        py::arg("epsilon") = -1.0, py::arg("epsilon_rel") = 0.02, py::arg("nonneg") = true,
        py::arg("max_iters") = 5000, py::arg("normalize") = "none");

    m.def(
        "lasso_fista",
        [](const DoubleArray& A,
           const DoubleArray& y, double lam,
           bool nonneg, int max_iters, double tol) {
            SolverParams p;
            p.nonneg = nonneg;
            p.max_iters = max_iters;
            p.tol = tol;
            LassoResult res = lasso_fista(numpy_to_matrix(A), numpy_to_vector(y), lam, p);
            return py::make_tuple(vector_to_numpy(res.x), res.iterations);
        },
        py::arg("A"), py::arg("y"), py::arg("lam"), py::arg("nonneg") = true,
        py::arg("max_iters") = 5000, py::arg("tol") = 1e-10);

    m.def(
        "bp_oracle_enumerate",
        [](const DoubleArray& A,
           const DoubleArray& y, int k_max) {
            return vector_to_numpy(bp_oracle_enumerate(numpy_to_matrix(A), numpy_to_vector(y), k_max));
        },
        py::arg("A"), py::arg("y"), py::arg("k_max"));

    m.def(
        "speckle_correlation_width",
        [](const DoubleArray& frames,
           double pitch) {
            if (frames.ndim() != 3) throw std::invalid_argument("frames must be (m, rows, cols)");
            std::vector<IntensityGrid> grids;
            const double* fp = frames.data();
            for (py::ssize_t r = 0; r < frames.shape(0); ++r) {
                RealGrid g(static_cast<std::size_t>(frames.shape(1)),
                           static_cast<std::size_t>(frames.shape(2)), pitch);
                std::memcpy(g.data(), fp + static_cast<std::size_t>(r) * g.size(),
                            g.size() * sizeof(double));
                grids.push_back(std::move(g));
            }
            return analysis::speckle_correlation_width(grids);
        },
        py::arg("frames"), py::arg("pitch"));

    m.def(
        "double_slit_metrics",
        [](const DoubleArray& image, double pitch,
           const SlitGeometry& slit) {
            analysis::ProfileMetrics pm =
                analysis::double_slit_metrics(numpy_to_grid(image, pitch), slit);
            py::dict d;
            d["midpoint_ratio"] = pm.midpoint_ratio;
            d["peak_positions"] = pm.peak_positions;
            d["peak_values"] = pm.peak_values;
            d["fwhm"] = pm.fwhm;
            d["resolved"] = pm.resolved;
            return d;
        },
        py::arg("image"), py::arg("pitch"), py::arg("slit"));

    m.def(
        "image_error",
        [](const DoubleArray& estimate,
           const DoubleArray& truth,
           double pitch) {
            analysis::ImageErrorRecord rec = analysis::image_error(
                numpy_to_grid(estimate, pitch), TransmissionMask(numpy_to_grid(truth, pitch)));
            py::dict d;
            d["mse"] = rec.mse;
            d["normalized_mse"] = rec.normalized_mse;
            d["peak_snr"] = rec.peak_snr;
            d["snr_bg"] = rec.snr_bg;
            return d;
        },
        py::arg("estimate"), py::arg("truth"), py::arg("pitch") = 1.0);

    m.def("split_seed", &rng::split_seed, py::arg("master_seed"), py::arg("r"));
    m.attr("__version__") = "0.1.0";
}
