#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <thread>

#include "ghost/forward.hpp"
#include "ghost/rng.hpp"

namespace ghost {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double u) {
    if (u == 0.0) return 1.0;
    const double pu = kPi * u;
    return std::sin(pu) / pu;
}

void require_conjugate(const OpticalLayout& layout) {
    if (layout.variant != PathVariant::Lensed)
        throw std::invalid_argument("conventional imaging requires the lensed variant");
    if (layout.conjugate_defect() > 1e-9)
        throw std::invalid_argument("conventional imaging requires conjugate planes 1/z1 + 1/z2 = 1/f");
}

// kernel[i_out, i_in] = sinc(L (x_out/z2 + x_in/z1) / wl), on matching grids
// with output pitch = (z2/z1) * input pitch.
Eigen::MatrixXd imaging_kernel(const OpticalLayout& layout, const RealGrid& obj, bool squared) {
    const std::size_t n = obj.cols();
    const double p_in = obj.pitch();
    const double p_out = p_in * layout.z2 / layout.z1;
    Eigen::MatrixXd K(n, n);
    RealGrid out_axis(n, n, p_out);
    for (std::size_t i = 0; i < n; ++i) {
        const double xo = out_axis.x(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double xi = obj.x(j);
            const double v = sinc(layout.L * (xo / layout.z2 + xi / layout.z1) / layout.wavelength);
            K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = squared ? v * v : v;
        }
    }
    return K;
}

RealGrid normalized_to_peak(Eigen::MatrixXd img, double pitch) {
    const double mx = img.maxCoeff();
    if (mx > 0.0) img /= mx;
    RealGrid out(static_cast<std::size_t>(img.rows()), static_cast<std::size_t>(img.cols()), pitch);
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
            out(r, c) = img(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

}  // namespace

RealGrid conventional_image_analytic(const OpticalLayout& layout, const TransmissionMask& object) {
    require_conjugate(layout);
    const std::size_t n = object.cols();
    if (object.rows() != n) throw std::invalid_argument("conventional imaging expects a square mask");

    Eigen::MatrixXd K2 = imaging_kernel(layout, object.grid, true);
    Eigen::MatrixXd T2(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double t = object.grid(r, c);
            T2(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t * t;
        }
    // rows are y, columns x; both axes use the same square-aperture kernel
    Eigen::MatrixXd img = K2 * T2 * K2.transpose();
    return normalized_to_peak(std::move(img), object.pitch() * layout.z2 / layout.z1);
}

RealGrid conventional_image_ensemble(const OpticalLayout& layout, const TransmissionMask& object,
                                     std::size_t n_realizations, std::uint64_t master_seed,
                                     unsigned threads) {
    require_conjugate(layout);
    layout.validate();
    if (n_realizations == 0) throw std::invalid_argument("ensemble image: n must be >= 1");
    const std::size_t w = layout.frame_window();
    if (object.rows() != w || object.cols() != w)
        throw std::invalid_argument("ensemble image: object mask must match the frame window");

    Eigen::MatrixXd K = imaging_kernel(layout, object.grid, false);
    // object-side quadratic phase of the conjugate-plane kernel
    ComplexGrid chirp(w, w, object.pitch());
    for (std::size_t r = 0; r < w; ++r) {
        const double y = chirp.y(r);
        for (std::size_t c = 0; c < w; ++c) {
            const double x = chirp.x(c);
            chirp(r, c) = std::polar(1.0, kPi * (x * x + y * y) / (layout.wavelength * layout.z1));
        }
    }

    unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_realizations));

    const Eigen::MatrixXcd Kc = K.cast<std::complex<double>>();
    // strided assignment (realization r on worker r % n_threads) keeps every
    // partial sum, and hence the reduced mean, independent of scheduling
    std::vector<Eigen::MatrixXd> partial(n_threads, Eigen::MatrixXd::Zero(w, w));
    auto work = [&](unsigned tid) {
        Eigen::MatrixXcd V(w, w), U(w, w);
        for (std::size_t r = tid; r < n_realizations; r += n_threads) {
            OpticalField src = generate_source_realization(layout.source, layout.wavelength,
                                                           rng::split_seed(master_seed, r));
            OpticalField obj = fresnel_propagate(src, layout.z, layout.source_method);
            ComplexGrid field = obj.grid.crop_center(w, w);
            for (std::size_t i = 0; i < w; ++i)
                for (std::size_t j = 0; j < w; ++j)
                    V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        field(i, j) * object.grid(i, j) * chirp(i, j);
            U.noalias() = Kc * V * Kc.transpose();
            partial[tid] += U.cwiseAbs2();
        }
    };
    if (n_threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    // fixed-order reduction over thread partials
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(w, w);
    for (const auto& p : partial) acc += p;
    acc /= static_cast<double>(n_realizations);
    return normalized_to_peak(std::move(acc), object.pitch() * layout.z2 / layout.z1);
}

}  // namespace ghost
