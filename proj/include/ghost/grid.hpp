#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghost {

// Uniform 2-D grid, row-major, square cells of size `pitch` (meters).
// Cell centers sit at (i + 0.5 - n/2) * pitch along each axis, so even and
// odd grids share one coordinate convention and mirror symmetry about the
// optical axis maps index i to n-1-i exactly.
template <typename T>
class Grid2D {
public:
    Grid2D() = default;

    Grid2D(std::size_t rows, std::size_t cols, double pitch, T fill = T{})
        : rows_(rows), cols_(cols), pitch_(pitch), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("Grid2D: empty grid");
        if (!(pitch > 0.0))
            throw std::invalid_argument("Grid2D: pitch must be > 0");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    double pitch() const { return pitch_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    // coordinate of cell index i along an axis of length n
    double coord(std::size_t i, std::size_t n) const {
        return (static_cast<double>(i) + 0.5 - 0.5 * static_cast<double>(n)) * pitch_;
    }
    double x(std::size_t c) const { return coord(c, cols_); }
    double y(std::size_t r) const { return coord(r, rows_); }

    template <typename U>
    bool congruent_with(const Grid2D<U>& other, double rel_tol = 1e-9) const {
        return rows_ == other.rows() && cols_ == other.cols() &&
               std::abs(pitch_ - other.pitch()) <= rel_tol * pitch_;
    }

    Grid2D crop(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
        if (row0 + nrows > rows_ || col0 + ncols > cols_)
            throw std::invalid_argument("Grid2D::crop: region out of bounds");
        Grid2D out(nrows, ncols, pitch_);
        for (std::size_t r = 0; r < nrows; ++r)
            for (std::size_t c = 0; c < ncols; ++c)
                out(r, c) = (*this)(row0 + r, col0 + c);
        return out;
    }

    Grid2D crop_center(std::size_t nrows, std::size_t ncols) const {
        return crop((rows_ - nrows) / 2, (cols_ - ncols) / 2, nrows, ncols);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    double pitch_ = 0.0;
    std::vector<T> data_;
};

using RealGrid = Grid2D<double>;
using ComplexGrid = Grid2D<std::complex<double>>;

// Nonnegative real grid (speckle frames, images, reconstructions).
using IntensityGrid = RealGrid;

// Scalar complex field sampled on a uniform grid.
struct OpticalField {
    ComplexGrid grid;
    double wavelength = 0.0;
    std::string plane_label;

    OpticalField() = default;
    OpticalField(ComplexGrid g, double wl, std::string label = {})
        : grid(std::move(g)), wavelength(wl), plane_label(std::move(label)) {
        if (!(wavelength > 0.0))
            throw std::invalid_argument("OpticalField: wavelength must be > 0");
    }

    std::size_t rows() const { return grid.rows(); }
    std::size_t cols() const { return grid.cols(); }
    double pitch() const { return grid.pitch(); }

    // total energy = sum |u|^2 * pitch^2
    double energy() const;
};

// Amplitude transmission mask, entries in [0,1].
struct TransmissionMask {
    RealGrid grid;

    TransmissionMask() = default;
    explicit TransmissionMask(RealGrid g) : grid(std::move(g)) { validate(); }

    std::size_t rows() const { return grid.rows(); }
    std::size_t cols() const { return grid.cols(); }
    double pitch() const { return grid.pitch(); }

    void validate() const;
};

double grid_sum(const RealGrid& g);
double grid_max(const RealGrid& g);
// sum of values * pitch^2
double grid_energy(const RealGrid& g);

void validate_intensity(const RealGrid& g);

}  // namespace ghost
