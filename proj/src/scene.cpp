#include "ghost/scene.hpp"

#include <cmath>

namespace ghost {

TransmissionMask make_double_slit(double width, double separation, double height,
                                  double pitch, std::size_t dims) {
    if (!(width > 0.0 && separation > 0.0 && height > 0.0))
        throw std::invalid_argument("make_double_slit: dimensions must be > 0");
    if (!(width < separation))
        throw std::invalid_argument("make_double_slit: requires width < separation");
    const double extent = static_cast<double>(dims) * pitch;
    if (separation + width > extent || height > extent)
        throw std::invalid_argument("make_double_slit: slits do not fit in the grid");

    RealGrid g(dims, dims, pitch, 0.0);
    const double halfw = width / 2.0, halfh = height / 2.0, center = separation / 2.0;
    for (std::size_t r = 0; r < dims; ++r) {
        const double y = g.y(r);
        if (std::abs(y) >= halfh) continue;
        for (std::size_t c = 0; c < dims; ++c) {
            const double x = g.x(c);
            if (std::abs(std::abs(x) - center) < halfw) g(r, c) = 1.0;
        }
    }
    return TransmissionMask(std::move(g));
}

}  // namespace ghost
