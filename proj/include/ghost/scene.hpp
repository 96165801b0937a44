#pragma once

#include "ghost/grid.hpp"

namespace ghost {

struct SlitGeometry {
    double width = 0.0;       // a
    double separation = 0.0;  // d, center-to-center
    double height = 0.0;      // h
};

// Binary double slit centered on the grid: two width-a, height-h openings
// with centers `separation` apart.
TransmissionMask make_double_slit(double width, double separation, double height,
                                  double pitch, std::size_t dims);

inline TransmissionMask make_double_slit(const SlitGeometry& g, double pitch, std::size_t dims) {
    return make_double_slit(g.width, g.separation, g.height, pitch, dims);
}

}  // namespace ghost
