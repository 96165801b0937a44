#include "ghost/grid.hpp"

#include <cmath>

namespace ghost {

double OpticalField::energy() const {
    double s = 0.0;
    for (const auto& v : grid.values()) s += std::norm(v);
    return s * grid.pitch() * grid.pitch();
}

void TransmissionMask::validate() const {
    for (double v : grid.values())
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("TransmissionMask: entries must lie in [0,1]");
}

double grid_sum(const RealGrid& g) {
    double s = 0.0;
    for (double v : g.values()) s += v;
    return s;
}

double grid_max(const RealGrid& g) {
    double m = g.values().front();
    for (double v : g.values()) m = std::max(m, v);
    return m;
}

double grid_energy(const RealGrid& g) {
    return grid_sum(g) * g.pitch() * g.pitch();
}

void validate_intensity(const RealGrid& g) {
    for (double v : g.values())
        if (!(v >= 0.0))
            throw std::invalid_argument("IntensityGrid: entries must be >= 0");
}

}  // namespace ghost
