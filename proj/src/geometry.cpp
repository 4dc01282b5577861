#include "convexeit/geometry.hpp"

#include <cmath>
#include <string>

namespace convexeit {

Geometry::Geometry(std::vector<double> radii) : radii_(std::move(radii))
{
    double previous = 1.0;
    for (double r : radii_) {
        if (!(r > 0.0 && r < previous))
            throw std::invalid_argument("interface radii must be strictly decreasing inside (0, 1)");
        previous = r;
    }
}

void require_positive(std::span<const double> sigma, std::size_t expected_size)
{
    if (sigma.size() != expected_size)
        throw std::invalid_argument("conductivity vector has " + std::to_string(sigma.size()) +
                                    " entries, geometry has " + std::to_string(expected_size) + " layers");
    for (double s : sigma)
        if (!(s > 0.0) || !std::isfinite(s))
            throw DomainError("conductivity values must be positive and finite");
}

}  // namespace convexeit
