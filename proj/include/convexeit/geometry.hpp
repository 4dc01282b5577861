#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace convexeit {

/// Concentric layering of the unit disk. Layer 0 touches the boundary and
/// occupies radius_[0] < |x| < 1; layer i sits between radius_[i] and
/// radius_[i-1]; the last layer is the inner disk. Deeper index means deeper
/// layer, so every union of deeper layers has a complement connected to the
/// boundary.
class Geometry {
public:
    Geometry() = default;  // single homogeneous disk

    /// Interface radii, strictly decreasing, all in (0, 1).
    explicit Geometry(std::vector<double> radii);

    std::size_t layers() const noexcept { return radii_.size() + 1; }
    const std::vector<double>& radii() const noexcept { return radii_; }

    /// Outer radius of layer i (1 for the boundary layer).
    double outer_radius(std::size_t layer) const { return layer == 0 ? 1.0 : radii_.at(layer - 1); }

private:
    std::vector<double> radii_;
};

/// Error raised for non-positive or non-finite conductivities.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

void require_positive(std::span<const double> sigma, std::size_t expected_size);

}  // namespace convexeit
