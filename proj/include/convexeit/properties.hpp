#pragma once

// Seeded randomized checks of the Loewner-order structure of F_m:
// monotonicity, convexity, the linearization under-estimate, sign and
// monotonicity of the derivative, the localized-potential definiteness and
// Jacobian agreement with central differences.

#include "convexeit/layer_box.hpp"
#include "convexeit/measurement.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace convexeit {

struct PropertyConfig {
    Geometry geometry;
    std::size_t m = 20;
    SigmaBox box;  // sampling range; pinned layers stay fixed
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    double tol = 1e-10;
    /// Test hook: negate every Jacobian entry before checking.
    bool flip_jacobian_sign = false;
};

struct PropertyResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst = 0.0;  // worst signed excess over the tolerance side
    bool skipped = false;
    std::string note;

    bool passed() const noexcept { return skipped || violations == 0; }
};

std::vector<PropertyResult> run_property_suites(const PropertyConfig& config);

}  // namespace convexeit
