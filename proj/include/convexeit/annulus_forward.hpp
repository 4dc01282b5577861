#pragma once

// Analytic Neumann-to-Dirichlet spectrum of a radially layered conductivity
// on the unit disk. For each mode j >= 1 the potential in layer i is
// (alpha_i r^j + beta_i r^-j) trig(j phi); continuity of u and sigma du/dr at
// each interface fixes the coefficients up to a common scale, and the
// boundary eigenvalue is lambda_j = (alpha_1 + beta_1) / (j sigma_1 (alpha_1 - beta_1)).

#include "convexeit/geometry.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace convexeit {

/// lambda_j for one mode.
double ntd_eigenvalue(const Geometry& geom, std::span<const double> sigma, int mode);

/// d lambda_j / d sigma_i for i = 0..n-1. Every entry is <= 0.
std::vector<double> ntd_gradient(const Geometry& geom, std::span<const double> sigma, int mode);

struct ModeSpectrum {
    int first_mode = 1;
    std::size_t modes = 0;
    std::vector<double> values;    // values[k] = lambda_{first_mode + k}
    std::vector<double> gradient;  // gradient[i * modes + k] = d lambda_{first_mode + k} / d sigma_i; empty if not requested
};

/// lambda_j for j = first_mode .. first_mode + count - 1 in one vectorized sweep.
ModeSpectrum ntd_spectrum(const Geometry& geom, std::span<const double> sigma, int first_mode,
                          std::size_t count, bool with_gradient);

/// Per-layer harmonic coefficients of mode j, normalized so the largest
/// magnitude is 1. Innermost beta is exactly 0. Only meaningful while
/// rho^-j stays finite; throws std::overflow_error otherwise.
struct LayerCoefficients {
    std::vector<double> alpha;
    std::vector<double> beta;
};

LayerCoefficients layer_coefficients(const Geometry& geom, std::span<const double> sigma, int mode);

}  // namespace convexeit
