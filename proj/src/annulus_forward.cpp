#include "convexeit/annulus_forward.hpp"

#include "convexeit/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace convexeit {
namespace {

void require_mode(int mode)
{
    if (mode < 1)
        throw std::invalid_argument("mode index must be >= 1");
}

}  // namespace

// The sweep carries x = beta r^-j / (alpha r^j) at the outer radius of the
// current layer. Starting from the inner disk (x = 0) an interface at rho with
// conductivity ratio s = sigma_inner / sigma_outer maps
//     x  ->  (rho / rho_outer)^(2j) * ((1+x) - s(1-x)) / ((1+x) + s(1-x)),
// which keeps |x| <= 1 for every j.
ModeSpectrum ntd_spectrum(const Geometry& geom, std::span<const double> sigma, int first_mode,
                          std::size_t count, bool with_gradient)
{
    const std::size_t n = geom.layers();
    require_positive(sigma, n);
    require_mode(first_mode);

    ModeSpectrum out;
    out.first_mode = first_mode;
    out.modes = count;
    out.values.assign(count, 0.0);
    if (count == 0)
        return out;

    std::vector<double> x(count, 0.0);
    std::vector<double> dx;
    std::vector<double> ds;
    if (with_gradient) {
        dx.assign(n * count, 0.0);
        ds.assign(n, 0.0);
    }
    std::vector<double> scale(count);

    for (std::size_t inner = n - 1; inner >= 1; --inner) {
        const std::size_t outer = inner - 1;
        const double ratio = geom.radii()[inner - 1] / geom.outer_radius(outer);
        for (std::size_t k = 0; k < count; ++k)
            scale[k] = std::pow(ratio, 2.0 * static_cast<double>(first_mode + static_cast<int>(k)));
        const double s = sigma[inner] / sigma[outer];
        if (with_gradient) {
            std::fill(ds.begin(), ds.end(), 0.0);
            ds[inner] = 1.0 / sigma[outer];
            ds[outer] = -sigma[inner] / (sigma[outer] * sigma[outer]);
            kernels::interface_step_tangent(x, dx, scale, s, ds);
        } else {
            kernels::interface_step(x, scale, s);
        }
    }

    const double sigma0 = sigma[0];
    if (with_gradient)
        out.gradient.assign(n * count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        const double j = static_cast<double>(first_mode + static_cast<int>(k));
        const double inv = 1.0 / (j * sigma0 * (1.0 - x[k]));
        const double lambda = (1.0 + x[k]) * inv;
        out.values[k] = lambda;
        if (with_gradient) {
            const double dlambda_dx = 2.0 * inv / (1.0 - x[k]);
            for (std::size_t t = 0; t < n; ++t)
                out.gradient[t * count + k] = dlambda_dx * dx[t * count + k];
            out.gradient[k] -= lambda / sigma0;
        }
    }
    return out;
}

double ntd_eigenvalue(const Geometry& geom, std::span<const double> sigma, int mode)
{
    return ntd_spectrum(geom, sigma, mode, 1, false).values[0];
}

std::vector<double> ntd_gradient(const Geometry& geom, std::span<const double> sigma, int mode)
{
    return ntd_spectrum(geom, sigma, mode, 1, true).gradient;
}

LayerCoefficients layer_coefficients(const Geometry& geom, std::span<const double> sigma, int mode)
{
    const std::size_t n = geom.layers();
    require_positive(sigma, n);
    require_mode(mode);

    LayerCoefficients out;
    out.alpha.assign(n, 0.0);
    out.beta.assign(n, 0.0);
    out.alpha[n - 1] = 1.0;

    const double j = static_cast<double>(mode);
    for (std::size_t inner = n - 1; inner >= 1; --inner) {
        const std::size_t outer = inner - 1;
        const double rho = geom.radii()[inner - 1];
        const double up = std::pow(rho, j);
        const double down = std::pow(rho, -j);
        if (!std::isfinite(down) || up == 0.0)
            throw std::overflow_error("mode too high for explicit layer coefficients");
        // Continuity of u and sigma du/dr at rho.
        const double p = out.alpha[inner] * up + out.beta[inner] * down;
        const double q = sigma[inner] / sigma[outer] * (out.alpha[inner] * up - out.beta[inner] * down);
        out.alpha[outer] = 0.5 * (p + q) / up;
        out.beta[outer] = 0.5 * (p - q) / down;

        double peak = 0.0;
        for (std::size_t i = outer; i < n; ++i)
            peak = std::max({peak, std::abs(out.alpha[i]), std::abs(out.beta[i])});
        for (std::size_t i = outer; i < n; ++i) {
            out.alpha[i] /= peak;
            out.beta[i] /= peak;
        }
    }
    return out;
}

}  // namespace convexeit
