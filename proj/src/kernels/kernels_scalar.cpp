#include "convexeit/kernels/kernels.hpp"

namespace convexeit::kernels {
namespace {

void interface_step_scalar(double* x, const double* scale, double s, std::size_t count)
{
    for (std::size_t k = 0; k < count; ++k) {
        const double a = 1.0 + x[k];
        const double b = 1.0 - x[k];
        const double sb = s * b;
        const double g = (a - sb) / (a + sb);
        x[k] = scale[k] * g;
    }
}

void interface_step_tangent_scalar(double* x, double* dx, std::size_t ntan, const double* scale,
                                   double s, const double* ds, std::size_t count)
{
    for (std::size_t k = 0; k < count; ++k) {
        const double a = 1.0 + x[k];
        const double b = 1.0 - x[k];
        const double sb = s * b;
        const double den = a + sb;
        const double den2 = den * den;
        const double g = (a - sb) / den;
        const double gx = (4.0 * s) / den2;
        const double gs = -(2.0 * (a * b)) / den2;
        const double f = scale[k];
        for (std::size_t t = 0; t < ntan; ++t) {
            double& d = dx[t * count + k];
            d = f * (gx * d + gs * ds[t]);
        }
        x[k] = f * g;
    }
}

void rotate_pair_scalar(double* u, double* v, double c, double s, std::size_t count)
{
    for (std::size_t k = 0; k < count; ++k) {
        const double uk = u[k];
        const double vk = v[k];
        u[k] = c * uk - s * vk;
        v[k] = s * uk + c * vk;
    }
}

double dot_scalar(const double* a, const double* b, std::size_t count)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < count; ++k)
        acc += a[k] * b[k];
    return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t count)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc;
}

}  // namespace

const KernelTable& scalar_table()
{
    static const KernelTable table{
        interface_step_scalar, interface_step_tangent_scalar, rotate_pair_scalar,
        dot_scalar,            sum_sq_diff_scalar,
    };
    return table;
}

}  // namespace convexeit::kernels
