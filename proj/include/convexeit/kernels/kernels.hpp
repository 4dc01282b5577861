#pragma once

// Data-parallel inner loops shared by the forward model and the dense
// eigensolver. Every kernel has a scalar reference implementation; SIMD
// variants are selected once at runtime and must reproduce the reference
// bit-for-bit on the elementwise kernels. Reductions (dot, sum_sq_diff) may
// differ in the last bits because the summation order changes.

#include <cstddef>
#include <span>
#include <string_view>

namespace convexeit::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Raw kernel entry points. Lengths are element counts; pointers may alias
/// nothing. Use the span wrappers below in ordinary code.
struct KernelTable {
    // x[k] <- scale[k] * g(x[k], s),  g(x, s) = ((1+x) - s(1-x)) / ((1+x) + s(1-x))
    void (*interface_step)(double* x, const double* scale, double s, std::size_t count);

    // Same update plus forward-mode tangents. dx holds ntan rows of length
    // count (row t = d x / d sigma_t); ds[t] = d s / d sigma_t.
    void (*interface_step_tangent)(double* x, double* dx, std::size_t ntan, const double* scale,
                                   double s, const double* ds, std::size_t count);

    // Plane rotation: u <- c u - s v,  v <- s u + c v.
    void (*rotate_pair)(double* u, double* v, double c, double s, std::size_t count);

    double (*dot)(const double* a, const double* b, std::size_t count);
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t count);
};

const KernelTable& scalar_table();

/// Null when the ISA was not compiled in.
const KernelTable* avx2_table();

bool isa_supported(Isa isa);

/// Table in use. Picked on first call from the host CPU unless overridden
/// with force_isa() or the CONVEXEIT_ISA environment variable ("scalar").
const KernelTable& active();
Isa active_isa();

/// Throws std::invalid_argument if the ISA is unsupported on this host.
void force_isa(Isa isa);

// Span wrappers over active().

void interface_step(std::span<double> x, std::span<const double> scale, double s);
void interface_step_tangent(std::span<double> x, std::span<double> dx, std::span<const double> scale,
                            double s, std::span<const double> ds);
void rotate_pair(std::span<double> u, std::span<double> v, double c, double s);
double dot(std::span<const double> a, std::span<const double> b);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

}  // namespace convexeit::kernels
