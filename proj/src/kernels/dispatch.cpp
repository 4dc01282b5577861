#include "convexeit/kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace convexeit::kernels {
namespace {

Isa detect()
{
    if (const char* env = std::getenv("CONVEXEIT_ISA"); env != nullptr && std::string(env) == "scalar")
        return Isa::scalar;
    if (isa_supported(Isa::avx2))
        return Isa::avx2;
    return Isa::scalar;
}

std::atomic<int>& current()
{
    static std::atomic<int> isa{static_cast<int>(detect())};
    return isa;
}

const KernelTable& table_for(Isa isa)
{
    if (isa == Isa::avx2)
        return *avx2_table();
    return scalar_table();
}

void check_sizes(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(std::string("kernel length mismatch in ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa)
{
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa)
{
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa() { return static_cast<Isa>(current().load(std::memory_order_relaxed)); }

const KernelTable& active() { return table_for(active_isa()); }

void force_isa(Isa isa)
{
    if (!isa_supported(isa))
        throw std::invalid_argument("ISA not supported on this host: " + std::string(isa_name(isa)));
    current().store(static_cast<int>(isa), std::memory_order_relaxed);
}

void interface_step(std::span<double> x, std::span<const double> scale, double s)
{
    check_sizes(x.size(), scale.size(), "interface_step");
    active().interface_step(x.data(), scale.data(), s, x.size());
}

void interface_step_tangent(std::span<double> x, std::span<double> dx, std::span<const double> scale,
                            double s, std::span<const double> ds)
{
    check_sizes(x.size(), scale.size(), "interface_step_tangent");
    check_sizes(dx.size(), ds.size() * x.size(), "interface_step_tangent");
    active().interface_step_tangent(x.data(), dx.data(), ds.size(), scale.data(), s, ds.data(), x.size());
}

void rotate_pair(std::span<double> u, std::span<double> v, double c, double s)
{
    check_sizes(u.size(), v.size(), "rotate_pair");
    active().rotate_pair(u.data(), v.data(), c, s, u.size());
}

double dot(std::span<const double> a, std::span<const double> b)
{
    check_sizes(a.size(), b.size(), "dot");
    return active().dot(a.data(), b.data(), a.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b)
{
    check_sizes(a.size(), b.size(), "sum_sq_diff");
    return active().sum_sq_diff(a.data(), b.data(), a.size());
}

}  // namespace convexeit::kernels
