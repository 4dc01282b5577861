#include "convexeit/measurement.hpp"

#include "convexeit/annulus_forward.hpp"
#include "convexeit/kernels/kernels.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace convexeit {

MeasurementModel::MeasurementModel(Geometry geom, std::size_t measurements)
    : geom_(std::move(geom)), m_(measurements)
{
    if (m_ == 0)
        throw std::invalid_argument("measurement count must be >= 1");
}

SymMatrix JacobianStack::directional(std::span<const double> d) const
{
    if (d.size() != entries.size())
        throw std::invalid_argument("direction length does not match the Jacobian stack");
    if (entries.empty())
        return {};
    SymMatrix out(entries.front().order());
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (d[i] != 0.0)
            out += d[i] * entries[i];
    return out;
}

SymMatrix assemble_F(const MeasurementModel& model, std::span<const double> sigma)
{
    const ModeSpectrum spec = ntd_spectrum(model.geometry(), sigma, 1, model.modes(), false);
    SymMatrix f(model.measurements());
    for (std::size_t k = 0; k < model.measurements(); ++k)
        f.set(k, k, spec.values[k / 2]);
    return f;
}

ForwardEvaluation evaluate_forward(const MeasurementModel& model, std::span<const double> sigma)
{
    const std::size_t m = model.measurements();
    const std::size_t n = model.layers();
    const ModeSpectrum spec = ntd_spectrum(model.geometry(), sigma, 1, model.modes(), true);

    ForwardEvaluation out{SymMatrix(m), {}};
    out.jacobian.entries.assign(n, SymMatrix(m));
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t mode = k / 2;
        out.value.set(k, k, spec.values[mode]);
        for (std::size_t i = 0; i < n; ++i)
            out.jacobian.entries[i].set(k, k, spec.gradient[i * spec.modes + mode]);
    }
    return out;
}

JacobianStack assemble_jacobian(const MeasurementModel& model, std::span<const double> sigma)
{
    return evaluate_forward(model, sigma).jacobian;
}

double frobenius_residual(const MeasurementModel& model, std::span<const double> sigma, const SymMatrix& yhat)
{
    if (yhat.order() != model.measurements())
        throw std::invalid_argument(
            fmt::format("data is {0}x{0}, model has {1} measurements", yhat.order(), model.measurements()));
    const SymMatrix f = assemble_F(model, sigma);
    return kernels::sum_sq_diff(f.values(), yhat.values());
}

}  // namespace convexeit
