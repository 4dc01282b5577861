#pragma once

// Galerkin projection of the NtD map onto the first m orthonormal
// trigonometric currents sin(phi), cos(phi), sin(2 phi), ... (each scaled by
// 1/sqrt(pi)). On the layered disk the projection is diagonal, with sine and
// cosine of mode j sharing lambda_j; storage stays dense so noisy data and
// the solver share one code path.

#include "convexeit/geometry.hpp"
#include "convexeit/sym_matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace convexeit {

class MeasurementModel {
public:
    MeasurementModel(Geometry geom, std::size_t measurements);

    const Geometry& geometry() const noexcept { return geom_; }
    std::size_t layers() const noexcept { return geom_.layers(); }
    std::size_t measurements() const noexcept { return m_; }

    /// Mode of 0-based column k: ceil((k+1)/2).
    static int mode_of_column(std::size_t k) noexcept { return static_cast<int>(k / 2 + 1); }
    std::size_t modes() const noexcept { return (m_ + 1) / 2; }

private:
    Geometry geom_;
    std::size_t m_;
};

/// entries[i] = dF/dsigma_i.
struct JacobianStack {
    std::vector<SymMatrix> entries;

    std::size_t size() const noexcept { return entries.size(); }
    /// sum_i d_i entries[i].
    SymMatrix directional(std::span<const double> d) const;
};

SymMatrix assemble_F(const MeasurementModel& model, std::span<const double> sigma);
JacobianStack assemble_jacobian(const MeasurementModel& model, std::span<const double> sigma);

/// F and its Jacobian from one sweep.
struct ForwardEvaluation {
    SymMatrix value;
    JacobianStack jacobian;
};
ForwardEvaluation evaluate_forward(const MeasurementModel& model, std::span<const double> sigma);

/// ||F(sigma) - yhat||_F^2.
double frobenius_residual(const MeasurementModel& model, std::span<const double> sigma, const SymMatrix& yhat);

}  // namespace convexeit
