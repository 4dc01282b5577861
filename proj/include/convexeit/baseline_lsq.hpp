#pragma once

// Nonconvex least-squares baseline: Levenberg-Marquardt on ||F(sigma) - Y||_F^2.
// No global-optimality claim; it exists to exhibit the basins of attraction
// the convex formulation avoids.

#include "convexeit/layer_box.hpp"
#include "convexeit/measurement.hpp"
#include "convexeit/sdp_solver.hpp"

#include <span>

namespace convexeit {

enum class BoxBehavior { clamp, none };

struct LMOptions {
    double initial_damping = 1e-3;  // relative to max diag(J^T J)
    double damping_up = 10.0;
    double damping_down = 10.0;
    int max_iterations = 200;
    double gradient_tol = 1e-14;
    /// Stop with status "stopped" once an accepted step changes the cost by
    /// less than function_tol * cost, or moves x by less than
    /// step_tol * (1 + ||x||_inf). Zero disables either test.
    double function_tol = 0.0;
    double step_tol = 0.0;
    BoxBehavior box = BoxBehavior::clamp;

    void validate() const;
};

/// Starts from the free layers of sigma0 (pinned layers come from the box).
/// SolveReport::objective is the final residual ||F - Y||_F^2;
/// feasibility_residual is unused (NaN). Divergence (sigma leaving R^n_+
/// without clamping, or non-finite residuals) ends with status "diverged".
SolveReport lsq_solve(const MeasurementModel& model, const SigmaBox& box, const SymMatrix& yhat,
                      std::span<const double> sigma0, const LMOptions& options = {});

}  // namespace convexeit
