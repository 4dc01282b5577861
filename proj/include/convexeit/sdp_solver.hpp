#pragma once

// minimize c^T sigma  s.t.  sigma in box,  F_m(sigma) <= Y + tau I  (Loewner).
//
// The reference backend minimizes the smoothed exact penalty
//     c^T x + K mu log(1 + sum_i exp(w_i / mu)),   w = eig(F(x) - Y - tau I),
// by projected Newton over the free layers, driving mu -> 0 and raising K
// whenever the iterate violates the constraint by more than the smoothing
// accounts for, i.e. the penalty is not yet exact.
// A final bisection toward the (feasible) upper corner restores feasibility
// to tol_feas if rounding left the iterate marginally outside.

#include "convexeit/calibration.hpp"
#include "convexeit/layer_box.hpp"
#include "convexeit/measurement.hpp"
#include "convexeit/sym_matrix.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace convexeit {

struct ConvexProblem {
    MeasurementModel model;
    SymMatrix y;
    SigmaBox box;
    std::vector<double> cost;  // one entry per free layer, all > 0
    double slack = 0.0;        // tau
    double tol_feas = 1e-9;
    double tol_opt = 1e-6;
    int max_iterations = 2000;  // Newton steps over all continuation stages

    void validate() const;
};

enum class Backend { penalty, barrier, levenberg_marquardt };

std::string backend_name(Backend b);

struct SolverOptions {
    Backend backend = Backend::penalty;
    /// Free-layer starting point; defaults to the upper corner.
    std::optional<std::vector<double>> start;
    /// Initial penalty weight; <= 0 picks 10 ||c||_1 (n-1)/lambda when
    /// certificate_lambda is set, else 1e3.
    double penalty_weight = 0.0;
    std::optional<double> certificate_lambda;
    /// Multiplies the initial smoothing width.
    double mu_scale = 1.0;
};

struct SolveReport {
    std::vector<double> sigma;  // full layer vector
    double objective = 0.0;
    double feasibility_residual = 0.0;  // lambda_max(F(sigma) - Y - tau I)
    int iterations = 0;
    Backend backend = Backend::penalty;
    bool converged = false;
    std::string status;
};

nlohmann::json to_json(const SolveReport& report);

class InfeasibleStart : public std::runtime_error {
public:
    InfeasibleStart(double residual, const std::string& what) : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct FeasibleStart {
    std::vector<double> sigma;  // full vector at the upper corner
    double residual = 0.0;
};

/// lambda_max(F(sigma) - Y - tau I) for a full conductivity vector.
double feasibility_residual(const ConvexProblem& problem, std::span<const double> sigma);

/// Upper corner of the box; throws InfeasibleStart when its residual exceeds
/// tol_feas (data deflated below anything the box can explain).
FeasibleStart feasible_start(const ConvexProblem& problem);

SolveReport solve(const ConvexProblem& problem, const SolverOptions& options = {});

/// Uniform cost 1 over the free layers (used when no certificate exists).
std::vector<double> uniform_cost(const SigmaBox& box);

struct NoiseBoundCheck {
    double lhs = 0.0;  // ||sigma_delta - sigma_hat||_{c,inf}
    double rhs = 0.0;  // 2 (n-1) delta / lambda
    bool holds = false;
    SolveReport report;
};

/// Solves with slack = delta and compares the recovery error against the
/// certified bound. problem.y must already hold the noisy data.
NoiseBoundCheck noise_bound_check(ConvexProblem problem, double delta, const CalibrationCertificate& cert,
                                  std::span<const double> sigma_hat, double tol = 1e-8,
                                  const SolverOptions& options = {});

}  // namespace convexeit
