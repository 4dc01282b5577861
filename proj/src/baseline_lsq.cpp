#include "convexeit/baseline_lsq.hpp"

#include "convexeit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace convexeit {
namespace {

// Upper-triangle residual with sqrt(2) on off-diagonal entries, so its
// squared norm is the Frobenius residual.
std::vector<double> residual_vector(const SymMatrix& f, const SymMatrix& y)
{
    const std::size_t m = f.order();
    std::vector<double> r;
    r.reserve(m * (m + 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j)
            r.push_back((f(i, j) - y(i, j)) * (i == j ? 1.0 : std::numbers::sqrt2));
    return r;
}

double squared_norm(const std::vector<double>& v)
{
    double acc = 0.0;
    for (double x : v)
        acc += x * x;
    return acc;
}

// Gaussian elimination with partial pivoting; n is tiny.
bool solve_dense(std::vector<double> a, std::vector<double>& b, std::size_t n)
{
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col]))
                pivot = r;
        if (a[pivot * n + col] == 0.0)
            return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (std::size_t c = col; c < n; ++c)
                a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c)
            acc -= a[r * n + c] * b[c];
        b[r] = acc / a[r * n + r];
    }
    return true;
}

}  // namespace

void LMOptions::validate() const
{
    if (!(initial_damping > 0.0))
        throw std::invalid_argument("LM damping must be positive");
    if (!(damping_up > 1.0) || !(damping_down > 1.0))
        throw std::invalid_argument("LM damping factors must exceed 1");
    if (max_iterations < 0)
        throw std::invalid_argument("LM iteration cap must be non-negative");
    if (!(function_tol >= 0.0) || !(step_tol >= 0.0))
        throw std::invalid_argument("LM stopping tolerances must be non-negative");
}

SolveReport lsq_solve(const MeasurementModel& model, const SigmaBox& box, const SymMatrix& yhat,
                      std::span<const double> sigma0, const LMOptions& options)
{
    options.validate();
    if (yhat.order() != model.measurements())
        throw std::invalid_argument("data matrix order does not match the measurement count");
    for (double s : sigma0)
        if (!(s > 0.0))
            throw std::invalid_argument("LM start must be positive");

    const std::size_t n = box.free_count();
    const std::vector<double> lo = box.free_lower();
    const std::vector<double> hi = box.free_upper();
    std::vector<double> x = box.restrict(sigma0);
    if (options.box == BoxBehavior::clamp)
        for (std::size_t a = 0; a < n; ++a)
            x[a] = std::clamp(x[a], lo[a], hi[a]);

    SolveReport report;
    report.backend = Backend::levenberg_marquardt;
    report.feasibility_residual = std::numeric_limits<double>::quiet_NaN();

    auto evaluate = [&](const std::vector<double>& v, bool with_jacobian, std::vector<double>& r,
                        std::vector<std::vector<double>>& jac) {
        const std::vector<double> sigma = box.expand(v);
        for (double s : sigma)
            if (!(s > 0.0) || !std::isfinite(s))
                return false;
        if (!with_jacobian) {
            r = residual_vector(assemble_F(model, sigma), yhat);
        } else {
            const ForwardEvaluation fe = evaluate_forward(model, sigma);
            r = residual_vector(fe.value, yhat);
            jac.assign(n, {});
            for (std::size_t a = 0; a < n; ++a)
                jac[a] = residual_vector(fe.jacobian.entries[box.free_layers()[a]], SymMatrix(model.measurements()));
        }
        for (double v2 : r)
            if (!std::isfinite(v2))
                return false;
        return true;
    };

    std::vector<double> r;
    std::vector<std::vector<double>> jac;
    if (!evaluate(x, true, r, jac)) {
        report.sigma = box.expand(x);
        report.objective = std::numeric_limits<double>::quiet_NaN();
        report.status = "diverged";
        return report;
    }
    double cost = squared_norm(r);
    double damping = -1.0;
    int it = 0;
    bool converged = false;
    bool diverged = false;
    bool stopped = false;

    while (it < options.max_iterations) {
        std::vector<double> jtj(n * n, 0.0);
        std::vector<double> grad(n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t k = 0; k < r.size(); ++k)
                grad[a] += jac[a][k] * r[k];
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t k = 0; k < r.size(); ++k)
                    jtj[a * n + b] += jac[a][k] * jac[b][k];
        }
        double gmax = 0.0;
        for (double g : grad)
            gmax = std::max(gmax, std::abs(g));
        if (gmax <= options.gradient_tol || cost == 0.0) {
            converged = true;
            break;
        }
        if (damping < 0.0) {
            double dmax = 0.0;
            for (std::size_t a = 0; a < n; ++a)
                dmax = std::max(dmax, jtj[a * n + a]);
            damping = options.initial_damping * (dmax > 0.0 ? dmax : 1.0);
        }

        ++it;
        bool improved = false;
        while (!improved) {
            std::vector<double> sys = jtj;
            for (std::size_t a = 0; a < n; ++a)
                sys[a * n + a] += damping;
            std::vector<double> step(n);
            for (std::size_t a = 0; a < n; ++a)
                step[a] = -grad[a];
            if (!solve_dense(sys, step, n)) {
                damping *= options.damping_up;
                continue;
            }
            std::vector<double> trial(n);
            double step_size = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                trial[a] = x[a] + step[a];
                if (options.box == BoxBehavior::clamp)
                    trial[a] = std::clamp(trial[a], lo[a], hi[a]);
                step_size = std::max(step_size, std::abs(trial[a] - x[a]));
            }
            if (step_size <= 1e-15 * (1.0 + std::abs(x[0]))) {
                converged = true;
                break;
            }
            std::vector<double> rt;
            std::vector<std::vector<double>> unused;
            if (!evaluate(trial, false, rt, unused)) {
                if (options.box == BoxBehavior::none) {
                    x = trial;
                    diverged = true;
                    break;
                }
                damping *= options.damping_up;
                continue;
            }
            const double trial_cost = squared_norm(rt);
            if (trial_cost < cost) {
                double xmax = 0.0;
                for (double v : x)
                    xmax = std::max(xmax, std::abs(v));
                stopped = cost - trial_cost < options.function_tol * cost ||
                          step_size < options.step_tol * (1.0 + xmax);
                x = std::move(trial);
                cost = trial_cost;
                damping /= options.damping_down;
                improved = true;
            } else {
                damping *= options.damping_up;
                if (damping > 1e300) {
                    converged = true;
                    break;
                }
            }
        }
        if (!improved || stopped)
            break;
        evaluate(x, true, r, jac);
    }

    report.sigma = box.expand(x);
    report.iterations = it;
    report.objective = diverged ? std::numeric_limits<double>::quiet_NaN() : cost;
    report.converged = converged && !diverged;
    report.status = diverged ? "diverged" : converged ? "converged" : stopped ? "stopped" : "max_iterations";
    return report;
}

}  // namespace convexeit
