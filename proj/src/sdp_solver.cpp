#include "convexeit/sdp_solver.hpp"

#include "convexeit/symmetric_eigen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace convexeit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves (H + shift I) d = rhs by Cholesky, raising the shift until the
// factorization succeeds. H is n x n row-major.
std::vector<double> solve_spd(std::vector<double> h, std::size_t n, std::vector<double> rhs)
{
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        diag_scale = std::max(diag_scale, std::abs(h[i * n + i]));
    if (diag_scale == 0.0)
        diag_scale = 1.0;

    for (double shift = 0.0;; shift = shift == 0.0 ? 1e-12 * diag_scale : 10.0 * shift) {
        std::vector<double> l(n * n, 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double acc = h[i * n + j] + (i == j ? shift : 0.0);
                for (std::size_t k = 0; k < j; ++k)
                    acc -= l[i * n + k] * l[j * n + k];
                if (i == j) {
                    if (!(acc > 0.0)) {
                        ok = false;
                        break;
                    }
                    l[i * n + i] = std::sqrt(acc);
                } else {
                    l[i * n + j] = acc / l[j * n + j];
                }
            }
        }
        if (!ok) {
            if (shift > 1e6 * diag_scale)
                throw std::runtime_error("Newton system could not be regularized");
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = rhs[i];
            for (std::size_t k = 0; k < i; ++k)
                acc -= l[i * n + k] * rhs[k];
            rhs[i] = acc / l[i * n + i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double acc = rhs[i];
            for (std::size_t k = i + 1; k < n; ++k)
                acc -= l[k * n + i] * rhs[k];
            rhs[i] = acc / l[i * n + i];
        }
        return rhs;
    }
}

double dot(std::span<const double> a, std::span<const double> b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(std::span<const double> v)
{
    double out = 0.0;
    for (double x : v)
        out = std::max(out, std::abs(x));
    return out;
}

struct Evaluation {
    double value = kInf;
    std::vector<double> grad;
    std::vector<double> hess;
    bool finite = false;
};

// Shared pieces: the constraint matrix G = F(sigma) - Y - tau I, its spectrum,
// and eigenbasis projections of the free-layer Jacobian and second derivatives.
class ConstraintModel {
public:
    explicit ConstraintModel(const ConvexProblem& problem) : p_(problem), n_(problem.box.free_count()) {}

    std::size_t dim() const noexcept { return n_; }
    std::vector<double> full(std::span<const double> x) const { return p_.box.expand(x); }

    SymMatrix constraint(std::span<const double> x) const
    {
        SymMatrix g = assemble_F(p_.model, full(x));
        g -= p_.y;
        g.add_identity(-p_.slack);
        return g;
    }

    struct Spectral {
        EigenDecomposition eig;
        // proj[a][i * m + k] = v_i^T J_a v_k
        std::vector<std::vector<double>> proj;
        // second[a * n + b][i] = v_i^T (d^2 F / dx_a dx_b) v_i
        std::vector<std::vector<double>> second;
    };

    Spectral spectral(std::span<const double> x, int level) const
    {
        Spectral s;
        const std::vector<double> sigma = full(x);
        if (level == 0) {
            s.eig = eigh(constraint(x));
            return s;
        }
        ForwardEvaluation fe = evaluate_forward(p_.model, sigma);
        SymMatrix g = fe.value;
        g -= p_.y;
        g.add_identity(-p_.slack);
        s.eig = eigh(g);

        const std::size_t m = g.order();
        const auto& free = p_.box.free_layers();
        s.proj.resize(n_);
        for (std::size_t a = 0; a < n_; ++a)
            s.proj[a] = project(fe.jacobian.entries[free[a]], s.eig, m);

        if (level >= 2) {
            // Second derivatives of F by central differences of the analytic
            // Jacobian; F is smooth on the scale of sigma itself.
            s.second.assign(n_ * n_, std::vector<double>(m, 0.0));
            for (std::size_t b = 0; b < n_; ++b) {
                const double h = 1e-5 * std::max(1.0, std::abs(x[b]));
                std::vector<double> xp(x.begin(), x.end());
                std::vector<double> xm(x.begin(), x.end());
                xp[b] += h;
                xm[b] -= h;
                const JacobianStack jp = free_jacobian(p_.model, p_.box, full(xp));
                const JacobianStack jm = free_jacobian(p_.model, p_.box, full(xm));
                for (std::size_t a = 0; a < n_; ++a) {
                    SymMatrix dab = jp.entries[a] - jm.entries[a];
                    dab *= 1.0 / (2.0 * h);
                    for (std::size_t i = 0; i < m; ++i)
                        s.second[a * n_ + b][i] = dab.quadratic_form(s.eig.vectors[i]);
                }
            }
            for (std::size_t a = 0; a < n_; ++a)
                for (std::size_t b = 0; b < a; ++b)
                    for (std::size_t i = 0; i < m; ++i) {
                        const double avg = 0.5 * (s.second[a * n_ + b][i] + s.second[b * n_ + a][i]);
                        s.second[a * n_ + b][i] = avg;
                        s.second[b * n_ + a][i] = avg;
                    }
        }
        return s;
    }

private:
    static std::vector<double> project(const SymMatrix& j, const EigenDecomposition& eig, std::size_t m)
    {
        std::vector<double> out(m * m);
        std::vector<std::vector<double>> jv(m, std::vector<double>(m));
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t r = 0; r < m; ++r)
                jv[k][r] = dot(j.row(r), eig.vectors[k]);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k)
                out[i * m + k] = dot(eig.vectors[i], jv[k]);
        return out;
    }

    const ConvexProblem& p_;
    std::size_t n_;
};

// Smoothed exact penalty c^T x + K mu log(1 + sum exp(w_i / mu)).
class PenaltyObjective {
public:
    PenaltyObjective(const ConvexProblem& problem, const ConstraintModel& model) : p_(problem), model_(model) {}

    Evaluation evaluate(std::span<const double> x, double mu, double K, int level) const
    {
        const std::size_t n = model_.dim();
        const ConstraintModel::Spectral s = model_.spectral(x, level);
        const auto& w = s.eig.values;
        const std::size_t m = w.size();

        const double top = std::max(0.0, w.back());
        double z = std::exp(-top / mu);
        std::vector<double> e(m);
        for (std::size_t i = 0; i < m; ++i) {
            e[i] = std::exp((w[i] - top) / mu);
            z += e[i];
        }
        Evaluation out;
        out.value = dot(p_.cost, x) + K * (top + mu * std::log(z));
        out.finite = std::isfinite(out.value);
        std::vector<double> prob(m);
        for (std::size_t i = 0; i < m; ++i)
            prob[i] = e[i] / z;
        if (level == 0)
            return out;

        std::vector<double> mean(n, 0.0);
        out.grad.assign(n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t i = 0; i < m; ++i)
                mean[a] += prob[i] * s.proj[a][i * m + i];
            out.grad[a] = p_.cost[a] + K * mean[a];
        }
        if (level == 1)
            return out;

        // Divided differences of the softmax weights; equal eigenvalues take
        // the limit p/mu.
        std::vector<double> theta(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                if (i == k)
                    continue;
                const std::size_t hi = w[i] >= w[k] ? i : k;
                const std::size_t lo = hi == i ? k : i;
                const double gap = w[hi] - w[lo];
                if (gap >= mu)
                    theta[i * m + k] = (prob[hi] - prob[lo]) / gap;
                else if (gap > 0.0)
                    theta[i * m + k] = prob[lo] * std::expm1(gap / mu) / gap;
                else
                    theta[i * m + k] = prob[i] / mu;
            }
        }

        out.hess.assign(n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                double curvature = 0.0;
                double cov = 0.0;
                double mixing = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    curvature += prob[i] * s.second[a * n + b][i];
                    cov += prob[i] * s.proj[a][i * m + i] * s.proj[b][i * m + i];
                    for (std::size_t k = 0; k < m; ++k)
                        if (k != i)
                            mixing += theta[i * m + k] * s.proj[a][i * m + k] * s.proj[b][i * m + k];
                }
                cov = (cov - mean[a] * mean[b]) / mu;
                const double hab = K * (curvature + cov + mixing);
                out.hess[a * n + b] = hab;
                out.hess[b * n + a] = hab;
            }
        }
        return out;
    }

private:
    const ConvexProblem& p_;
    const ConstraintModel& model_;
};

// c^T x - nu (log det(Y + tau I - F(x)) + sum log(x - lo) + log(hi - x)).
class BarrierObjective {
public:
    BarrierObjective(const ConvexProblem& problem, const ConstraintModel& model)
        : p_(problem), model_(model), lo_(problem.box.free_lower()), hi_(problem.box.free_upper())
    {}

    Evaluation evaluate(std::span<const double> x, double nu, int level) const
    {
        const std::size_t n = model_.dim();
        Evaluation out;
        for (std::size_t a = 0; a < n; ++a)
            if (!(x[a] > lo_[a] && x[a] < hi_[a]))
                return out;
        const ConstraintModel::Spectral s = model_.spectral(x, level);
        const std::size_t m = s.eig.values.size();
        // slack eigenvalues of S = -G
        std::vector<double> slack(m);
        for (std::size_t i = 0; i < m; ++i) {
            slack[i] = -s.eig.values[i];
            if (!(slack[i] > 0.0))
                return out;
        }
        double logdet = 0.0;
        for (double v : slack)
            logdet += std::log(v);
        double box_log = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            box_log += std::log(x[a] - lo_[a]) + std::log(hi_[a] - x[a]);
        out.value = dot(p_.cost, x) - nu * (logdet + box_log);
        out.finite = std::isfinite(out.value);
        if (level == 0)
            return out;

        out.grad.assign(n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            double tr = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                tr += s.proj[a][i * m + i] / slack[i];
            out.grad[a] = p_.cost[a] + nu * tr - nu * (1.0 / (x[a] - lo_[a]) - 1.0 / (hi_[a] - x[a]));
        }
        if (level == 1)
            return out;

        out.hess.assign(n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    acc += s.second[a * n + b][i] / slack[i];
                    for (std::size_t k = 0; k < m; ++k)
                        acc += s.proj[a][i * m + k] * s.proj[b][i * m + k] / (slack[i] * slack[k]);
                }
                double hab = nu * acc;
                if (a == b) {
                    const double dl = x[a] - lo_[a];
                    const double du = hi_[a] - x[a];
                    hab += nu * (1.0 / (dl * dl) + 1.0 / (du * du));
                }
                out.hess[a * n + b] = hab;
                out.hess[b * n + a] = hab;
            }
        }
        return out;
    }

private:
    const ConvexProblem& p_;
    const ConstraintModel& model_;
    std::vector<double> lo_;
    std::vector<double> hi_;
};

struct NewtonResult {
    int iterations = 0;
    bool converged = false;
};

// Projected Newton with an active set on the box bounds and Armijo
// backtracking along the projected path. eval(x, level) must return +inf
// values outside the domain.
template <class Eval>
NewtonResult projected_newton(std::vector<double>& x, std::span<const double> lo, std::span<const double> hi,
                              Eval&& eval, int max_iterations, bool clamp)
{
    const std::size_t n = x.size();
    NewtonResult result;
    std::vector<double> width(n);
    for (std::size_t a = 0; a < n; ++a)
        width[a] = std::isfinite(hi[a] - lo[a]) && hi[a] > lo[a] ? hi[a] - lo[a] : 1.0 + std::abs(x[a]);
    auto project = [&](std::vector<double> v) {
        if (clamp)
            for (std::size_t a = 0; a < n; ++a)
                v[a] = std::clamp(v[a], lo[a], hi[a]);
        return v;
    };

    while (result.iterations < max_iterations) {
        ++result.iterations;
        const Evaluation e = eval(x, 2);

        std::vector<char> active(n, 0);
        std::vector<std::size_t> inactive;
        for (std::size_t a = 0; a < n; ++a) {
            active[a] = clamp && ((x[a] <= lo[a] && e.grad[a] > 0.0) || (x[a] >= hi[a] && e.grad[a] < 0.0));
            if (!active[a])
                inactive.push_back(a);
        }
        if (inactive.empty()) {
            result.converged = true;
            break;
        }

        const std::size_t k = inactive.size();
        std::vector<double> h(k * k);
        std::vector<double> rhs(k);
        for (std::size_t r = 0; r < k; ++r) {
            rhs[r] = -e.grad[inactive[r]];
            for (std::size_t c = 0; c < k; ++c)
                h[r * k + c] = e.hess[inactive[r] * n + inactive[c]];
        }
        const std::vector<double> step = solve_spd(std::move(h), k, std::move(rhs));
        std::vector<double> newton(n, 0.0);
        for (std::size_t r = 0; r < k; ++r)
            newton[inactive[r]] = step[r];
        std::vector<double> descent(n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            descent[a] = active[a] ? 0.0 : -e.grad[a];

        // A flat smoothed penalty far from the constraint gives a near-singular
        // Hessian; keep every trial step within one box width per coordinate.
        auto cap = [&](std::vector<double>& d) {
            double ratio = 1.0;
            for (std::size_t a = 0; a < n; ++a)
                if (std::abs(d[a]) > 0.0)
                    ratio = std::min(ratio, width[a] / std::abs(d[a]));
            for (double& v : d)
                v *= ratio;
        };
        cap(newton);
        cap(descent);

        auto line_search = [&](const std::vector<double>& d, std::vector<double>& trial, double& trial_value) {
            if (!(dot(d, e.grad) < 0.0))
                return false;
            for (double t = 1.0; t > 1e-20; t *= 0.5) {
                std::vector<double> raw(n);
                for (std::size_t a = 0; a < n; ++a)
                    raw[a] = x[a] + t * d[a];
                trial = project(std::move(raw));
                std::vector<double> moved(n);
                for (std::size_t a = 0; a < n; ++a)
                    moved[a] = trial[a] - x[a];
                if (max_abs(moved) == 0.0)
                    return false;
                trial_value = eval(trial, 0).value;
                if (trial_value <= e.value + 1e-4 * dot(e.grad, moved))
                    return true;
            }
            return false;
        };

        std::vector<double> trial;
        double trial_value = kInf;
        if (!line_search(newton, trial, trial_value) && !line_search(descent, trial, trial_value)) {
            // No decrease representable in floating point: stationary to
            // working precision.
            result.converged = true;
            break;
        }
        double change = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            change = std::max(change, std::abs(trial[a] - x[a]));
        const double decrease = e.value - trial_value;
        x = std::move(trial);
        if (change <= 1e-14 * (1.0 + max_abs(x)) || decrease <= 1e-16 * (1.0 + std::abs(e.value))) {
            result.converged = true;
            break;
        }
    }
    return result;
}

double data_scale(const ConvexProblem& problem)
{
    const SymMatrix f = assemble_F(problem.model, problem.box.upper());
    double scale = std::max(max_abs(problem.y.values()), max_abs(f.values()));
    return scale > 0.0 ? scale : 1.0;
}

SolveReport finish(const ConvexProblem& problem, const ConstraintModel& model, std::vector<double> x, int iterations,
                   bool converged, Backend backend)
{
    const std::vector<double> upper = problem.box.free_upper();
    auto residual_at = [&](std::span<const double> v) { return lambda_max(model.constraint(v)).value; };

    double residual = residual_at(x);
    if (residual > problem.tol_feas) {
        // Convexity of the residual along [x, upper] and feasibility of the
        // upper corner make bisection well defined.
        double feasible_t = 1.0;
        double infeasible_t = 0.0;
        for (int it = 0; it < 200 && feasible_t - infeasible_t > 1e-17; ++it) {
            const double t = 0.5 * (feasible_t + infeasible_t);
            std::vector<double> v(x.size());
            for (std::size_t a = 0; a < x.size(); ++a)
                v[a] = x[a] + t * (upper[a] - x[a]);
            if (residual_at(v) <= problem.tol_feas)
                feasible_t = t;
            else
                infeasible_t = t;
        }
        for (std::size_t a = 0; a < x.size(); ++a)
            x[a] = feasible_t == 1.0 ? upper[a] : x[a] + feasible_t * (upper[a] - x[a]);
        residual = residual_at(x);
    }

    SolveReport report;
    report.sigma = problem.box.expand(x);
    report.objective = dot(problem.cost, x);
    report.feasibility_residual = residual;
    report.iterations = iterations;
    report.backend = backend;
    report.converged = converged && residual <= problem.tol_feas;
    report.status = report.converged ? "converged" : (iterations >= problem.max_iterations ? "max_iterations" : "stalled");
    return report;
}

SolveReport solve_penalty(const ConvexProblem& problem, const SolverOptions& options)
{
    const ConstraintModel model(problem);
    const PenaltyObjective objective(problem, model);
    const std::vector<double> lo = problem.box.free_lower();
    const std::vector<double> hi = problem.box.free_upper();
    const std::size_t n = model.dim();

    std::vector<double> x = options.start.value_or(hi);
    if (x.size() != n)
        throw std::invalid_argument("start point must have one entry per free layer");
    for (std::size_t a = 0; a < n; ++a)
        x[a] = std::clamp(x[a], lo[a], hi[a]);

    const double scale = data_scale(problem);
    double mu = 1e-2 * scale * options.mu_scale;
    const double mu_min = 1e-12 * scale;
    double K = options.penalty_weight;
    if (!(K > 0.0)) {
        const double c1 = std::accumulate(problem.cost.begin(), problem.cost.end(), 0.0);
        if (options.certificate_lambda && *options.certificate_lambda > 0.0 && n > 1)
            K = 10.0 * c1 * static_cast<double>(n - 1) / *options.certificate_lambda;
        else
            K = 1e3;
    }

    const double log_terms = std::log(static_cast<double>(problem.model.measurements()) + 1.0);
    int iterations = 0;
    bool converged = false;
    while (iterations < problem.max_iterations) {
        auto eval = [&](std::span<const double> v, int level) { return objective.evaluate(v, mu, K, level); };
        const NewtonResult r = projected_newton(x, lo, hi, eval, problem.max_iterations - iterations, true);
        iterations += r.iterations;
        converged = r.converged;
        // With an exact weight the smoothed minimizer violates the constraint
        // by O(mu log(m + 1)) at most; anything larger means K is too small.
        const double violation = lambda_max(model.constraint(x)).value;
        if (violation > std::max(problem.tol_feas, 2.0 * mu * log_terms) && K < 1e15) {
            K *= 10.0;
            continue;
        }
        if (mu <= mu_min)
            break;
        mu = std::max(mu_min, 0.1 * mu);
    }
    return finish(problem, model, std::move(x), iterations, converged, Backend::penalty);
}

SolveReport solve_barrier(const ConvexProblem& problem, const SolverOptions& options)
{
    const ConstraintModel model(problem);
    const BarrierObjective objective(problem, model);
    const std::vector<double> lo = problem.box.free_lower();
    const std::vector<double> hi = problem.box.free_upper();
    const std::size_t n = model.dim();

    auto strictly_feasible = [&](const std::vector<double>& v) {
        for (std::size_t a = 0; a < n; ++a)
            if (!(v[a] > lo[a] && v[a] < hi[a]))
                return false;
        return lambda_max(model.constraint(v)).value < 0.0;
    };

    std::vector<double> x;
    if (options.start && strictly_feasible(*options.start)) {
        x = *options.start;
    } else {
        for (double theta : {1e-3, 1e-2, 1e-1, 0.5}) {
            std::vector<double> v(n);
            for (std::size_t a = 0; a < n; ++a)
                v[a] = hi[a] - theta * (hi[a] - lo[a]);
            if (strictly_feasible(v)) {
                x = std::move(v);
                break;
            }
        }
    }
    if (x.empty())
        throw InfeasibleStart(lambda_max(model.constraint(hi)).value,
                              "barrier backend needs a strictly feasible interior point");

    const std::size_t m = problem.model.measurements();
    const double barrier_count = static_cast<double>(m + 2 * n);
    double nu = 1e-2 * (1.0 + std::abs(dot(problem.cost, x))) / barrier_count;
    int iterations = 0;
    bool converged = false;
    while (iterations < problem.max_iterations) {
        auto eval = [&](std::span<const double> v, int level) { return objective.evaluate(v, nu, level); };
        const NewtonResult r = projected_newton(x, lo, hi, eval, problem.max_iterations - iterations, false);
        iterations += r.iterations;
        converged = r.converged;
        if (nu * barrier_count <= 1e-3 * problem.tol_opt * (1.0 + std::abs(dot(problem.cost, x))))
            break;
        nu *= 0.1;
    }
    return finish(problem, model, std::move(x), iterations, converged, Backend::barrier);
}

}  // namespace

std::string backend_name(Backend b)
{
    switch (b) {
    case Backend::penalty: return "penalty";
    case Backend::barrier: return "barrier";
    case Backend::levenberg_marquardt: return "levenberg_marquardt";
    }
    return "unknown";
}

void ConvexProblem::validate() const
{
    if (box.layers() != model.layers())
        throw std::invalid_argument("box and geometry disagree on the layer count");
    if (y.order() != model.measurements())
        throw std::invalid_argument("data matrix order does not match the measurement count");
    if (cost.size() != box.free_count())
        throw std::invalid_argument("cost vector must have one entry per free layer");
    for (double c : cost)
        if (!(c > 0.0))
            throw std::invalid_argument("cost entries must be positive");
    if (!(slack >= 0.0))
        throw std::invalid_argument("slack must be non-negative");
    if (box.free_count() == 0)
        throw std::invalid_argument("every layer is pinned; nothing to solve");
}

double feasibility_residual(const ConvexProblem& problem, std::span<const double> sigma)
{
    SymMatrix g = assemble_F(problem.model, sigma);
    g -= problem.y;
    g.add_identity(-problem.slack);
    return lambda_max(g).value;
}

FeasibleStart feasible_start(const ConvexProblem& problem)
{
    problem.validate();
    FeasibleStart start{problem.box.upper(), 0.0};
    start.residual = feasibility_residual(problem, start.sigma);
    if (start.residual > problem.tol_feas)
        throw InfeasibleStart(start.residual,
                              fmt::format("upper corner infeasible (residual {:.3e}): data below F(upper)", start.residual));
    return start;
}

SolveReport solve(const ConvexProblem& problem, const SolverOptions& options)
{
    feasible_start(problem);
    switch (options.backend) {
    case Backend::penalty: return solve_penalty(problem, options);
    case Backend::barrier: return solve_barrier(problem, options);
    default: throw std::invalid_argument("solve: backend is not a convex solver");
    }
}

std::vector<double> uniform_cost(const SigmaBox& box) { return std::vector<double>(box.free_count(), 1.0); }

NoiseBoundCheck noise_bound_check(ConvexProblem problem, double delta, const CalibrationCertificate& cert,
                                  std::span<const double> sigma_hat, double tol, const SolverOptions& options)
{
    if (cert.c.size() != problem.box.free_count())
        throw std::invalid_argument("certificate does not match the free layers of the problem");
    problem.slack = delta;
    problem.cost = cert.c;
    SolverOptions opts = options;
    if (!opts.certificate_lambda)
        opts.certificate_lambda = cert.lambda;

    NoiseBoundCheck out;
    out.report = solve(problem, opts);
    const std::vector<double> found = problem.box.restrict(out.report.sigma);
    const std::vector<double> truth = problem.box.restrict(sigma_hat);
    std::vector<double> diff(found.size());
    for (std::size_t a = 0; a < diff.size(); ++a)
        diff[a] = found[a] - truth[a];
    out.lhs = weighted_norm(cert, diff);
    out.rhs = 2.0 * static_cast<double>(cert.free_count() - 1) * delta / cert.lambda;
    out.holds = out.lhs <= out.rhs + tol;
    return out;
}

nlohmann::json to_json(const SolveReport& report)
{
    return {
        {"sigma", report.sigma},
        {"objective", report.objective},
        {"feasibility_residual", report.feasibility_residual},
        {"iterations", report.iterations},
        {"backend", backend_name(report.backend)},
        {"converged", report.converged},
        {"status", report.status},
    };
}

}  // namespace convexeit
