#include "convexeit/properties.hpp"

#include "convexeit/calibration.hpp"
#include "convexeit/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace convexeit {
namespace {

class Sampler {
public:
    Sampler(const SigmaBox& box, std::uint64_t seed) : box_(box), rng_(seed) {}

    std::vector<double> point()
    {
        std::vector<double> sigma = box_.lower();
        for (std::size_t layer : box_.free_layers())
            sigma[layer] = box_.lower()[layer] + (box_.upper()[layer] - box_.lower()[layer]) * unit_(rng_);
        return sigma;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(rng_); }

private:
    const SigmaBox& box_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

JacobianStack jacobian(const PropertyConfig& config, const MeasurementModel& model, const std::vector<double>& sigma)
{
    JacobianStack j = assemble_jacobian(model, sigma);
    if (config.flip_jacobian_sign)
        for (SymMatrix& e : j.entries)
            e *= -1.0;
    return j;
}

// value > tol is a violation.
PropertyResult run(const std::string& name, std::size_t trials, double tol, const std::function<double()>& trial)
{
    PropertyResult result;
    result.name = name;
    result.trials = trials;
    result.worst = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        const double v = trial();
        result.worst = std::max(result.worst, v);
        if (!(v <= tol))
            ++result.violations;
    }
    return result;
}

}  // namespace

std::vector<PropertyResult> run_property_suites(const PropertyConfig& config)
{
    const MeasurementModel model(config.geometry, config.m);
    if (config.box.layers() != model.layers())
        throw std::invalid_argument("property box does not match the geometry");
    const std::size_t n = model.layers();
    const auto& free = config.box.free_layers();
    std::vector<PropertyResult> out;
    std::uint64_t stream = config.seed;

    {
        Sampler s(config.box, stream++);
        out.push_back(run("monotonicity", config.trials, config.tol, [&] {
            std::vector<double> a = s.point();
            std::vector<double> b = s.point();
            for (std::size_t i = 0; i < n; ++i)
                if (a[i] < b[i])
                    std::swap(a[i], b[i]);
            // a >= b  =>  F(a) <= F(b)
            return lambda_max(assemble_F(model, a) - assemble_F(model, b)).value;
        }));
    }
    {
        Sampler s(config.box, stream++);
        out.push_back(run("convexity", config.trials, config.tol, [&] {
            const std::vector<double> a = s.point();
            const std::vector<double> b = s.point();
            const double t = s.uniform(0.0, 1.0);
            std::vector<double> mid(n);
            for (std::size_t i = 0; i < n; ++i)
                mid[i] = t * a[i] + (1.0 - t) * b[i];
            SymMatrix gap = assemble_F(model, mid);
            gap -= t * assemble_F(model, a);
            gap -= (1.0 - t) * assemble_F(model, b);
            return lambda_max(gap).value;
        }));
    }
    {
        Sampler s(config.box, stream++);
        out.push_back(run("linearization_underestimate", config.trials, config.tol, [&] {
            const std::vector<double> sigma = s.point();
            const std::vector<double> tau = s.point();
            std::vector<double> d(n);
            for (std::size_t i = 0; i < n; ++i)
                d[i] = tau[i] - sigma[i];
            // F(tau) - F(sigma) - F'(sigma) d >= 0
            SymMatrix rem = assemble_F(model, tau);
            rem -= assemble_F(model, sigma);
            rem -= jacobian(config, model, sigma).directional(d);
            return -eigh(rem).values.front();
        }));
    }
    {
        Sampler s(config.box, stream++);
        out.push_back(run("jacobian_monotonicity", config.trials, config.tol, [&] {
            const std::vector<double> sigma = s.point();
            std::vector<double> d(n);
            for (double& v : d)
                v = s.uniform(0.0, 1.0);
            // d >= 0  =>  F'(sigma) d <= 0
            return lambda_max(jacobian(config, model, sigma).directional(d)).value;
        }));
    }
    {
        Sampler s(config.box, stream++);
        out.push_back(run("jacobian_order", config.trials, config.tol, [&] {
            const std::vector<double> sigma = s.point();
            std::vector<double> d(n);
            std::vector<double> dt(n);
            for (std::size_t i = 0; i < n; ++i) {
                dt[i] = s.uniform(-1.0, 1.0);
                d[i] = dt[i] + s.uniform(0.0, 1.0);
            }
            // d >= d~  =>  F'd <= F'd~
            const JacobianStack j = jacobian(config, model, sigma);
            return lambda_max(j.directional(d) - j.directional(dt)).value;
        }));
    }
    {
        Sampler s(config.box, stream++);
        out.push_back(run("jacobian_finite_difference", config.trials, 1e-6, [&] {
            const std::vector<double> sigma = s.point();
            std::vector<double> d(n);
            for (double& v : d)
                v = s.uniform(-1.0, 1.0);
            const double h = 1e-5;
            std::vector<double> plus(n);
            std::vector<double> minus(n);
            for (std::size_t i = 0; i < n; ++i) {
                plus[i] = sigma[i] + h * d[i];
                minus[i] = sigma[i] - h * d[i];
            }
            SymMatrix fd = assemble_F(model, plus) - assemble_F(model, minus);
            fd *= 1.0 / (2.0 * h);
            const SymMatrix an = jacobian(config, model, sigma).directional(d);
            const double scale = std::max(an.frobenius_norm(), 1e-300);
            return (an - fd).frobenius_norm() / scale;
        }));
    }
    if (free.size() < 2) {
        PropertyResult skipped;
        skipped.name = "localized_potentials";
        skipped.skipped = true;
        skipped.note = "needs at least two free layers";
        out.push_back(skipped);
    } else {
        Sampler s(config.box, stream++);
        const double C = static_cast<double>(free.size() - 1);
        out.push_back(run("localized_potentials", config.trials, 0.0, [&] {
            const std::vector<double> sigma = s.point();
            const JacobianStack full = jacobian(config, model, sigma);
            JacobianStack j;
            for (std::size_t layer : free)
                j.entries.push_back(full.entries[layer]);
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < free.size(); ++k) {
                // lambda_max(-F'(e_k - C e_k^+)) > 0
                std::vector<double> d = deeper_than(free.size(), k);
                for (double& v : d)
                    v *= C;
                d[k] = -1.0;
                worst = std::min(worst, lambda_max_along(j, d));
            }
            return worst > 0.0 ? -worst : std::abs(worst) + std::numeric_limits<double>::min();
        }));
    }
    return out;
}

}  // namespace convexeit
