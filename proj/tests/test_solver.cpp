#include "convexeit/experiments.hpp"
#include "convexeit/sdp_solver.hpp"
#include "convexeit/symmetric_eigen.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace convexeit;

namespace {

struct Setup {
    MeasurementModel model{Geometry({0.5, 0.25}), 20};
    SigmaBox box{{1.0, 0.5, 0.5}, {1.0, 2.0, 2.0}};
    CalibrationCertificate cert = calibrate(model, box, SampleSpec{3, 0, 0});

    ConvexProblem problem(std::span<const double> truth) const
    {
        return ConvexProblem{model, assemble_F(model, truth), box, cert.c};
    }
};

const Setup& setup()
{
    static const Setup s;
    return s;
}

double max_error(std::span<const double> a, std::span<const double> b)
{
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

}  // namespace

TEST_CASE("problem validation")
{
    const std::vector<double> truth{1.0, 1.0, 1.0};
    ConvexProblem p = setup().problem(truth);
    CHECK_NOTHROW(p.validate());
    p.cost = {1.0};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.cost = {1.0, -1.0};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = setup().problem(truth);
    p.slack = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("upper corner is the monotone feasible start")
{
    const std::vector<double> truth{1.0, 1.0, 1.0};
    const FeasibleStart start = feasible_start(setup().problem(truth));
    CHECK(start.sigma == std::vector<double>{1.0, 2.0, 2.0});
    CHECK(start.residual <= 0.0);
}

TEST_CASE("data below F(upper) is reported infeasible")
{
    const std::vector<double> truth{1.0, 1.0, 1.0};
    ConvexProblem p = setup().problem(truth);
    p.y = assemble_F(p.model, std::vector<double>{1.0, 3.0, 3.0});
    CHECK_THROWS_AS(feasible_start(p), InfeasibleStart);
    CHECK_THROWS_AS(solve(p), InfeasibleStart);
}

TEST_CASE("exact data: the certified cost recovers the truth")
{
    for (const std::vector<double>& truth :
         {std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{1.0, 0.5, 2.0}, std::vector<double>{1.0, 1.7, 0.8}}) {
        CAPTURE(truth[1]);
        CAPTURE(truth[2]);
        const SolveReport r = solve(setup().problem(truth));
        CHECK(r.converged);
        CHECK(r.status == "converged");
        CHECK(r.feasibility_residual <= 1e-9);
        CHECK(max_error(r.sigma, truth) <= 1e-4);
    }
}

TEST_CASE("barrier backend agrees with the penalty backend")
{
    const std::vector<double> truth{1.0, 1.2, 0.9};
    SolverOptions opts;
    opts.backend = Backend::barrier;
    const SolveReport barrier = solve(setup().problem(truth), opts);
    const SolveReport penalty = solve(setup().problem(truth));
    CHECK(barrier.backend == Backend::barrier);
    CHECK(barrier.feasibility_residual <= 1e-9);
    CHECK(max_error(barrier.sigma, truth) <= 1e-4);
    CHECK(max_error(barrier.sigma, penalty.sigma) <= 2e-4);
}

TEST_CASE("the result does not depend on the starting point")
{
    const std::vector<double> truth{1.0, 1.0, 1.0};
    const SolveReport ref = solve(setup().problem(truth));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int k = 0; k < 5; ++k) {
        SolverOptions opts;
        opts.start = std::vector<double>{u(rng), u(rng)};
        const SolveReport r = solve(setup().problem(truth), opts);
        CHECK(max_error(r.sigma, ref.sigma) <= 2e-4);
    }
}

TEST_CASE("uniform cost finds a cheaper feasible point than the truth")
{
    const std::vector<double> truth{1.0, 1.0, 1.0};
    ConvexProblem p = setup().problem(truth);
    p.cost = uniform_cost(p.box);
    const SolveReport r = solve(p);
    CHECK(r.feasibility_residual <= 1e-9);
    CHECK(r.objective <= 2.0);
    CHECK(max_error(r.sigma, truth) > 0.1);
}

TEST_CASE("noisy data respects the certified error bound")
{
    const Setup& s = setup();
    std::mt19937_64 rng(12);
    const double delta = 1e-3;
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<double> truth{1.0, 1.3, 0.7};
        ConvexProblem p = s.problem(truth);
        p.y += random_symmetric_noise(20, delta, rng);
        const NoiseBoundCheck check = noise_bound_check(p, delta, s.cert, truth);
        CHECK(check.report.feasibility_residual <= 1e-9);
        CHECK(check.holds);
        CHECK(check.rhs == doctest::Approx(2.0 * delta / s.cert.lambda));
    }
}

TEST_CASE("SolveReport JSON")
{
    const std::vector<double> truth{1.0, 1.0, 1.0};
    const SolveReport r = solve(setup().problem(truth));
    const nlohmann::json j = to_json(r);
    CHECK(j.at("backend") == "penalty");
    CHECK(j.at("sigma").size() == 3);
    CHECK(j.at("converged").get<bool>() == r.converged);
    CHECK(j.at("objective").get<double>() == r.objective);
}

TEST_CASE("the least-squares backend is not accepted by the convex solver")
{
    const std::vector<double> truth{1.0, 1.0, 1.0};
    SolverOptions opts;
    opts.backend = Backend::levenberg_marquardt;
    CHECK_THROWS_AS(solve(setup().problem(truth), opts), std::invalid_argument);
    CHECK(backend_name(Backend::levenberg_marquardt) == "levenberg_marquardt");
}
