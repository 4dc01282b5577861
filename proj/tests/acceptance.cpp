// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Informational lines start with "  info".

#include "convexeit/annulus_forward.hpp"
#include "convexeit/calibration.hpp"
#include "convexeit/experiments.hpp"
#include "convexeit/parallel.hpp"
#include "convexeit/properties.hpp"
#include "convexeit/sdp_solver.hpp"
#include "convexeit/symmetric_eigen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

using namespace convexeit;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void verdict(int id, bool pass, const std::string& what)
{
    fmt::print("criterion {}: {} {}\n", id, pass ? "PASS" : "FAIL", what);
    std::fflush(stdout);
    failures += !pass;
}

void info(const std::string& what) { fmt::print("  info {}\n", what); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double three_ring_closed_form(double r1, double r2, double s1, double s2, int j)
{
    const double q = s2 / s1;
    const double a = 1.0 + q;
    const double b = (1.0 - q) * std::pow(r2, 2 * j);
    const double c = a + b * std::pow(r1, -2 * j) + s1 * (a - b * std::pow(r1, -2 * j));
    const double d = a * std::pow(r1, 2 * j) + b - s1 * (a * std::pow(r1, 2 * j) - b);
    return (c + d) / (j * (c - d));
}

const std::vector<double> kTruth{1.0, 1.0, 1.0};

MeasurementModel three_ring(std::size_t m) { return MeasurementModel(Geometry({0.5, 0.25}), m); }
SigmaBox pinned_box() { return SigmaBox({1.0, 0.5, 0.5}, {1.0, 2.0, 2.0}); }

void forward_exactness()
{
    const auto t0 = Clock::now();
    double worst_homogeneous = 0.0;
    for (const std::vector<double>& radii :
         {std::vector<double>{}, std::vector<double>{0.5}, std::vector<double>{0.5, 0.25},
          std::vector<double>{0.9, 0.7, 0.4, 0.2}}) {
        const Geometry g(radii);
        for (double s : {0.5, 1.0, 2.0}) {
            const std::vector<double> sigma(g.layers(), s);
            for (int j = 1; j <= 50; ++j)
                worst_homogeneous = std::max(worst_homogeneous, rel(ntd_eigenvalue(g, sigma, j), 1.0 / (j * s)));
        }
    }
    const Geometry g({0.5, 0.25});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    double worst_closed_form = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double s1 = u(rng), s2 = u(rng);
        const std::vector<double> sigma{1.0, s1, s2};
        for (int j = 1; j <= 10; ++j)
            worst_closed_form =
                std::max(worst_closed_form, rel(ntd_eigenvalue(g, sigma, j), three_ring_closed_form(0.5, 0.25, s1, s2, j)));
    }
    const double elapsed = seconds_since(t0);
    verdict(1, worst_homogeneous <= 1e-12 && worst_closed_form <= 1e-12 && elapsed < 1.0,
            fmt::format("forward exactness: homogeneous rel err {:.2e}, closed-form rel err {:.2e} (<= 1e-12), {:.3f} s",
                        worst_homogeneous, worst_closed_form, elapsed));
}

void jacobian_correctness()
{
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int config = 0; config < 50; ++config) {
        const std::size_t n = 1 + rng() % 4;
        const std::size_t m = 1 + rng() % 40;
        std::vector<double> radii(n - 1);
        std::uniform_real_distribution<double> ur(0.05, 0.95);
        for (double& r : radii)
            r = ur(rng);
        std::sort(radii.rbegin(), radii.rend());
        bool distinct = std::adjacent_find(radii.begin(), radii.end()) == radii.end();
        if (!distinct) {
            --config;
            continue;
        }
        const MeasurementModel model(Geometry(radii), m);
        std::uniform_real_distribution<double> us(0.2, 5.0);
        std::vector<double> sigma(n);
        for (double& s : sigma)
            s = us(rng);
        const JacobianStack jac = assemble_jacobian(model, sigma);
        for (std::size_t i = 0; i < n; ++i) {
            const double h = 1e-5;
            auto plus = sigma, minus = sigma;
            plus[i] += h;
            minus[i] -= h;
            SymMatrix fd = assemble_F(model, plus) - assemble_F(model, minus);
            fd *= 1.0 / (2.0 * h);
            const double err = (fd - jac.entries[i]).frobenius_norm() / jac.entries[i].frobenius_norm();
            worst = std::max(worst, err);
        }
    }
    verdict(2, worst <= 1e-6,
            fmt::format("Jacobian vs central differences (h = 1e-5), 50 configs n <= 4, m <= 40: worst rel err {:.2e}",
                        worst));
}

void loewner_suites()
{
    const auto t0 = Clock::now();
    PropertyConfig pc{Geometry({0.75, 0.5, 0.25}), 20, SigmaBox::uniform(4, 0.5, 2.0)};
    pc.trials = 1000;
    pc.seed = 3;
    pc.tol = 1e-10;
    const auto results = run_property_suites(pc);
    bool pass = true;
    std::string detail;
    for (const char* name : {"monotonicity", "convexity", "linearization_underestimate", "jacobian_monotonicity"}) {
        const auto it = std::find_if(results.begin(), results.end(), [&](const auto& r) { return r.name == name; });
        const bool ok = it != results.end() && it->passed() && it->trials == 1000;
        pass = pass && ok;
        detail += fmt::format(" {}={}", name, it == results.end() ? -1 : static_cast<long>(it->violations));
    }
    const double elapsed = seconds_since(t0);
    verdict(3, pass && elapsed < 30.0,
            fmt::format("Loewner suites, 1000 trials each, violations:{} ({:.1f} s)", detail, elapsed));
    for (const auto& r : results)
        info(fmt::format("suite {} trials {} violations {} worst {:.3e}{}", r.name, r.trials, r.violations, r.worst,
                         r.skipped ? " skipped" : ""));
}

void headline_recovery()
{
    const MeasurementModel model = three_ring(20);
    const SigmaBox box = pinned_box();
    const CalibrationCertificate cert = calibrate(model, box, SampleSpec{3, 0, 0});
    const ConvexProblem problem{model, assemble_F(model, kTruth), box, cert.c};
    SolverOptions base;
    base.certificate_lambda = cert.lambda;
    const SolveReport ref = solve(problem, base);
    double error = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        error = std::max(error, std::abs(ref.sigma[i] - kTruth[i]));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> log_scale(-1.0, 1.0);
    double drift = 0.0;
    for (int rerun = 0; rerun < 10; ++rerun) {
        SolverOptions opts = base;
        opts.mu_scale = std::pow(10.0, log_scale(rng));
        opts.penalty_weight = 0.0;
        const SolveReport r = solve(problem, opts);
        for (std::size_t i = 0; i < 3; ++i)
            drift = std::max(drift, std::abs(r.sigma[i] - ref.sigma[i]));
    }
    verdict(4, error <= 1e-4 && drift <= 2e-4 && ref.feasibility_residual <= problem.tol_feas,
            fmt::format("recovery of (1,1) at m = 20 from the upper corner: error {:.2e} (<= 1e-4), drift over 10 "
                        "randomized continuation schedules {:.2e} (<= 2e-4)",
                        error, drift));

    try {
        const MeasurementModel m6 = three_ring(6);
        const CalibrationCertificate c6 = calibrate(m6, box, SampleSpec{3, 0, 0});
        const SolveReport r6 = solve(ConvexProblem{m6, assemble_F(m6, kTruth), box, c6.c});
        double e6 = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            e6 = std::max(e6, std::abs(r6.sigma[i] - kTruth[i]));
        info(fmt::format("m = 6 with its own certificate (lambda {:.3e}): error {:.2e} ({})", c6.lambda, e6,
                         e6 <= 1e-4 ? "also recovers" : "does not recover"));
    } catch (const NoDefiniteness& e) {
        info(fmt::format("m = 6: calibration failed ({})", e.what()));
    }
}

void local_minima_pathology()
{
    const auto t0 = Clock::now();
    ExperimentConfig c;
    c.landscape = GridSpec{0.1, 3.0, 300};
    c.basins = GridSpec{0.1, 3.0, 60};
    const LandscapeResult land = cmd_landscape(c, false);
    const BasinsResult basins = cmd_basins(c, false);
    const std::size_t good = static_cast<std::size_t>(
        std::count_if(basins.error.begin(), basins.error.end(), [](double e) { return e <= 1e-6; }));
    const std::size_t bad = static_cast<std::size_t>(
        std::count_if(basins.error.begin(), basins.error.end(), [](double e) { return e > 0.1; }));
    const double elapsed = seconds_since(t0);
    verdict(5, land.minima_above_threshold >= 2 && good > 0 && bad > 0 && elapsed < 120.0,
            fmt::format("landscape 300x300: {} strict grid-local minima above 1e-4 (>= 2); basins 60x60: {} starts "
                        "with error <= 1e-6, {} with error > 0.1 ({:.1f} s)",
                        land.minima_above_threshold, good, bad, elapsed));
    info(fmt::format("landscape has {} strict grid-local minima in total", land.minima.size()));
}

CalibrationCertificate noise_certificate()
{
    return calibrate(three_ring(20), pinned_box(), SampleSpec{3, 0, 0});
}

void noise_bound(const CalibrationCertificate& cert)
{
    const MeasurementModel model = three_ring(20);
    const auto samples = sample_box(cert.box, cert.sample_spec);
    std::size_t violations = 0, total = 0;
    double worst_ratio = 0.0;
    std::string per_level;
    for (double delta : {1e-4, 1e-3, 1e-2}) {
        const auto checks = parallel_map(100, [&](std::size_t trial) {
            std::mt19937_64 rng(1000003 * static_cast<std::uint64_t>(std::llround(delta * 1e4)) + trial);
            const std::vector<double>& truth = samples[rng() % samples.size()];
            ConvexProblem p{model, assemble_F(model, truth), cert.box, cert.c};
            p.y += random_symmetric_noise(model.measurements(), delta, rng);
            return noise_bound_check(p, delta, cert, truth, 1e-8);
        });
        std::size_t level_violations = 0;
        double level_worst = 0.0;
        for (const NoiseBoundCheck& c : checks) {
            level_violations += !c.holds;
            level_worst = std::max(level_worst, c.lhs);
            worst_ratio = std::max(worst_ratio, c.lhs / c.rhs);
        }
        violations += level_violations;
        total += checks.size();
        per_level += fmt::format(" delta={:.0e}: max lhs {:.3e} vs bound {:.3e} ({} violations);", delta, level_worst,
                                 checks.front().rhs, level_violations);
    }
    verdict(6, violations == 0,
            fmt::format("noise bound on calibration samples, {} trials:{} worst lhs/bound {:.3e}", total, per_level,
                        worst_ratio));

    // Off-sample truths: reported, not gated.
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::size_t off_violations = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const std::vector<double> truth{1.0, u(rng), u(rng)};
        ConvexProblem p{model, assemble_F(model, truth), cert.box, cert.c};
        p.y += random_symmetric_noise(model.measurements(), 1e-3, rng);
        off_violations += !noise_bound_check(p, 1e-3, cert, truth, 1e-8).holds;
    }
    info(fmt::format("off-sample truths at delta = 1e-3: {} of 30 exceed the bound", off_violations));
}

void lipschitz(const CalibrationCertificate& cert)
{
    const MeasurementModel model = three_ring(20);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const double factor = static_cast<double>(cert.free_count() - 1) / cert.lambda;
    std::size_t violations = 0;
    double worst_ratio = 0.0;
    for (int pair = 0; pair < 200; ++pair) {
        const std::vector<double> a{1.0, u(rng), u(rng)};
        const std::vector<double> b{1.0, u(rng), u(rng)};
        const std::vector<double> diff{a[1] - b[1], a[2] - b[2]};
        const double lhs = weighted_norm(cert, diff);
        const double rhs = factor * spectral_norm(assemble_F(model, a) - assemble_F(model, b));
        violations += lhs > rhs + 1e-8;
        worst_ratio = std::max(worst_ratio, lhs / rhs);
    }
    verdict(7, violations == 0,
            fmt::format("Lipschitz estimate, 200 random pairs: {} violations, worst lhs/rhs {:.3e}", violations,
                        worst_ratio));
}

void converse_monotonicity(const CalibrationCertificate& cert)
{
    const MeasurementModel model = three_ring(20);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::size_t qualifying = 0, failures_here = 0, incomparable_order = 0;
    for (int pair = 0; pair < 20000; ++pair) {
        const std::vector<double> s{1.0, u(rng), u(rng)};
        const std::vector<double> t{1.0, u(rng), u(rng)};
        if (s == t || lambda_max(assemble_F(model, t) - assemble_F(model, s)).value > 0.0)
            continue;  // premise F(t) <= F(s) not met
        ++qualifying;
        incomparable_order += !(t[1] >= s[1] && t[2] >= s[2]);
        const double ct = cert.c[0] * t[1] + cert.c[1] * t[2];
        const double cs = cert.c[0] * s[1] + cert.c[1] * s[2];
        failures_here += !(ct > cs);
    }
    verdict(8, qualifying > 0 && failures_here == 0,
            fmt::format("converse monotonicity: {} qualifying pairs with F(tau) <= F(sigma) ({} not componentwise "
                        "ordered), {} with c^T tau <= c^T sigma",
                        qualifying, incomparable_order, failures_here));
}

}  // namespace

int main()
{
    const auto t0 = Clock::now();
    forward_exactness();
    jacobian_correctness();
    loewner_suites();
    headline_recovery();
    local_minima_pathology();
    const CalibrationCertificate cert = noise_certificate();
    info(fmt::format("certificate (3 per axis, m = 20): c = [{:.17g}, {:.17g}], lambda = {:.6e}", cert.c[0], cert.c[1],
                     cert.lambda));
    noise_bound(cert);
    lipschitz(cert);
    converse_monotonicity(cert);
    fmt::print("acceptance: {} of 8 criteria passed ({:.1f} s)\n", 8 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
