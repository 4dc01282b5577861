// convexeit: command-line harness for the layered-disk experiments.
//
//   convexeit landscape  [--config FILE] [--m N] [--seed S] [--out DIR]
//   convexeit basins     ...
//   convexeit calibrate  ...
//   convexeit solve      ... [--delta D] [--measurement exact|FILE] [--certificate FILE] [--trials N]
//   convexeit properties ... [--trials N]
//
// Exit codes: 0 success, 1 usage/config/IO error, 2 infeasible data or lost
// definiteness, 3 property failure.

#include "convexeit/experiments.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

using namespace convexeit;

struct Overrides {
    std::string config_path;
    std::optional<std::size_t> m;
    std::optional<double> delta;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> measurement;
    std::optional<std::string> certificate;
    std::optional<std::size_t> trials;
    std::optional<std::string> backend;
    bool flip_sign = false;
};

ExperimentConfig resolve(const Overrides& o, const std::string& command)
{
    ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (o.m)
        c.m = *o.m;
    if (o.delta)
        c.delta = *o.delta;
    if (o.seed)
        c.seed = *o.seed;
    if (o.out)
        c.out_dir = *o.out;
    if (o.measurement)
        c.measurement = *o.measurement;
    if (o.certificate)
        c.certificate = *o.certificate;
    if (o.backend)
        c.backend = *o.backend;
    if (o.trials) {
        if (command == "properties")
            c.property_trials = *o.trials;
        else
            c.noise_trials = *o.trials;
    }
    if (o.flip_sign)
        c.flip_jacobian_sign = true;
    c.validate();
    return c;
}

int run_landscape(const ExperimentConfig& c)
{
    const LandscapeResult r = cmd_landscape(c);
    fmt::print("grid {}x{} on [{}, {}]^2\n", r.axis.size(), r.axis.size(), c.landscape.lo, c.landscape.hi);
    fmt::print("strict grid-local minima: {} ({} with residual > 1e-4)\n", r.minima.size(), r.minima_above_threshold);
    for (const GridMinimum& g : r.minima)
        fmt::print("  ({}, {}) residual {}\n", r.axis[g.i], r.axis[g.k], g.value);
    fmt::print("wrote {}/landscape.csv and landscape.svg\n", c.out_dir);
    return 0;
}

int run_basins(const ExperimentConfig& c)
{
    const BasinsResult r = cmd_basins(c);
    fmt::print("grid {}x{} of initializations on [{}, {}]^2\n", r.axis.size(), r.axis.size(), c.basins.lo, c.basins.hi);
    fmt::print("fraction with final error > 0.1: {}\n", r.bad_fraction);
    fmt::print("fraction with final error <= 1e-6: {}\n", r.good_fraction);
    fmt::print("wrote {}/basins.csv and basins.svg\n", c.out_dir);
    return 0;
}

int run_calibrate(const ExperimentConfig& c)
{
    const CalibrateResult r = cmd_calibrate(c);
    fmt::print("lambda = {}\n", r.certificate.lambda);
    fmt::print("c = [{}]\n", fmt::join(r.certificate.c, ", "));
    fmt::print("verification on {} samples ({} per axis): min definiteness {}, {} violations\n",
               r.verification.samples, r.verification_spec.grid_per_axis, r.verification.min_definiteness,
               r.verification.violations.size());
    for (const auto& v : r.verification.violations)
        fmt::print("  sample {} margin {}{}\n", v.sample, v.margin, v.definiteness_lost ? " (definiteness lost)" : "");
    fmt::print("wrote {}/certificate.json\n", c.out_dir);
    return r.verification.violations.empty() ? 0 : 2;
}

int run_solve(const ExperimentConfig& c)
{
    const SolveResult r = cmd_solve(c);
    for (const SolveTrial& t : r.trials) {
        fmt::print("trial {}: sigma = [{}] status {} residual {} error_c_inf {} error_2 {}", t.trial,
                   fmt::join(t.report.sigma, ", "), t.report.status, t.report.feasibility_residual, t.error_c_inf,
                   t.error_2);
        if (t.bound)
            fmt::print(" bound {}{}", *t.bound, t.within_bound ? "" : " VIOLATED");
        fmt::print("\n");
    }
    if (r.bound_violations > 0)
        fmt::print("{} of {} trials exceed the certified bound\n", r.bound_violations, r.trials.size());
    fmt::print("wrote {}/solve.jsonl\n", c.out_dir);
    return 0;
}

int run_properties(const ExperimentConfig& c)
{
    const PropertiesResult r = cmd_properties(c);
    for (const PropertyResult& s : r.suites) {
        if (s.skipped)
            fmt::print("SKIP {} ({})\n", s.name, s.note);
        else
            fmt::print("{} {} trials={} violations={} worst={}\n", s.passed() ? "PASS" : "FAIL", s.name, s.trials,
                       s.violations, s.worst);
    }
    return r.passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Convex reconstruction experiments for layered-disk impedance tomography"};
    app.require_subcommand(1);
    Overrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--m", o.m, "number of measurement currents");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--delta", o.delta, "noise level / constraint slack");
    };
    CLI::App* landscape = app.add_subcommand("landscape", "sample the least-squares residual on a 2-D grid");
    CLI::App* basins = app.add_subcommand("basins", "run the least-squares baseline from every grid point");
    CLI::App* calibrate = app.add_subcommand("calibrate", "compute the cost vector and stability constant");
    CLI::App* solve = app.add_subcommand("solve", "solve the convex program for exact, file or noisy data");
    CLI::App* properties = app.add_subcommand("properties", "run the randomized Loewner-order property suites");
    for (CLI::App* sub : {landscape, basins, calibrate, solve, properties})
        add_common(sub);
    solve->add_option("--measurement", o.measurement, "\"exact\" or a CSV file holding Y");
    solve->add_option("--certificate", o.certificate, "certificate JSON from calibrate");
    solve->add_option("--trials", o.trials, "number of seeded noise trials");
    solve->add_option("--backend", o.backend, "penalty | barrier | lm");
    properties->add_option("--trials", o.trials, "trials per suite");
    properties->add_flag("--inject-jacobian-sign-flip", o.flip_sign)->group("");

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const ExperimentConfig config = resolve(o, command);
        if (command == "landscape")
            return run_landscape(config);
        if (command == "basins")
            return run_basins(config);
        if (command == "calibrate")
            return run_calibrate(config);
        if (command == "solve")
            return run_solve(config);
        return run_properties(config);
    } catch (const NoDefiniteness& e) {
        std::cerr << "no definiteness: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleStart& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
