#include "convexeit/experiments.hpp"

#include "convexeit/parallel.hpp"
#include "convexeit/svg.hpp"
#include "convexeit/symmetric_eigen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

namespace convexeit {
namespace {

constexpr double kLandscapeThreshold = 1e-4;
constexpr double kBadError = 0.1;
constexpr double kGoodError = 1e-6;

std::filesystem::path prepare_out(const ExperimentConfig& config)
{
    std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string csv_preamble(const ExperimentConfig& config, const std::string& command, const std::string& columns)
{
    return fmt::format("# convexeit {} config_hash={}\n{}\n", command, config_hash(config), columns);
}

Backend parse_backend(const std::string& name)
{
    if (name == "penalty")
        return Backend::penalty;
    if (name == "barrier")
        return Backend::barrier;
    if (name == "lm" || name == "levenberg_marquardt")
        return Backend::levenberg_marquardt;
    throw ConfigError("unknown backend '" + name + "'");
}

std::vector<double> free_axis_values(const SigmaBox& box, double a, double b)
{
    const std::vector<double> free{a, b};
    return box.expand(free);
}

void require_two_free(const ExperimentConfig& config, const char* command)
{
    if (config.box.free_count() != 2)
        throw ConfigError(fmt::format("{} needs exactly 2 free layers, box has {}", command, config.box.free_count()));
}

SigmaBox baseline_box(const ExperimentConfig& config)
{
    std::vector<double> lo = config.box.lower();
    std::vector<double> hi = config.box.upper();
    for (std::size_t i : config.box.free_layers()) {
        lo[i] = config.lm_lower;
        hi[i] = config.lm_upper;
    }
    return SigmaBox(lo, hi);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(std::uint64_t(trial) >> 32)};
    return std::mt19937_64(seq);
}

template <class T>
void read_into(const nlohmann::json& j, const char* key, T& field)
{
    if (j.contains(key))
        field = j.at(key).get<T>();
}

GridSpec grid_from_json(const nlohmann::json& j, GridSpec g)
{
    read_into(j, "lo", g.lo);
    read_into(j, "hi", g.hi);
    read_into(j, "resolution", g.resolution);
    return g;
}

nlohmann::json to_json(const GridSpec& g)
{
    return {{"lo", g.lo}, {"hi", g.hi}, {"resolution", g.resolution}};
}

}  // namespace

std::vector<double> GridSpec::nodes() const
{
    std::vector<double> out(resolution);
    if (resolution == 1) {
        out[0] = lo;
        return out;
    }
    const double last = static_cast<double>(resolution - 1);
    for (std::size_t k = 0; k < resolution; ++k)
        out[k] = lo + (hi - lo) * (static_cast<double>(k) / last);
    return out;
}

void ExperimentConfig::validate() const
{
    try {
        const Geometry geom(radii);
        if (box.layers() != geom.layers())
            throw ConfigError(fmt::format("box has {} layers, geometry has {}", box.layers(), geom.layers()));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (truth.size() != box.layers())
        throw ConfigError("truth must give one conductivity per layer");
    for (double s : truth)
        if (!(s > 0.0) || !std::isfinite(s))
            throw ConfigError("truth conductivities must be positive and finite");
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (box.pinned(i) && truth[i] != box.lower()[i])
            throw ConfigError(fmt::format("truth disagrees with pinned layer {}", i));
    if (m == 0)
        throw ConfigError("m must be positive");
    for (const GridSpec* g : {&landscape, &basins})
        if (g->resolution == 0 || !(g->lo > 0.0) || !(g->hi >= g->lo) || !std::isfinite(g->hi))
            throw ConfigError("grid ranges must satisfy 0 < lo <= hi and resolution >= 1");
    if (!(lm_function_tol >= 0.0) || !(lm_step_tol >= 0.0) || lm_max_iterations < 0)
        throw ConfigError("baseline tolerances and iteration cap must be non-negative");
    if (!(lm_lower > 0.0) || !(lm_upper > lm_lower))
        throw ConfigError("baseline clamp range must satisfy 0 < lm_lower < lm_upper");
    if (!(residual_clip_lo > 0.0 && residual_clip_hi > residual_clip_lo && error_clip_lo > 0.0 &&
          error_clip_hi > error_clip_lo))
        throw ConfigError("clip ranges must be positive and increasing");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw ConfigError("delta must be a finite non-negative number");
    if (noise_trials > 0 && measurement != "exact")
        throw ConfigError("noise trials need measurement = \"exact\"");
    if (truth_from_certificate_samples && certificate.empty())
        throw ConfigError("truth_from_certificate_samples needs a certificate");
    parse_backend(backend);
}

nlohmann::json to_json(const ExperimentConfig& c)
{
    return {
        {"radii", c.radii},
        {"box", to_json(c.box)},
        {"truth", c.truth},
        {"m", c.m},
        {"landscape", to_json(c.landscape)},
        {"basins", to_json(c.basins)},
        {"lm_lower", c.lm_lower},
        {"lm_upper", c.lm_upper},
        {"lm_max_iterations", c.lm_max_iterations},
        {"lm_function_tol", c.lm_function_tol},
        {"lm_step_tol", c.lm_step_tol},
        {"lm_clamp", c.lm_clamp},
        {"residual_clip", {c.residual_clip_lo, c.residual_clip_hi}},
        {"error_clip", {c.error_clip_lo, c.error_clip_hi}},
        {"calibration",
         {{"grid_per_axis", c.calibration.grid_per_axis},
          {"random_count", c.calibration.random_count},
          {"seed", c.calibration.seed},
          {"max_points", c.calibration.max_points}}},
        {"epsilon", c.epsilon},
        {"measurement", c.measurement},
        {"certificate", c.certificate},
        {"delta", c.delta},
        {"noise_trials", c.noise_trials},
        {"truth_from_certificate_samples", c.truth_from_certificate_samples},
        {"backend", c.backend},
        {"property_trials", c.property_trials},
        {"property_tol", c.property_tol},
        {"flip_jacobian_sign", c.flip_jacobian_sign},
        {"seed", c.seed},
        {"out_dir", c.out_dir},
    };
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c)
{
    static const std::set<std::string> known{
        "radii",     "box",         "truth",    "m",         "landscape",      "basins",
        "lm_lower",  "lm_upper",    "lm_max_iterations", "lm_function_tol", "lm_step_tol", "lm_clamp", "residual_clip",  "error_clip",
        "calibration", "epsilon",   "measurement", "certificate", "delta",     "noise_trials",
        "truth_from_certificate_samples", "backend", "property_trials", "property_tol",
        "flip_jacobian_sign", "seed", "out_dir"};
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            throw ConfigError("unknown config key '" + key + "'");
    try {
        read_into(j, "radii", c.radii);
        if (j.contains("box"))
            c.box = box_from_json(j.at("box"));
        else if (j.contains("radii") && c.box.layers() != c.radii.size() + 1)
            c.box = SigmaBox::uniform(c.radii.size() + 1, 0.5, 2.0);
        if (j.contains("truth"))
            read_into(j, "truth", c.truth);
        else if (c.truth.size() != c.box.layers())
            c.truth = c.box.expand(std::vector<double>(c.box.free_count(), 1.0));
        read_into(j, "m", c.m);
        if (j.contains("landscape"))
            c.landscape = grid_from_json(j.at("landscape"), c.landscape);
        if (j.contains("basins"))
            c.basins = grid_from_json(j.at("basins"), c.basins);
        read_into(j, "lm_lower", c.lm_lower);
        read_into(j, "lm_upper", c.lm_upper);
        read_into(j, "lm_max_iterations", c.lm_max_iterations);
        read_into(j, "lm_function_tol", c.lm_function_tol);
        read_into(j, "lm_step_tol", c.lm_step_tol);
        read_into(j, "lm_clamp", c.lm_clamp);
        if (j.contains("residual_clip")) {
            c.residual_clip_lo = j.at("residual_clip").at(0).get<double>();
            c.residual_clip_hi = j.at("residual_clip").at(1).get<double>();
        }
        if (j.contains("error_clip")) {
            c.error_clip_lo = j.at("error_clip").at(0).get<double>();
            c.error_clip_hi = j.at("error_clip").at(1).get<double>();
        }
        if (j.contains("calibration")) {
            const auto& cal = j.at("calibration");
            read_into(cal, "grid_per_axis", c.calibration.grid_per_axis);
            read_into(cal, "random_count", c.calibration.random_count);
            read_into(cal, "seed", c.calibration.seed);
            read_into(cal, "max_points", c.calibration.max_points);
        }
        read_into(j, "epsilon", c.epsilon);
        read_into(j, "measurement", c.measurement);
        read_into(j, "certificate", c.certificate);
        read_into(j, "delta", c.delta);
        read_into(j, "noise_trials", c.noise_trials);
        read_into(j, "truth_from_certificate_samples", c.truth_from_certificate_samples);
        read_into(j, "backend", c.backend);
        read_into(j, "property_trials", c.property_trials);
        read_into(j, "property_tol", c.property_tol);
        read_into(j, "flip_jacobian_sign", c.flip_jacobian_sign);
        read_into(j, "seed", c.seed);
        read_into(j, "out_dir", c.out_dir);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& config)
{
    nlohmann::json j = to_json(config);
    j.erase("out_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

SymMatrix random_symmetric_noise(std::size_t order, double norm, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    SymMatrix e(order);
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t k = i; k < order; ++k)
            e.set(i, k, gauss(rng));
    const double current = spectral_norm(e);
    if (current > 0.0)
        e *= norm / current;
    return e;
}

std::vector<GridMinimum> strict_local_minima(const std::vector<double>& values, std::size_t rows, std::size_t cols)
{
    std::vector<GridMinimum> out;
    for (std::size_t i = 1; i + 1 < rows; ++i) {
        for (std::size_t k = 1; k + 1 < cols; ++k) {
            const double v = values[i * cols + k];
            if (v < values[(i - 1) * cols + k] && v < values[(i + 1) * cols + k] && v < values[i * cols + k - 1] &&
                v < values[i * cols + k + 1])
                out.push_back({i, k, v});
        }
    }
    return out;
}

LandscapeResult cmd_landscape(const ExperimentConfig& config, bool write_artifacts)
{
    config.validate();
    require_two_free(config, "landscape");
    const MeasurementModel model = config.model();
    const SymMatrix y = assemble_F(model, config.truth);

    LandscapeResult result;
    result.axis = config.landscape.nodes();
    const std::size_t n = result.axis.size();
    auto rows = parallel_map(n, [&](std::size_t i) {
        std::vector<double> row(n);
        for (std::size_t k = 0; k < n; ++k)
            row[k] = frobenius_residual(model, free_axis_values(config.box, result.axis[i], result.axis[k]), y);
        return row;
    });
    result.residual.reserve(n * n);
    for (const auto& row : rows)
        result.residual.insert(result.residual.end(), row.begin(), row.end());
    result.minima = strict_local_minima(result.residual, n, n);
    result.minima_above_threshold = static_cast<std::size_t>(std::count_if(
        result.minima.begin(), result.minima.end(), [](const GridMinimum& g) { return g.value > kLandscapeThreshold; }));

    if (write_artifacts) {
        const auto dir = prepare_out(config);
        std::string csv = csv_preamble(config, "landscape", "sigma_1,sigma_2,residual");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                csv += fmt::format("{},{},{}\n", result.axis[i], result.axis[k], result.residual[i * n + k]);
        write_text(dir / "landscape.csv", csv);

        HeatmapStyle style;
        style.clip_lo = config.residual_clip_lo;
        style.clip_hi = config.residual_clip_hi;
        style.title = "least-squares residual ||F(sigma) - Y||_F^2";
        style.x_lo = style.y_lo = config.landscape.lo;
        style.x_hi = style.y_hi = config.landscape.hi;
        write_text(dir / "landscape.svg", render_log_heatmap(result.residual, n, n, style));
    }
    return result;
}

BasinsResult cmd_basins(const ExperimentConfig& config, bool write_artifacts)
{
    config.validate();
    require_two_free(config, "basins");
    const MeasurementModel model = config.model();
    const SymMatrix y = assemble_F(model, config.truth);
    const SigmaBox lm_box = baseline_box(config);
    LMOptions options;
    options.max_iterations = config.lm_max_iterations;
    options.function_tol = config.lm_function_tol;
    options.step_tol = config.lm_step_tol;
    options.box = config.lm_clamp ? BoxBehavior::clamp : BoxBehavior::none;
    const std::vector<double> truth_free = config.box.restrict(config.truth);

    BasinsResult result;
    result.axis = config.basins.nodes();
    const std::size_t n = result.axis.size();
    auto runs = parallel_map(n * n, [&](std::size_t idx) {
        const std::vector<double> start = free_axis_values(config.box, result.axis[idx / n], result.axis[idx % n]);
        return lsq_solve(model, lm_box, y, start, options);
    });
    result.error.resize(n * n);
    result.status.resize(n * n);
    std::size_t bad = 0, good = 0;
    for (std::size_t idx = 0; idx < n * n; ++idx) {
        const std::vector<double> final_free = config.box.restrict(runs[idx].sigma);
        double err = euclidean_distance(final_free, truth_free);
        if (!std::isfinite(err))
            err = std::numeric_limits<double>::infinity();
        result.error[idx] = err;
        result.status[idx] = runs[idx].status;
        bad += err > kBadError;
        good += err <= kGoodError;
    }
    result.bad_fraction = static_cast<double>(bad) / static_cast<double>(n * n);
    result.good_fraction = static_cast<double>(good) / static_cast<double>(n * n);

    if (write_artifacts) {
        const auto dir = prepare_out(config);
        std::string csv = csv_preamble(config, "basins", "sigma0_1,sigma0_2,final_1,final_2,error,status");
        for (std::size_t idx = 0; idx < n * n; ++idx) {
            const std::vector<double> final_free = config.box.restrict(runs[idx].sigma);
            csv += fmt::format("{},{},{},{},{},{}\n", result.axis[idx / n], result.axis[idx % n], final_free[0],
                               final_free[1], result.error[idx], result.status[idx]);
        }
        write_text(dir / "basins.csv", csv);

        HeatmapStyle style;
        style.clip_lo = config.error_clip_lo;
        style.clip_hi = config.error_clip_hi;
        style.title = "error of the final least-squares iterate";
        style.x_lo = style.y_lo = config.basins.lo;
        style.x_hi = style.y_hi = config.basins.hi;
        style.x_label = "initial sigma_1";
        style.y_label = "initial sigma_2";
        write_text(dir / "basins.svg", render_log_heatmap(result.error, n, n, style));
    }
    return result;
}

CalibrateResult cmd_calibrate(const ExperimentConfig& config, bool write_artifacts)
{
    config.validate();
    const MeasurementModel model = config.model();
    CalibrationOptions options;
    options.epsilon = config.epsilon;

    CalibrateResult result;
    result.certificate = calibrate(model, config.box, config.calibration, options);
    result.verification_spec = config.calibration;
    result.verification_spec.grid_per_axis = std::max<std::size_t>(2, 2 * config.calibration.grid_per_axis - 1);
    result.verification_spec.random_count = 0;
    const auto fresh = sample_box(config.box, result.verification_spec);
    result.verification = verify_certificate(result.certificate, model, fresh);

    if (write_artifacts) {
        const auto dir = prepare_out(config);
        save_certificate((dir / "certificate.json").string(), result.certificate);
        nlohmann::json summary{
            {"config_hash", config_hash(config)},
            {"lambda", result.certificate.lambda},
            {"c", result.certificate.c},
            {"verification_grid_per_axis", result.verification_spec.grid_per_axis},
            {"verification_samples", result.verification.samples},
            {"verification_min_definiteness", result.verification.min_definiteness},
            {"verification_violations", result.verification.violations.size()},
        };
        write_text(dir / "calibration_summary.json", summary.dump(2) + "\n");
    }
    return result;
}

SolveResult cmd_solve(const ExperimentConfig& config, bool write_artifacts)
{
    config.validate();
    const MeasurementModel model = config.model();

    std::optional<CalibrationCertificate> cert;
    if (!config.certificate.empty()) {
        cert = load_certificate(config.certificate);
        if (cert->m != config.m || cert->radii != config.radii || !(cert->box == config.box))
            throw ConfigError("certificate was calibrated for a different geometry, box or m");
    }
    const std::vector<double> cost = cert ? cert->c : uniform_cost(config.box);
    const std::size_t n_free = config.box.free_count();

    std::vector<std::vector<double>> truth_pool;
    if (config.truth_from_certificate_samples)
        truth_pool = sample_box(cert->box, cert->sample_spec);

    SolverOptions options;
    options.backend = parse_backend(config.backend);
    if (cert)
        options.certificate_lambda = cert->lambda;

    const bool noisy = config.noise_trials > 0;
    const std::size_t trials = noisy ? config.noise_trials : 1;
    std::optional<SymMatrix> file_y;
    if (config.measurement != "exact") {
        file_y = load_csv(config.measurement);
        if (file_y->order() != config.m)
            throw ConfigError(fmt::format("measurement file has order {}, expected m = {}", file_y->order(), config.m));
    }

    auto run = [&](std::size_t t) {
        SolveTrial trial;
        trial.trial = t;
        std::mt19937_64 rng = trial_rng(config.seed, t);
        if (!truth_pool.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, truth_pool.size() - 1);
            trial.truth = truth_pool[pick(rng)];
        } else {
            trial.truth = config.truth;
        }
        ConvexProblem problem{model, file_y ? *file_y : assemble_F(model, trial.truth), config.box, cost};
        problem.slack = config.delta;
        if (!file_y && config.delta > 0.0)
            problem.y += random_symmetric_noise(config.m, config.delta, rng);
        trial.report = solve(problem, options);

        const std::vector<double> got = config.box.restrict(trial.report.sigma);
        const std::vector<double> want = config.box.restrict(trial.truth);
        std::vector<double> diff(n_free);
        for (std::size_t i = 0; i < n_free; ++i)
            diff[i] = got[i] - want[i];
        trial.error_c_inf = weighted_norm(cost, diff);
        trial.error_2 = euclidean_distance(got, want);
        if (cert && !file_y && config.delta > 0.0) {
            trial.bound = 2.0 * static_cast<double>(n_free - 1) * config.delta / cert->lambda;
            trial.within_bound = trial.error_c_inf <= *trial.bound + 1e-8;
        }
        return trial;
    };

    SolveResult result;
    result.trials = parallel_map(trials, run);
    for (const SolveTrial& t : result.trials)
        result.bound_violations += !t.within_bound;

    if (write_artifacts) {
        const auto dir = prepare_out(config);
        std::string lines;
        for (const SolveTrial& t : result.trials) {
            nlohmann::json j = to_json(t.report);
            j["trial"] = t.trial;
            j["delta"] = config.delta;
            j["truth"] = t.truth;
            j["error_c_inf"] = t.error_c_inf;
            j["error_2"] = t.error_2;
            j["bound"] = t.bound ? nlohmann::json(*t.bound) : nlohmann::json(nullptr);
            j["within_bound"] = t.within_bound;
            j["config_hash"] = config_hash(config);
            lines += j.dump() + "\n";
        }
        write_text(dir / "solve.jsonl", lines);
        if (!noisy && !file_y && config.delta == 0.0)
            save_csv((dir / "measurement.csv").string(), assemble_F(model, config.truth));
    }
    return result;
}

bool PropertiesResult::passed() const noexcept
{
    return std::all_of(suites.begin(), suites.end(), [](const PropertyResult& r) { return r.passed(); });
}

PropertiesResult cmd_properties(const ExperimentConfig& config, bool write_artifacts)
{
    config.validate();
    PropertyConfig pc{config.geometry(), config.m, config.box};
    pc.seed = config.seed;
    pc.trials = config.property_trials;
    pc.tol = config.property_tol;
    pc.flip_jacobian_sign = config.flip_jacobian_sign;

    PropertiesResult result{run_property_suites(pc)};
    if (write_artifacts) {
        const auto dir = prepare_out(config);
        std::string csv = csv_preamble(config, "properties", "suite,trials,violations,worst,skipped,passed,note");
        for (const PropertyResult& r : result.suites)
            csv += fmt::format("{},{},{},{},{},{},\"{}\"\n", r.name, r.trials, r.violations, r.worst, r.skipped,
                               r.passed(), r.note);
        write_text(dir / "properties.csv", csv);
    }
    return result;
}

}  // namespace convexeit
