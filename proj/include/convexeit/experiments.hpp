#pragma once
// Experiment harness behind the command-line tool. Every command takes a
// resolved ExperimentConfig, returns a result struct for programmatic use and
// writes its artifacts (CSV, SVG, JSON, JSONL) under config.out_dir. Given the
// same config every artifact is reproduced byte for byte.

#include "convexeit/baseline_lsq.hpp"
#include "convexeit/calibration.hpp"
#include "convexeit/layer_box.hpp"
#include "convexeit/measurement.hpp"
#include "convexeit/properties.hpp"
#include "convexeit/sdp_solver.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace convexeit {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform 1-D grid lo, ..., hi with `resolution` nodes. Node k is computed as
/// lo + (hi - lo) * (k / (resolution - 1)), so doubling a resolution N to
/// 2N - 1 reproduces the old nodes bit for bit.
struct GridSpec {
    double lo = 0.1;
    double hi = 3.0;
    std::size_t resolution = 300;
    std::vector<double> nodes() const;
    bool operator==(const GridSpec&) const = default;
};

struct ExperimentConfig {
    std::vector<double> radii{0.5, 0.25};
    SigmaBox box{{1.0, 0.5, 0.5}, {1.0, 2.0, 2.0}};
    std::vector<double> truth{1.0, 1.0, 1.0};  // full layer vector
    std::size_t m = 6;

    GridSpec landscape{0.1, 3.0, 300};
    GridSpec basins{0.1, 3.0, 60};
    double lm_lower = 1e-3;  // clamp range of the baseline on free layers
    double lm_upper = 1e3;
    int lm_max_iterations = 400;
    double lm_function_tol = 1e-6;
    double lm_step_tol = 1e-6;
    bool lm_clamp = false;  // false: unconstrained steps, leaving R^n_+ counts as divergence
    double residual_clip_lo = 1e-8;
    double residual_clip_hi = 1e2;
    double error_clip_lo = 1e-6;
    double error_clip_hi = 1e1;

    SampleSpec calibration{3, 0, 1, 1'000'000};
    double epsilon = 0.0;  // <= 0: automatic

    std::string measurement = "exact";  // "exact" or a CSV path
    std::string certificate;            // empty: uniform cost
    double delta = 0.0;
    std::size_t noise_trials = 0;
    bool truth_from_certificate_samples = false;
    std::string backend = "penalty";

    std::size_t property_trials = 1000;
    double property_tol = 1e-10;
    bool flip_jacobian_sign = false;

    std::uint64_t seed = 1;
    std::string out_dir = "out";

    /// Throws ConfigError when the fields cannot be resolved into module inputs.
    void validate() const;
    Geometry geometry() const { return Geometry(radii); }
    MeasurementModel model() const { return MeasurementModel(geometry(), m); }
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 over the canonical JSON dump without out_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Symmetric matrix with iid Gaussian upper triangle, rescaled to spectral
/// norm exactly `norm` (up to rounding).
SymMatrix random_symmetric_noise(std::size_t order, double norm, std::mt19937_64& rng);

/// Strict grid-local minima of a rows x cols grid (values[i * cols + k]):
/// interior nodes whose four neighbours are all larger.
struct GridMinimum {
    std::size_t i = 0;
    std::size_t k = 0;
    double value = 0.0;
};
std::vector<GridMinimum> strict_local_minima(const std::vector<double>& values, std::size_t rows, std::size_t cols);

struct LandscapeResult {
    std::vector<double> axis;
    std::vector<double> residual;  // residual[i * N + k] at (axis[i], axis[k])
    std::vector<GridMinimum> minima;
    std::size_t minima_above_threshold = 0;  // residual > 1e-4
};
LandscapeResult cmd_landscape(const ExperimentConfig& config, bool write_artifacts = true);

struct BasinsResult {
    std::vector<double> axis;
    std::vector<double> error;  // Euclidean distance of the final iterate to the truth
    std::vector<std::string> status;
    double bad_fraction = 0.0;   // error > 0.1
    double good_fraction = 0.0;  // error <= 1e-6
};
BasinsResult cmd_basins(const ExperimentConfig& config, bool write_artifacts = true);

struct CalibrateResult {
    CalibrationCertificate certificate;
    VerificationReport verification;
    SampleSpec verification_spec;
};
/// Throws NoDefiniteness when calibration fails.
CalibrateResult cmd_calibrate(const ExperimentConfig& config, bool write_artifacts = true);

struct SolveTrial {
    std::size_t trial = 0;
    std::vector<double> truth;
    SolveReport report;
    double error_c_inf = 0.0;
    double error_2 = 0.0;
    std::optional<double> bound;  // 2 (n-1) delta / lambda with a certificate
    bool within_bound = true;
};
struct SolveResult {
    std::vector<SolveTrial> trials;
    std::size_t bound_violations = 0;
};
/// One solve against config.measurement (exact or file), or config.noise_trials
/// seeded noise trials at level config.delta. Throws InfeasibleStart when the
/// data cannot be met by the box.
SolveResult cmd_solve(const ExperimentConfig& config, bool write_artifacts = true);

struct PropertiesResult {
    std::vector<PropertyResult> suites;
    bool passed() const noexcept;
};
PropertiesResult cmd_properties(const ExperimentConfig& config, bool write_artifacts = true);

}  // namespace convexeit
