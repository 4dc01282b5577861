#pragma once

// Offline calibration of the linear cost c and the stability constant lambda.
//
// With C = n-1 and free layers numbered from the boundary inward, the weights
// delta_1 <= ... <= delta_n = 1 are built backwards from the deepest layer:
// at layer j a scalar delta' in (0, C] is found such that
//     lambda_max(-F'(sigma)(e_j - delta' e_j^- - (C/delta_j) e_j^+)) >= eps
// on every sample, and then delta_{j-1} = delta_j delta' / C. Afterwards
//     lambda = min_{samples, j} lambda_max(F'(sigma) D ((n-1) e_j' - e_j)),
//     c_j = 1/delta_j,
// and lambda >= eps * min_j delta_j > 0.
// Everything is certified on the recorded sample set only.

#include "convexeit/layer_box.hpp"
#include "convexeit/measurement.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace convexeit {

struct SampleSpec {
    std::size_t grid_per_axis = 3;  // 0 disables the grid
    std::size_t random_count = 0;
    std::uint64_t seed = 0;
    std::size_t max_points = 1'000'000;

    bool operator==(const SampleSpec&) const = default;
};

/// Full grid over the free axes (corners included) followed by seeded
/// uniform draws. Pinned axes contribute their single value. Returns full
/// conductivity vectors in a deterministic order (first layer slowest).
std::vector<std::vector<double>> sample_box(const SigmaBox& box, const SampleSpec& spec);

// Direction vectors over n free layers, 0-based j.
std::vector<double> unit_vector(std::size_t n, std::size_t j);
std::vector<double> all_but(std::size_t n, std::size_t j);   // e_j'
std::vector<double> deeper_than(std::size_t n, std::size_t j);     // e_j^+
std::vector<double> shallower_than(std::size_t n, std::size_t j);  // e_j^-

/// Jacobian restricted to the free layers of the box.
JacobianStack free_jacobian(const MeasurementModel& model, const SigmaBox& box, std::span<const double> sigma);

/// lambda_max(sum_i d_i J_i).
double lambda_max_along(const JacobianStack& jacobian, std::span<const double> d);

class NoDefiniteness : public std::runtime_error {
public:
    NoDefiniteness(std::size_t layer, const std::string& what) : std::runtime_error(what), layer_(layer) {}
    /// 0-based free-layer index that failed.
    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

/// Largest delta' from the halving schedule C, C/2, ..., C 2^-40 (then one
/// bisection step toward the last failing value) with
///     min_samples lambda_max(-J (e_j - delta' e_j^- - w_plus e_j^+)) >= eps.
/// For j = 0 there is nothing shallower and C is returned once the condition
/// holds. Throws NoDefiniteness when even the smallest delta' fails.
double find_delta(std::span<const JacobianStack> jacobians, std::size_t j, double C, double w_plus, double eps);

double find_delta(const MeasurementModel& model, const SigmaBox& box, std::span<const std::vector<double>> samples,
                  std::size_t j, double C, double w_plus, double eps);

struct CalibrationCertificate {
    std::vector<double> radii;
    std::size_t m = 0;
    SigmaBox box;
    SampleSpec sample_spec;
    std::size_t sample_count = 0;
    double epsilon = 0.0;
    double C = 0.0;
    std::vector<std::size_t> free_layers;
    std::vector<double> deltas;  // per free layer, nondecreasing, last = 1
    std::vector<double> c;       // 1 / deltas
    double lambda = 0.0;

    std::size_t free_count() const noexcept { return c.size(); }
};

struct CalibrationOptions {
    /// Margin; <= 0 selects 1e-6 * max_samples ||F'(sigma) 1||_F.
    double epsilon = 0.0;
};

CalibrationCertificate calibrate(const MeasurementModel& model, const SigmaBox& box, const SampleSpec& spec,
                                 const CalibrationOptions& options = {});

/// min_j lambda_max(F'(sigma) D ((n-1) e_j' - e_j)) at one point.
double definiteness_margin(const CalibrationCertificate& cert, const MeasurementModel& model,
                           std::span<const double> sigma);

struct VerificationReport {
    struct Violation {
        std::size_t sample = 0;
        double margin = 0.0;
        bool definiteness_lost = false;  // margin <= 0, not just below lambda
    };
    double min_definiteness = 0.0;
    std::size_t samples = 0;
    std::vector<Violation> violations;  // samples with margin below the certified lambda

    bool ok() const noexcept { return violations.empty(); }
};

VerificationReport verify_certificate(const CalibrationCertificate& cert, const MeasurementModel& model,
                                      std::span<const std::vector<double>> fresh_samples);

/// max_j c_j |v_j| over the free-layer coordinates.
double weighted_norm(const CalibrationCertificate& cert, std::span<const double> v);
double weighted_norm(std::span<const double> c, std::span<const double> v);

nlohmann::json to_json(const CalibrationCertificate& cert);
CalibrationCertificate certificate_from_json(const nlohmann::json& j);
void save_certificate(const std::string& path, const CalibrationCertificate& cert);
CalibrationCertificate load_certificate(const std::string& path);

nlohmann::json to_json(const SigmaBox& box);
SigmaBox box_from_json(const nlohmann::json& j);

}  // namespace convexeit
