#include "convexeit/calibration.hpp"

#include "convexeit/parallel.hpp"
#include "convexeit/symmetric_eigen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

namespace convexeit {
namespace {

constexpr int kHalvings = 40;

double min_condition(std::span<const JacobianStack> jacobians, std::size_t j, double delta, double w_plus)
{
    const std::size_t n = jacobians.front().size();
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < j)
            d[i] = delta;  // -(-delta)
        else if (i == j)
            d[i] = -1.0;
        else
            d[i] = w_plus;
    }
    // -J(e_j - delta e^- - w e^+) = J(-e_j + delta e^- + w e^+)
    double worst = std::numeric_limits<double>::infinity();
    for (const JacobianStack& jac : jacobians)
        worst = std::min(worst, lambda_max_along(jac, d));
    return worst;
}

}  // namespace

std::vector<std::vector<double>> sample_box(const SigmaBox& box, const SampleSpec& spec)
{
    const auto& free = box.free_layers();
    std::vector<std::vector<double>> out;

    if (spec.grid_per_axis > 0) {
        if (spec.grid_per_axis == 1 && !free.empty())
            throw std::invalid_argument("grid_per_axis must be >= 2 to cover the box");
        double total = 1.0;
        for (std::size_t k = 0; k < free.size(); ++k)
            total *= static_cast<double>(spec.grid_per_axis);
        if (total > static_cast<double>(spec.max_points))
            throw std::invalid_argument(
                fmt::format("grid of {} points exceeds the cap of {}", total, spec.max_points));

        const std::size_t g = spec.grid_per_axis;
        std::vector<std::size_t> idx(free.size(), 0);
        const auto count = static_cast<std::size_t>(total);
        out.reserve(count + spec.random_count);
        for (std::size_t point = 0; point < count; ++point) {
            std::vector<double> sigma = box.lower();
            for (std::size_t k = 0; k < free.size(); ++k) {
                const std::size_t layer = free[k];
                const double lo = box.lower()[layer];
                const double hi = box.upper()[layer];
                // Endpoints exactly, interior points by linear interpolation.
                sigma[layer] = idx[k] + 1 == g ? hi : lo + (hi - lo) * static_cast<double>(idx[k]) / static_cast<double>(g - 1);
            }
            out.push_back(std::move(sigma));
            for (std::size_t k = free.size(); k-- > 0;) {
                if (++idx[k] < g)
                    break;
                idx[k] = 0;
            }
        }
    }

    if (spec.random_count > 0) {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t r = 0; r < spec.random_count; ++r) {
            std::vector<double> sigma = box.lower();
            for (std::size_t layer : free)
                sigma[layer] = box.lower()[layer] + (box.upper()[layer] - box.lower()[layer]) * unit(rng);
            out.push_back(std::move(sigma));
        }
    }
    if (out.empty())
        throw std::invalid_argument("sample specification produces no points");
    return out;
}

std::vector<double> unit_vector(std::size_t n, std::size_t j)
{
    std::vector<double> v(n, 0.0);
    v.at(j) = 1.0;
    return v;
}

std::vector<double> all_but(std::size_t n, std::size_t j)
{
    std::vector<double> v(n, 1.0);
    v.at(j) = 0.0;
    return v;
}

std::vector<double> deeper_than(std::size_t n, std::size_t j)
{
    std::vector<double> v(n, 0.0);
    for (std::size_t i = j + 1; i < n; ++i)
        v[i] = 1.0;
    return v;
}

std::vector<double> shallower_than(std::size_t n, std::size_t j)
{
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < j && i < n; ++i)
        v[i] = 1.0;
    return v;
}

JacobianStack free_jacobian(const MeasurementModel& model, const SigmaBox& box, std::span<const double> sigma)
{
    JacobianStack full = assemble_jacobian(model, sigma);
    JacobianStack out;
    out.entries.reserve(box.free_count());
    for (std::size_t layer : box.free_layers())
        out.entries.push_back(std::move(full.entries[layer]));
    return out;
}

double lambda_max_along(const JacobianStack& jacobian, std::span<const double> d)
{
    return lambda_max(jacobian.directional(d)).value;
}

double find_delta(std::span<const JacobianStack> jacobians, std::size_t j, double C, double w_plus, double eps)
{
    if (jacobians.empty())
        throw std::invalid_argument("find_delta needs at least one sample");
    const std::size_t n = jacobians.front().size();
    if (j >= n)
        throw std::invalid_argument("layer index out of range");
    if (!(C > 0.0) && j > 0)
        throw std::invalid_argument("C must be positive");

    if (j == 0) {
        if (min_condition(jacobians, 0, C, w_plus) >= eps)
            return C;
        throw NoDefiniteness(0, "no definiteness at layer 1: m too small or epsilon too large");
    }

    double delta = C;
    for (int k = 0; k <= kHalvings; ++k, delta *= 0.5) {
        if (min_condition(jacobians, j, delta, w_plus) < eps)
            continue;
        if (k == 0)
            return C;
        const double mid = 1.5 * delta;
        return min_condition(jacobians, j, mid, w_plus) >= eps ? mid : delta;
    }
    throw NoDefiniteness(j, fmt::format("no definiteness at layer {}: m too small or epsilon too large", j + 1));
}

double find_delta(const MeasurementModel& model, const SigmaBox& box, std::span<const std::vector<double>> samples,
                  std::size_t j, double C, double w_plus, double eps)
{
    const auto jacobians =
        parallel_map(samples.size(), [&](std::size_t s) { return free_jacobian(model, box, samples[s]); });
    return find_delta(std::span<const JacobianStack>(jacobians), j, C, w_plus, eps);
}

namespace {

double margin_from_jacobian(const JacobianStack& jac, std::span<const double> deltas)
{
    const std::size_t n = deltas.size();
    const double C = static_cast<double>(n - 1);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = deltas[i] * (i == j ? -1.0 : C);
        worst = std::min(worst, lambda_max_along(jac, d));
    }
    return worst;
}

}  // namespace

CalibrationCertificate calibrate(const MeasurementModel& model, const SigmaBox& box, const SampleSpec& spec,
                                 const CalibrationOptions& options)
{
    if (box.layers() != model.layers())
        throw std::invalid_argument("box and geometry disagree on the layer count");
    const std::size_t n = box.free_count();
    if (n == 0)
        throw std::invalid_argument("every layer is pinned; nothing to calibrate");

    const auto samples = sample_box(box, spec);
    const auto jacobians =
        parallel_map(samples.size(), [&](std::size_t s) { return free_jacobian(model, box, samples[s]); });

    double eps = options.epsilon;
    if (!(eps > 0.0)) {
        double scale = 0.0;
        const std::vector<double> ones(n, 1.0);
        for (const JacobianStack& jac : jacobians)
            scale = std::max(scale, jac.directional(ones).frobenius_norm());
        eps = 1e-6 * scale;
    }

    CalibrationCertificate cert;
    cert.radii = model.geometry().radii();
    cert.m = model.measurements();
    cert.box = box;
    cert.sample_spec = spec;
    cert.sample_count = samples.size();
    cert.epsilon = eps;
    cert.C = static_cast<double>(n - 1);
    cert.free_layers = box.free_layers();
    cert.deltas.assign(n, 1.0);

    const std::span<const JacobianStack> jac_span(jacobians);
    if (n == 1) {
        find_delta(jac_span, 0, 0.0, 0.0, eps);
    } else {
        const double C = cert.C;
        for (std::size_t j = n; j-- > 0;) {
            const double dj = cert.deltas[j];
            const double dprime = find_delta(jac_span, j, C, C / dj, eps);
            if (j > 0)
                cert.deltas[j - 1] = dj * dprime / C;
        }
    }

    cert.c.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        cert.c[j] = 1.0 / cert.deltas[j];

    const auto margins =
        parallel_map(jacobians.size(), [&](std::size_t s) { return margin_from_jacobian(jacobians[s], cert.deltas); });
    cert.lambda = *std::min_element(margins.begin(), margins.end());
    return cert;
}

double definiteness_margin(const CalibrationCertificate& cert, const MeasurementModel& model,
                           std::span<const double> sigma)
{
    return margin_from_jacobian(free_jacobian(model, cert.box, sigma), cert.deltas);
}

VerificationReport verify_certificate(const CalibrationCertificate& cert, const MeasurementModel& model,
                                      std::span<const std::vector<double>> fresh_samples)
{
    const auto margins = parallel_map(fresh_samples.size(),
                                      [&](std::size_t s) { return definiteness_margin(cert, model, fresh_samples[s]); });
    VerificationReport report;
    report.samples = fresh_samples.size();
    report.min_definiteness = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < margins.size(); ++s) {
        report.min_definiteness = std::min(report.min_definiteness, margins[s]);
        if (margins[s] < cert.lambda)
            report.violations.push_back({s, margins[s], margins[s] <= 0.0});
    }
    return report;
}

double weighted_norm(std::span<const double> c, std::span<const double> v)
{
    if (c.size() != v.size())
        throw std::invalid_argument("weighted_norm: length mismatch");
    double out = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
        out = std::max(out, c[j] * std::abs(v[j]));
    return out;
}

double weighted_norm(const CalibrationCertificate& cert, std::span<const double> v) { return weighted_norm(cert.c, v); }

nlohmann::json to_json(const SigmaBox& box) { return {{"lower", box.lower()}, {"upper", box.upper()}}; }

SigmaBox box_from_json(const nlohmann::json& j)
{
    return SigmaBox(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
}

nlohmann::json to_json(const CalibrationCertificate& cert)
{
    return {
        {"deltas", cert.deltas},
        {"c", cert.c},
        {"lambda", cert.lambda},
        {"C", cert.C},
        {"m", cert.m},
        {"box", to_json(cert.box)},
        {"sample_spec",
         {{"grid_per_axis", cert.sample_spec.grid_per_axis},
          {"random_count", cert.sample_spec.random_count},
          {"seed", cert.sample_spec.seed},
          {"max_points", cert.sample_spec.max_points},
          {"sample_count", cert.sample_count}}},
        {"epsilon", cert.epsilon},
        {"radii", cert.radii},
        {"free_layers", cert.free_layers},
    };
}

CalibrationCertificate certificate_from_json(const nlohmann::json& j)
{
    CalibrationCertificate cert;
    cert.deltas = j.at("deltas").get<std::vector<double>>();
    cert.c = j.at("c").get<std::vector<double>>();
    cert.lambda = j.at("lambda").get<double>();
    cert.C = j.at("C").get<double>();
    cert.m = j.at("m").get<std::size_t>();
    cert.box = box_from_json(j.at("box"));
    const auto& s = j.at("sample_spec");
    cert.sample_spec.grid_per_axis = s.at("grid_per_axis").get<std::size_t>();
    cert.sample_spec.random_count = s.at("random_count").get<std::size_t>();
    cert.sample_spec.seed = s.at("seed").get<std::uint64_t>();
    cert.sample_spec.max_points = s.value("max_points", SampleSpec{}.max_points);
    cert.sample_count = s.value("sample_count", std::size_t{0});
    cert.epsilon = j.at("epsilon").get<double>();
    cert.radii = j.value("radii", std::vector<double>{});
    cert.free_layers = j.value("free_layers", cert.box.free_layers());
    if (cert.deltas.size() != cert.c.size() || cert.c.size() != cert.box.free_count())
        throw std::invalid_argument("certificate: deltas/c do not match the free layers of the box");
    if (!(cert.lambda > 0.0))
        throw std::invalid_argument("certificate: lambda must be positive");
    return cert;
}

void save_certificate(const std::string& path, const CalibrationCertificate& cert)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << to_json(cert).dump(2) << '\n';
}

CalibrationCertificate load_certificate(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    return certificate_from_json(nlohmann::json::parse(in));
}

}  // namespace convexeit
