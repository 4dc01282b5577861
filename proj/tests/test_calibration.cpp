#include "convexeit/calibration.hpp"
#include "convexeit/symmetric_eigen.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

using namespace convexeit;

namespace {

MeasurementModel three_ring(std::size_t m) { return MeasurementModel(Geometry({0.5, 0.25}), m); }

SigmaBox pinned_box() { return SigmaBox({1.0, 0.5, 0.5}, {1.0, 2.0, 2.0}); }

}  // namespace

TEST_CASE("sample grid includes the corners, first layer slowest")
{
    const SigmaBox box({1.0, 0.5, 0.5}, {1.0, 2.0, 2.0});
    const auto s = sample_box(box, SampleSpec{3, 0, 0});
    REQUIRE(s.size() == 9);
    CHECK(s.front() == std::vector<double>{1.0, 0.5, 0.5});
    CHECK(s[1] == std::vector<double>{1.0, 0.5, 1.25});
    CHECK(s.back() == std::vector<double>{1.0, 2.0, 2.0});
    for (const auto& v : s)
        CHECK(v[0] == 1.0);
}

TEST_CASE("random samples are seeded and stay in the box")
{
    const SigmaBox box = SigmaBox::uniform(3, 0.5, 2.0);
    const auto a = sample_box(box, SampleSpec{0, 50, 7});
    const auto b = sample_box(box, SampleSpec{0, 50, 7});
    const auto c = sample_box(box, SampleSpec{0, 50, 8});
    CHECK(a == b);
    CHECK(a != c);
    for (const auto& v : a)
        CHECK(box.contains(v));
    CHECK_THROWS(sample_box(box, SampleSpec{200, 0, 0, 1000}));
}

TEST_CASE("direction helpers")
{
    CHECK(unit_vector(3, 1) == std::vector<double>{0, 1, 0});
    CHECK(all_but(3, 1) == std::vector<double>{1, 0, 1});
    CHECK(deeper_than(3, 1) == std::vector<double>{0, 0, 1});
    CHECK(shallower_than(3, 1) == std::vector<double>{1, 0, 0});
    CHECK(shallower_than(3, 0) == std::vector<double>{0, 0, 0});
}

TEST_CASE("find_delta regression fixture on the uniform three-layer box")
{
    const MeasurementModel model = three_ring(20);
    const SigmaBox box = SigmaBox::uniform(3, 0.5, 2.0);
    const auto samples = sample_box(box, SampleSpec{3, 0, 0});
    const double delta = find_delta(model, box, samples, 2, 2.0, 2.0, 1e-6);
    CHECK(delta == 0.0078125);

    // Cross-check directly: the condition holds at delta and fails at 2 delta.
    auto condition = [&](double d) {
        double worst = INFINITY;
        for (const auto& s : samples) {
            const JacobianStack jac = free_jacobian(model, box, s);
            const std::vector<double> dir{d, d, -1.0};
            worst = std::min(worst, lambda_max(jac.directional(dir)).value);
        }
        return worst;
    };
    CHECK(condition(delta) >= 1e-6);
    CHECK(condition(2.0 * delta) < 1e-6);
}

TEST_CASE("find_delta at the outermost layer returns C or throws")
{
    const MeasurementModel model = three_ring(20);
    const SigmaBox box = pinned_box();
    const auto samples = sample_box(box, SampleSpec{3, 0, 0});
    CHECK(find_delta(model, box, samples, 0, 1.0, 1.0, 1e-9) == 1.0);
    CHECK_THROWS_AS(find_delta(model, box, samples, 0, 1.0, 1e12, 1e-9), NoDefiniteness);
}

TEST_CASE("three free layers: m = 20 is not enough, m = 40 is")
{
    const SigmaBox box = SigmaBox::uniform(3, 0.5, 2.0);
    CalibrationOptions opts;
    opts.epsilon = 1e-6;
    try {
        calibrate(three_ring(20), box, SampleSpec{3, 0, 0}, opts);
        FAIL("expected NoDefiniteness");
    } catch (const NoDefiniteness& e) {
        CHECK(e.layer() == 0);
    }
    const CalibrationCertificate cert = calibrate(three_ring(40), box, SampleSpec{3, 0, 0}, opts);
    CHECK(cert.lambda > 0.0);
    CHECK(cert.deltas.back() == 1.0);
    CHECK(cert.deltas[1] == 0.00390625);
    for (std::size_t j = 1; j < 3; ++j)
        CHECK(cert.deltas[j - 1] <= cert.deltas[j]);
}

TEST_CASE("pinned three-ring certificate at m = 20")
{
    const MeasurementModel model = three_ring(20);
    const CalibrationCertificate cert = calibrate(model, pinned_box(), SampleSpec{3, 0, 0});
    CHECK(cert.C == 1.0);
    CHECK(cert.free_layers == std::vector<std::size_t>{1, 2});
    CHECK(cert.sample_count == 9);
    REQUIRE(cert.c.size() == 2);
    CHECK(cert.c[1] == 1.0);
    CHECK(cert.c[0] == doctest::Approx(64.0 / 3.0).epsilon(1e-15));
    CHECK(cert.lambda > 0.0);
    CHECK(cert.lambda == doctest::Approx(1.5937486020121555e-05).epsilon(1e-9));

    // lambda is the minimum of the definiteness margin over its own samples
    double worst = INFINITY;
    for (const auto& s : sample_box(cert.box, cert.sample_spec))
        worst = std::min(worst, definiteness_margin(cert, model, s));
    CHECK(worst == cert.lambda);

    SampleSpec finer = cert.sample_spec;
    finer.grid_per_axis = 5;
    const auto report = verify_certificate(cert, model, sample_box(cert.box, finer));
    CHECK(report.samples == 25);
    CHECK(report.ok());
    CHECK(report.min_definiteness >= cert.lambda);
}

TEST_CASE("verify_certificate flags an inflated lambda")
{
    const MeasurementModel model = three_ring(20);
    CalibrationCertificate cert = calibrate(model, pinned_box(), SampleSpec{3, 0, 0});
    cert.lambda *= 10.0;
    const auto report = verify_certificate(cert, model, sample_box(cert.box, cert.sample_spec));
    CHECK_FALSE(report.ok());
    for (const auto& v : report.violations)
        CHECK_FALSE(v.definiteness_lost);
}

TEST_CASE("single free layer: c = 1")
{
    const MeasurementModel model(Geometry({0.5}), 4);
    const CalibrationCertificate cert = calibrate(model, SigmaBox({1.0, 0.5}, {1.0, 2.0}), SampleSpec{3, 0, 0});
    CHECK(cert.c == std::vector<double>{1.0});
    CHECK(cert.C == 0.0);
}

TEST_CASE("weighted norm")
{
    const std::vector<double> c{2.0, 0.5};
    CHECK(weighted_norm(c, std::vector<double>{-1.0, 3.0}) == 2.0);
    CHECK(weighted_norm(c, std::vector<double>{0.1, 0.0}) == doctest::Approx(0.2));
}

TEST_CASE("certificate JSON round trip is bit exact")
{
    const MeasurementModel model = three_ring(20);
    CalibrationCertificate cert = calibrate(model, pinned_box(), SampleSpec{3, 4, 99});
    const auto path = std::filesystem::temp_directory_path() / "convexeit_cert_roundtrip.json";
    save_certificate(path.string(), cert);
    const CalibrationCertificate back = load_certificate(path.string());
    std::filesystem::remove(path);
    CHECK(back.deltas == cert.deltas);
    CHECK(back.c == cert.c);
    CHECK(back.lambda == cert.lambda);
    CHECK(back.epsilon == cert.epsilon);
    CHECK(back.C == cert.C);
    CHECK(back.m == cert.m);
    CHECK(back.box == cert.box);
    CHECK(back.sample_spec == cert.sample_spec);
    CHECK(back.sample_count == cert.sample_count);
    CHECK(back.radii == cert.radii);
    CHECK(to_json(back).dump() == to_json(cert).dump());
}

TEST_CASE("malformed certificates are rejected")
{
    nlohmann::json j = to_json(calibrate(three_ring(20), pinned_box(), SampleSpec{3, 0, 0}));
    j["c"] = {1.0};
    CHECK_THROWS(certificate_from_json(j));
    CHECK_THROWS(certificate_from_json(nlohmann::json::object()));
}
