#include "convexeit/properties.hpp"

#include <doctest.h>

#include <algorithm>

using namespace convexeit;

namespace {

const PropertyResult& find(const std::vector<PropertyResult>& results, const std::string& name)
{
    const auto it = std::find_if(results.begin(), results.end(), [&](const PropertyResult& r) { return r.name == name; });
    REQUIRE(it != results.end());
    return *it;
}

PropertyConfig four_layers(std::size_t trials)
{
    PropertyConfig pc{Geometry({0.8, 0.55, 0.3}), 16, SigmaBox::uniform(4, 0.3, 3.0)};
    pc.trials = trials;
    pc.seed = 21;
    return pc;
}

}  // namespace

TEST_CASE("all suites pass on a four-layer disk")
{
    const auto results = run_property_suites(four_layers(300));
    CHECK(results.size() == 7);
    for (const PropertyResult& r : results) {
        CAPTURE(r.name);
        CHECK(r.passed());
        CHECK_FALSE(r.skipped);
        CHECK(r.trials == 300);
    }
}

TEST_CASE("suites are deterministic in the seed")
{
    const auto a = run_property_suites(four_layers(50));
    const auto b = run_property_suites(four_layers(50));
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(a[k].worst == b[k].worst);
}

TEST_CASE("a flipped Jacobian sign is caught")
{
    PropertyConfig pc = four_layers(50);
    pc.flip_jacobian_sign = true;
    const auto results = run_property_suites(pc);
    CHECK_FALSE(find(results, "jacobian_monotonicity").passed());
    CHECK_FALSE(find(results, "jacobian_finite_difference").passed());
    CHECK(find(results, "monotonicity").passed());
}

TEST_CASE("a single layer skips the multi-layer suite")
{
    PropertyConfig pc{Geometry(), 8, SigmaBox::uniform(1, 0.5, 2.0)};
    pc.trials = 20;
    const auto results = run_property_suites(pc);
    const PropertyResult& lp = find(results, "localized_potentials");
    CHECK(lp.skipped);
    CHECK(lp.passed());
    CHECK(find(results, "monotonicity").passed());
}

TEST_CASE("mismatched box is rejected")
{
    PropertyConfig pc{Geometry({0.5}), 8, SigmaBox::uniform(3, 0.5, 2.0)};
    CHECK_THROWS_AS(run_property_suites(pc), std::invalid_argument);
}
