#include "convexeit/sym_matrix.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

using namespace convexeit;

TEST_CASE("set mirrors across the diagonal")
{
    SymMatrix a(3);
    a.set(0, 2, 4.5);
    CHECK(a(0, 2) == 4.5);
    CHECK(a(2, 0) == 4.5);
    CHECK(a.diag() == std::vector<double>{0, 0, 0});
}

TEST_CASE("arithmetic and norms")
{
    const std::vector<double> d{1.0, -2.0, 3.0};
    SymMatrix a = SymMatrix::diagonal(d);
    SymMatrix b = SymMatrix::identity(3);
    SymMatrix c = a + 2.0 * b;
    CHECK(c.diag() == std::vector<double>{3.0, 0.0, 5.0});
    c -= a;
    CHECK(c == 2.0 * b);
    CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(14.0)));
    a.add_identity(1.0);
    CHECK(a.diag() == std::vector<double>{2.0, -1.0, 4.0});
    const std::vector<double> v{1.0, 1.0, 1.0};
    CHECK(a.quadratic_form(v) == doctest::Approx(5.0));
    CHECK_THROWS_AS(a += SymMatrix(2), std::invalid_argument);
}

TEST_CASE("from_row_major enforces symmetry")
{
    const std::vector<double> ok{1, 2, 2, 3};
    CHECK(SymMatrix::from_row_major(2, ok)(1, 0) == 2);
    const std::vector<double> skew{1, 2, 2.1, 3};
    CHECK_THROWS_AS(SymMatrix::from_row_major(2, skew), std::invalid_argument);
    CHECK(SymMatrix::from_row_major(2, skew, 0.2)(1, 0) == 2);
    CHECK_THROWS_AS(SymMatrix::from_row_major(3, ok), std::invalid_argument);
}

TEST_CASE("CSV round trip is bit exact")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    SymMatrix a(7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t k = i; k < 7; ++k)
            a.set(i, k, u(rng) * std::pow(10.0, static_cast<double>(i) - 4.0));
    a.set(0, 0, std::numeric_limits<double>::denorm_min());
    a.set(1, 1, 0.1);
    a.set(2, 2, -0.0);

    std::stringstream ss;
    write_csv(ss, a);
    const SymMatrix b = read_csv(ss);
    REQUIRE(b.order() == 7);
    CHECK(std::memcmp(a.values().data(), b.values().data(), 49 * sizeof(double)) == 0);
}

TEST_CASE("CSV reader handles comments and rejects malformed input")
{
    std::istringstream good("# header\n1,2\n2,5\n");
    const SymMatrix a = read_csv(good);
    CHECK(a(1, 1) == 5);

    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), std::invalid_argument);
    std::istringstream junk("1,x\n2,1\n");
    CHECK_THROWS_AS(read_csv(junk), std::invalid_argument);
    std::istringstream rect("1,2,3\n2,1,4\n");
    CHECK_THROWS_AS(read_csv(rect), std::invalid_argument);
    std::istringstream asym("1,2\n3,1\n");
    CHECK_THROWS_AS(read_csv(asym), std::invalid_argument);
}
