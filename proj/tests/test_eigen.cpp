#include "convexeit/kernels/kernels.hpp"
#include "convexeit/symmetric_eigen.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace convexeit;

namespace {

SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    SymMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k)
            a.set(i, k, g(rng));
    return a;
}

double reconstruction_error(const SymMatrix& a, const EigenDecomposition& e)
{
    const std::size_t n = a.order();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                s += e.vectors[t][i] * e.values[t] * e.vectors[t][k];
            err = std::max(err, std::abs(s - a(i, k)));
        }
    return err;
}

}  // namespace

TEST_CASE("diagonal input is returned sorted")
{
    const std::vector<double> d{3.0, -1.0, 2.0, 2.0};
    const EigenDecomposition e = eigh(SymMatrix::diagonal(d));
    CHECK(e.values == std::vector<double>{-1.0, 2.0, 2.0, 3.0});
}

TEST_CASE("2x2 closed form")
{
    SymMatrix a(2);
    a.set(0, 0, 2.0);
    a.set(1, 1, 2.0);
    a.set(0, 1, 1.0);
    const EigenDecomposition e = eigh(a);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(std::abs(e.vectors[1][0]) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("random matrices: orthonormal eigenvectors and exact reconstruction")
{
    std::mt19937_64 rng(3);
    for (std::size_t n : {1u, 2u, 5u, 20u, 41u}) {
        CAPTURE(n);
        const SymMatrix a = random_symmetric(n, rng);
        const EigenDecomposition e = eigh(a);
        for (std::size_t k = 1; k < n; ++k)
            CHECK(e.values[k - 1] <= e.values[k]);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += e.vectors[p][i] * e.vectors[q][i];
                CHECK(std::abs(s - (p == q ? 1.0 : 0.0)) <= 1e-12);
            }
        CHECK(reconstruction_error(a, e) <= 1e-12 * (1.0 + a.frobenius_norm()));
        double trace = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            trace += a(i, i);
            sum += e.values[i];
        }
        CHECK(sum == doctest::Approx(trace).epsilon(1e-12).scale(a.frobenius_norm()));
    }
}

TEST_CASE("scalar and SIMD rotations give matching spectra")
{
    using namespace convexeit::kernels;
    if (!isa_supported(Isa::avx2))
        return;
    std::mt19937_64 rng(9);
    const SymMatrix a = random_symmetric(30, rng);
    const Isa before = active_isa();
    force_isa(Isa::scalar);
    const EigenDecomposition ref = eigh(a);
    force_isa(Isa::avx2);
    const EigenDecomposition simd = eigh(a);
    force_isa(before);
    // rotate_pair is elementwise and bit exact, but the off-diagonal norm
    // uses a reduction, so sweep counts can differ by rounding only.
    for (std::size_t k = 0; k < 30; ++k)
        CHECK(std::abs(ref.values[k] - simd.values[k]) <= 1e-12 * a.frobenius_norm());
}

TEST_CASE("lambda_max, loewner_leq and spectral_norm")
{
    const std::vector<double> d{-5.0, 1.0, 2.0};
    const SymMatrix a = SymMatrix::diagonal(d);
    const TopEigenpair top = lambda_max(a);
    CHECK(top.value == doctest::Approx(2.0));
    CHECK(std::abs(top.vector[2]) == doctest::Approx(1.0));
    CHECK(spectral_norm(a) == doctest::Approx(5.0));
    CHECK(loewner_leq(a, SymMatrix::identity(3) + a, 0.0));
    CHECK_FALSE(loewner_leq(a, SymMatrix::identity(3), 0.5));
    CHECK(loewner_leq(a, SymMatrix::identity(3), 1.0));
}

TEST_CASE("non-finite entries are rejected")
{
    SymMatrix a(2);
    a.set(0, 1, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(eigh(a), std::invalid_argument);
    CHECK_THROWS(lambda_max(SymMatrix()));
}
