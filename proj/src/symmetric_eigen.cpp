#include "convexeit/symmetric_eigen.hpp"

#include "convexeit/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace convexeit {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-14;

double off_diagonal_mass(const std::vector<double>& a, std::size_t m)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            acc += 2.0 * a[i * m + j] * a[i * m + j];
    return std::sqrt(acc);
}

}  // namespace

EigenDecomposition eigh(const SymMatrix& input)
{
    const std::size_t m = input.order();
    for (double v : input.values())
        if (!std::isfinite(v))
            throw std::invalid_argument("eigh: non-finite matrix entry");

    std::vector<double> a(input.values().begin(), input.values().end());
    // Rows of vt are the running eigenvector estimates.
    std::vector<double> vt(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        vt[i * m + i] = 1.0;

    const double target = kOffDiagonalTol * input.frobenius_norm();
    int sweeps = 0;
    while (sweeps < kMaxSweeps && off_diagonal_mass(a, m) > target) {
        ++sweeps;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = a[p * m + q];
                if (apq == 0.0)
                    continue;
                const double app = a[p * m + p];
                const double aqq = a[q * m + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                std::span<double> row_p(a.data() + p * m, m);
                std::span<double> row_q(a.data() + q * m, m);
                kernels::rotate_pair(row_p, row_q, c, s);
                row_p[p] = app - t * apq;
                row_q[q] = aqq + t * apq;
                row_p[q] = 0.0;
                row_q[p] = 0.0;
                for (std::size_t r = 0; r < m; ++r) {
                    a[r * m + p] = row_p[r];
                    a[r * m + q] = row_q[r];
                }
                kernels::rotate_pair(std::span<double>(vt.data() + p * m, m), std::span<double>(vt.data() + q * m, m),
                                     c, s);
            }
        }
    }
    if (off_diagonal_mass(a, m) > target)
        throw std::runtime_error("eigh: Jacobi iteration did not converge");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i * m + i] < a[j * m + j]; });

    EigenDecomposition out;
    out.sweeps = sweeps;
    out.values.reserve(m);
    out.vectors.reserve(m);
    for (std::size_t k : order) {
        out.values.push_back(a[k * m + k]);
        out.vectors.emplace_back(vt.begin() + static_cast<std::ptrdiff_t>(k * m),
                                 vt.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
    }
    return out;
}

TopEigenpair lambda_max(const SymMatrix& a)
{
    if (a.order() == 0)
        throw std::invalid_argument("lambda_max of an empty matrix");
    EigenDecomposition d = eigh(a);
    return {d.values.back(), std::move(d.vectors.back())};
}

bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol)
{
    return lambda_max(a - b).value <= tol;
}

double spectral_norm(const SymMatrix& a)
{
    const EigenDecomposition d = eigh(a);
    return std::max(std::abs(d.values.front()), std::abs(d.values.back()));
}

}  // namespace convexeit
