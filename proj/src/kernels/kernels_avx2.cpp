#include "convexeit/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define CONVEXEIT_HAVE_AVX2 1
#include <immintrin.h>
#else
#define CONVEXEIT_HAVE_AVX2 0
#endif

namespace convexeit::kernels {

#if CONVEXEIT_HAVE_AVX2
namespace {

// Each lane performs exactly the scalar sequence of IEEE operations (no FMA),
// so the vector body and the scalar tail agree with the reference bit-for-bit.

__attribute__((target("avx2"))) void interface_step_avx2(double* x, const double* scale, double s,
                                                          std::size_t count)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const __m256d xv = _mm256_loadu_pd(x + k);
        const __m256d a = _mm256_add_pd(one, xv);
        const __m256d b = _mm256_sub_pd(one, xv);
        const __m256d sb = _mm256_mul_pd(sv, b);
        const __m256d g = _mm256_div_pd(_mm256_sub_pd(a, sb), _mm256_add_pd(a, sb));
        _mm256_storeu_pd(x + k, _mm256_mul_pd(_mm256_loadu_pd(scale + k), g));
    }
    for (; k < count; ++k) {
        const double a = 1.0 + x[k];
        const double b = 1.0 - x[k];
        const double sb = s * b;
        x[k] = scale[k] * ((a - sb) / (a + sb));
    }
}

__attribute__((target("avx2"))) void interface_step_tangent_avx2(double* x, double* dx, std::size_t ntan,
                                                                  const double* scale, double s,
                                                                  const double* ds, std::size_t count)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d sv = _mm256_set1_pd(s);
    const __m256d four_s = _mm256_set1_pd(4.0 * s);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const __m256d xv = _mm256_loadu_pd(x + k);
        const __m256d a = _mm256_add_pd(one, xv);
        const __m256d b = _mm256_sub_pd(one, xv);
        const __m256d sb = _mm256_mul_pd(sv, b);
        const __m256d den = _mm256_add_pd(a, sb);
        const __m256d den2 = _mm256_mul_pd(den, den);
        const __m256d g = _mm256_div_pd(_mm256_sub_pd(a, sb), den);
        const __m256d gx = _mm256_div_pd(four_s, den2);
        const __m256d gs = _mm256_div_pd(_mm256_xor_pd(sign, _mm256_mul_pd(two, _mm256_mul_pd(a, b))), den2);
        const __m256d f = _mm256_loadu_pd(scale + k);
        for (std::size_t t = 0; t < ntan; ++t) {
            double* row = dx + t * count + k;
            const __m256d d = _mm256_loadu_pd(row);
            const __m256d upd = _mm256_add_pd(_mm256_mul_pd(gx, d), _mm256_mul_pd(gs, _mm256_set1_pd(ds[t])));
            _mm256_storeu_pd(row, _mm256_mul_pd(f, upd));
        }
        _mm256_storeu_pd(x + k, _mm256_mul_pd(f, g));
    }
    for (; k < count; ++k) {
        const double a = 1.0 + x[k];
        const double b = 1.0 - x[k];
        const double sb = s * b;
        const double den = a + sb;
        const double den2 = den * den;
        const double g = (a - sb) / den;
        const double gx = (4.0 * s) / den2;
        const double gs = -(2.0 * (a * b)) / den2;
        const double f = scale[k];
        for (std::size_t t = 0; t < ntan; ++t) {
            double& d = dx[t * count + k];
            d = f * (gx * d + gs * ds[t]);
        }
        x[k] = f * g;
    }
}

__attribute__((target("avx2"))) void rotate_pair_avx2(double* u, double* v, double c, double s,
                                                       std::size_t count)
{
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const __m256d uk = _mm256_loadu_pd(u + k);
        const __m256d vk = _mm256_loadu_pd(v + k);
        _mm256_storeu_pd(u + k, _mm256_sub_pd(_mm256_mul_pd(cv, uk), _mm256_mul_pd(sv, vk)));
        _mm256_storeu_pd(v + k, _mm256_add_pd(_mm256_mul_pd(sv, uk), _mm256_mul_pd(cv, vk)));
    }
    for (; k < count; ++k) {
        const double uk = u[k];
        const double vk = v[k];
        u[k] = c * uk - s * vk;
        v[k] = s * uk + c * vk;
    }
}

__attribute__((target("avx2"))) double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

__attribute__((target("avx2"))) double dot_avx2(const double* a, const double* b, std::size_t count)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    double total = hsum(acc);
    for (; k < count; ++k)
        total += a[k] * b[k];
    return total;
}

__attribute__((target("avx2"))) double sum_sq_diff_avx2(const double* a, const double* b, std::size_t count)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum(acc);
    for (; k < count; ++k) {
        const double d = a[k] - b[k];
        total += d * d;
    }
    return total;
}

}  // namespace

const KernelTable* avx2_table()
{
    static const KernelTable table{
        interface_step_avx2, interface_step_tangent_avx2, rotate_pair_avx2, dot_avx2, sum_sq_diff_avx2,
    };
    return &table;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace convexeit::kernels
