#include "stochord/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace stochord::kernels::avx2 {

namespace {
inline double hsum(__m256d v) {
    // Fixed lane order: (l0 + l2) + (l1 + l3).
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }
}  // namespace

double weighted_sq_diff(const double* a, const double* b, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(d, d), acc);
    }
    return hsum(acc) + scalar::weighted_sq_diff(a + i, b + i, w + i, n - i);
}

std::size_t count_leq(const double* x, const double* y, std::size_t n) {
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), _CMP_LE_OQ);
        c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
    }
    return c + scalar::count_leq(x + i, y + i, n - i);
}

void classify_sign(const double* a, const double* b, std::size_t n, double rtol, std::int8_t* out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d r = _mm256_set1_pd(rtol);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d d = _mm256_sub_pd(va, vb);
        const __m256d tol = _mm256_mul_pd(r, _mm256_max_pd(one, _mm256_add_pd(vabs(va), vabs(vb))));
        const __m256d neg_tol = _mm256_sub_pd(_mm256_setzero_pd(), tol);
        const int pos = _mm256_movemask_pd(_mm256_cmp_pd(d, tol, _CMP_GT_OQ));
        const int neg = _mm256_movemask_pd(_mm256_cmp_pd(d, neg_tol, _CMP_LT_OQ));
        for (int k = 0; k < 4; ++k) {
            out[i + k] = static_cast<std::int8_t>(((pos >> k) & 1) - ((neg >> k) & 1));
        }
    }
    scalar::classify_sign(a + i, b + i, n - i, rtol, out + i);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        m = _mm256_max_pd(m, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double r = scalar::max_abs_diff(a + i, b + i, n - i);
    for (double v : lanes) r = v > r ? v : r;
    return r;
}

}  // namespace stochord::kernels::avx2
