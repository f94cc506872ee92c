// AVX2+FMA variants of the complex kernels. Compiled with -mavx2 -mfma on
// x86-64 only; the dispatcher never hands out this table unless the CPU
// reports both features.

#include "bellbound/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace bellbound::simd {

namespace {

// A __m256d holds two complex doubles as [re0, im0, re1, im1].

// Swaps re/im within each complex: [im0, re0, im1, re1].
inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0x5); }

// a * v for complex scalar a = (ar, ai) broadcast over the vector.
inline __m256d cmul_scalar(__m256d ar, __m256d ai, __m256d v) {
    return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swap_pairs(v)));
}

void axpy_avx2(std::size_t n, cd a, const cd* x, cd* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp       = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i    = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx  = _mm256_loadu_pd(xp + 2 * i);
        const __m256d vy  = _mm256_loadu_pd(yp + 2 * i);
        const __m256d out = _mm256_add_pd(vy, cmul_scalar(ar, ai, vx));
        _mm256_storeu_pd(yp + 2 * i, out);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(std::size_t n, cd a, const cd* x, cd* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp       = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i    = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(xp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, cmul_scalar(ar, ai, vx));
    }
    for (; i < n; ++i) y[i] = a * x[i];
}

cd dotc_avx2(std::size_t n, const cd* x, const cd* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    // odd slots sign-flipped so that acc_im collects xr*yi - xi*yr
    const __m256d odd_neg =
        _mm256_castsi256_pd(_mm256_set_epi64x(0x8000000000000000ll, 0,
                                              0x8000000000000000ll, 0));
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i  = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(xp + 2 * i);
        const __m256d vy = _mm256_loadu_pd(yp + 2 * i);
        acc_re           = _mm256_fmadd_pd(vx, vy, acc_re);
        const __m256d sw = _mm256_xor_pd(swap_pairs(vy), odd_neg);
        acc_im           = _mm256_fmadd_pd(vx, sw, acc_im);
    }
    alignas(32) double buf_re[4], buf_im[4];
    _mm256_store_pd(buf_re, acc_re);
    _mm256_store_pd(buf_im, acc_im);
    double re = buf_re[0] + buf_re[1] + buf_re[2] + buf_re[3];
    double im = buf_im[0] + buf_im[1] + buf_im[2] + buf_im[3];
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void rot_avx2(std::size_t n, cd* x, cd* y, double c, cd s) {
    double* xp       = reinterpret_cast<double*>(x);
    double* yp       = reinterpret_cast<double*>(y);
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    std::size_t i    = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(xp + 2 * i);
        const __m256d vy = _mm256_loadu_pd(yp + 2 * i);
        // s*y with fmaddsub, conj(s)*x with fmsubadd (sign of the imag part)
        const __m256d sy =
            _mm256_fmaddsub_pd(sr, vy, _mm256_mul_pd(si, swap_pairs(vy)));
        const __m256d scx =
            _mm256_fmsubadd_pd(sr, vx, _mm256_mul_pd(si, swap_pairs(vx)));
        _mm256_storeu_pd(xp + 2 * i, _mm256_fmadd_pd(cv, vx, sy));
        _mm256_storeu_pd(yp + 2 * i, _mm256_fmsub_pd(cv, vy, scx));
    }
    const cd sc = std::conj(s);
    for (; i < n; ++i) {
        const cd xv = x[i];
        const cd yv = y[i];
        x[i]        = c * xv + s * yv;
        y[i]        = -sc * xv + c * yv;
    }
}

} // namespace

const KernelTable& avx2() {
    static const KernelTable table{"avx2", axpy_avx2, scale_avx2, dotc_avx2,
                                   rot_avx2};
    return table;
}

} // namespace bellbound::simd

#endif // __AVX2__ && __FMA__
