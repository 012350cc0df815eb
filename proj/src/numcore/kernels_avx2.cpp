// AVX2 kernel variants. This TU is compiled with -mavx2 and only ever entered
// after a runtime cpuid check. Every kernel performs, per output element, the
// same sequence of IEEE operations as its scalar reference (mul then add, no
// FMA), so results are bit-identical; _mm256_sqrt_pd is correctly rounded and
// matches std::sqrt.

#include "numcore/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <cmath>
#include <immintrin.h>

namespace kplug::numcore::kern {

namespace {

void v_add(const double* a, const double* b, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void v_mul(const double* a, const double* b, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void v_axpy(double alpha, const double* x, double* y, size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void v_scale(double alpha, const double* x, double* out, size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = alpha * x[i];
}

// Broadcast-row formulation: lanes run over j, the k accumulation stays in
// scalar order per element.
inline void row_accum(double aik, const double* brow, double* crow, size_t m) {
    const __m256d va = _mm256_set1_pd(aik);
    size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(brow + j));
        _mm256_storeu_pd(crow + j, _mm256_add_pd(_mm256_loadu_pd(crow + j), prod));
    }
    for (; j < m; ++j) crow[j] += aik * brow[j];
}

void v_gemm_nn(const double* a, const double* b, double* c, size_t n, size_t k, size_t m) {
    for (size_t i = 0; i < n; ++i) {
        for (size_t kk = 0; kk < k; ++kk) {
            row_accum(a[i * k + kk], b + kk * m, c + i * m, m);
        }
    }
}

void v_gemm_tn(const double* a, const double* b, double* c, size_t n, size_t k, size_t m) {
    for (size_t i = 0; i < n; ++i) {
        for (size_t kk = 0; kk < k; ++kk) {
            row_accum(a[kk * n + i], b + kk * m, c + i * m, m);
        }
    }
}

void v_gemm_nt(const double* a, const double* b, double* c, size_t n, size_t k, size_t m) {
    for (size_t i = 0; i < n; ++i) {
        const double* arow = a + i * k;
        size_t j = 0;
        for (; j + 4 <= m; j += 4) {
            // four independent dot products, each accumulating in k order
            __m256d acc = _mm256_loadu_pd(c + i * m + j);
            const double* b0 = b + (j + 0) * k;
            const double* b1 = b + (j + 1) * k;
            const double* b2 = b + (j + 2) * k;
            const double* b3 = b + (j + 3) * k;
            for (size_t kk = 0; kk < k; ++kk) {
                __m256d bv = _mm256_set_pd(b3[kk], b2[kk], b1[kk], b0[kk]);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(arow[kk]), bv));
            }
            _mm256_storeu_pd(c + i * m + j, acc);
        }
        for (; j < m; ++j) {
            const double* brow = b + j * k;
            double acc = c[i * m + j];
            for (size_t kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
            c[i * m + j] = acc;
        }
    }
}

void v_adam(double* p, double* g, double* m, double* v, size_t n, double lr, double beta1,
            double beta2, double eps, double bc1, double bc2, double wd) {
    const __m256d vb1 = _mm256_set1_pd(beta1), vb1c = _mm256_set1_pd(1.0 - beta1);
    const __m256d vb2 = _mm256_set1_pd(beta2), vb2c = _mm256_set1_pd(1.0 - beta2);
    const __m256d vbc1 = _mm256_set1_pd(bc1), vbc2 = _mm256_set1_pd(bc2);
    const __m256d veps = _mm256_set1_pd(eps), vlr = _mm256_set1_pd(lr), vwd = _mm256_set1_pd(wd);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d gi = _mm256_loadu_pd(g + i);
        __m256d mi = _mm256_add_pd(_mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(vb1c, gi));
        __m256d vi = _mm256_add_pd(_mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
                                   _mm256_mul_pd(vb2c, _mm256_mul_pd(gi, gi)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        __m256d mhat = _mm256_div_pd(mi, vbc1);
        __m256d vhat = _mm256_div_pd(vi, vbc2);
        __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        __m256d pi = _mm256_loadu_pd(p + i);
        __m256d step = _mm256_add_pd(_mm256_div_pd(mhat, denom), _mm256_mul_pd(vwd, pi));
        _mm256_storeu_pd(p + i, _mm256_sub_pd(pi, _mm256_mul_pd(vlr, step)));
    }
    for (; i < n; ++i) {
        const double gi = g[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
        v[i] = beta2 * v[i] + (1.0 - beta2) * (gi * gi);
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * p[i]);
    }
}

} // namespace

const Kernels& avx2_kernels() {
    static const Kernels k = {
        "avx2", v_add, v_mul, v_axpy, v_scale, v_gemm_nn, v_gemm_tn, v_gemm_nt, v_adam,
    };
    return k;
}

} // namespace kplug::numcore::kern

#else // non-x86: no AVX2 table; dispatch never asks for it

namespace kplug::numcore::kern {
const Kernels& avx2_kernels() { return scalar_kernels(); }
} // namespace kplug::numcore::kern

#endif
