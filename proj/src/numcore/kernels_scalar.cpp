#include "numcore/kernels.hpp"

#include <cmath>

namespace kplug::numcore::kern {

namespace {

void s_add(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void s_mul(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void s_axpy(double alpha, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_scale(double alpha, const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

// ikj loop order: every c[i][j] accumulates over kk in increasing order,
// which is the order the vector kernels replicate lane-wise.
void s_gemm_nn(const double* a, const double* b, double* c, size_t n, size_t k, size_t m) {
    for (size_t i = 0; i < n; ++i) {
        for (size_t kk = 0; kk < k; ++kk) {
            const double aik = a[i * k + kk];
            const double* brow = b + kk * m;
            double* crow = c + i * m;
            for (size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
        }
    }
}

void s_gemm_tn(const double* a, const double* b, double* c, size_t n, size_t k, size_t m) {
    for (size_t i = 0; i < n; ++i) {
        for (size_t kk = 0; kk < k; ++kk) {
            const double aik = a[kk * n + i];
            const double* brow = b + kk * m;
            double* crow = c + i * m;
            for (size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
        }
    }
}

void s_gemm_nt(const double* a, const double* b, double* c, size_t n, size_t k, size_t m) {
    for (size_t i = 0; i < n; ++i) {
        const double* arow = a + i * k;
        for (size_t j = 0; j < m; ++j) {
            const double* brow = b + j * k;
            double acc = c[i * m + j];
            for (size_t kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
            c[i * m + j] = acc;
        }
    }
}

void s_adam(double* p, double* g, double* m, double* v, size_t n, double lr, double beta1,
            double beta2, double eps, double bc1, double bc2, double wd) {
    for (size_t i = 0; i < n; ++i) {
        const double gi = g[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
        v[i] = beta2 * v[i] + (1.0 - beta2) * (gi * gi);
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * p[i]);
    }
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        "scalar", s_add, s_mul, s_axpy, s_scale, s_gemm_nn, s_gemm_tn, s_gemm_nt, s_adam,
    };
    return k;
}

} // namespace kplug::numcore::kern
