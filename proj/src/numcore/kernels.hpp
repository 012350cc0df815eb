#pragma once

#include <cstddef>
#include <string>

namespace kplug::numcore::kern {

// Data-parallel inner loops behind the tensor ops. Two implementations exist:
// plain scalar reference kernels and AVX2 variants compiled in their own
// translation unit with -mavx2. The AVX2 kernels follow the exact per-element
// operation order of the scalar ones (separate mul + add, no FMA; the whole
// project builds with -ffp-contract=off), so both produce bit-identical
// results and the equivalence tests assert exact equality. Dispatch happens
// once at first use based on CPU support.
//
// GEMM conventions (row-major, all accumulate into c):
//   nn: c(n,m) += a(n,k) * b(k,m)
//   tn: c(n,m) += a(k,n)^T * b(k,m)
//   nt: c(n,m) += a(n,k) * b(m,k)^T
struct Kernels {
    const char* name;

    void (*add)(const double* a, const double* b, double* out, size_t n);
    void (*mul)(const double* a, const double* b, double* out, size_t n);
    void (*axpy)(double alpha, const double* x, double* y, size_t n); // y += alpha*x
    void (*scale)(double alpha, const double* x, double* out, size_t n);

    void (*gemm_nn)(const double* a, const double* b, double* c, size_t n, size_t k, size_t m);
    void (*gemm_tn)(const double* a, const double* b, double* c, size_t n, size_t k, size_t m);
    void (*gemm_nt)(const double* a, const double* b, double* c, size_t n, size_t k, size_t m);

    // One fused Adam step over a parameter block. bc1/bc2 are the bias
    // corrections 1-beta^t; wd is decoupled weight decay.
    void (*adam_update)(double* p, double* g, double* m, double* v, size_t n, double lr,
                        double beta1, double beta2, double eps, double bc1, double bc2, double wd);
};

const Kernels& scalar_kernels();
bool avx2_supported();
const Kernels& avx2_kernels(); // valid only if avx2_supported()

// Active table: AVX2 when the CPU has it, scalar otherwise.
const Kernels& active();

// Test hook: force a specific implementation ("scalar", "avx2", "auto").
void force_impl(const std::string& name);

} // namespace kplug::numcore::kern
