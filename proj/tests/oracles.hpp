#pragma once

// Test-only oracles, independent of the library's backward pass:
//  - central finite differences for gradient checks
//  - a tiny brute-force link-prediction ranker lives in test_transe.cpp
// These never call kplug::numcore::backward themselves.

#include "numcore/rng.hpp"
#include "numcore/tape.hpp"
#include "numcore/tensor.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

using kplug::numcore::Rng;
using kplug::numcore::Tensor;

// Central finite difference d loss / d x[i] with step h, evaluated through an
// arbitrary scalar-producing forward function.
inline double central_diff(const std::function<double()>& loss_fn, Tensor& x, size_t i, double h) {
    const double orig = x.at(i);
    x.data_mut()[i] = orig + h;
    const double up = loss_fn();
    x.data_mut()[i] = orig - h;
    const double down = loss_fn();
    x.data_mut()[i] = orig;
    return (up - down) / (2.0 * h);
}

struct GradCheckResult {
    double max_rel_err = 0.0;
    size_t checked = 0;
};

// Compares analytic grads (already populated on `leaves`) against central
// differences of `loss_fn`, sampling at most `max_coords` coordinates per
// tensor. Relative error uses an absolute floor so near-zero gradients do not
// blow up the ratio.
inline GradCheckResult gradcheck(const std::function<double()>& loss_fn,
                                 std::vector<Tensor>& leaves, Rng& rng,
                                 size_t max_coords = 200, double h = 1e-5) {
    GradCheckResult res;
    for (Tensor& leaf : leaves) {
        const size_t n = leaf.size();
        const size_t k = std::min(n, max_coords);
        auto idx = rng.sample_indices(n, k);
        for (size_t i : idx) {
            const double num = central_diff(loss_fn, leaf, i, h);
            const double ana = leaf.has_grad() ? leaf.grad()[i] : 0.0;
            const double denom = std::max({std::fabs(num), std::fabs(ana), 1e-3});
            res.max_rel_err = std::max(res.max_rel_err, std::fabs(num - ana) / denom);
            ++res.checked;
        }
    }
    return res;
}

inline Tensor random_tensor(std::vector<size_t> shape, Rng& rng, double lo = -1.0, double hi = 1.0,
                            bool requires_grad = true) {
    Tensor t = Tensor::zeros(std::move(shape), requires_grad);
    for (size_t i = 0; i < t.size(); ++i) t.data_mut()[i] = rng.uniform(lo, hi);
    return t;
}

} // namespace oracles
