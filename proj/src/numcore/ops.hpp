#pragma once

#include "numcore/rng.hpp"
#include "numcore/tensor.hpp"

#include <string>
#include <vector>

namespace kplug::numcore {

// Forward operations. Each op validates shapes, computes the output, and --
// when a tape is active and some input requires a gradient -- records a
// backward closure. Gradients accumulate into .grad of every tensor that
// requires one.
//
// Broadcasting is deliberately minimal: add/mul accept equal shapes, or a
// rank-1 right operand matching the left operand's last dimension (applied
// per row).

Tensor matmul(const Tensor& a, const Tensor& b); // (n,k) x (k,m) -> (n,m)
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor softmax_lastdim(const Tensor& x);
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);
Tensor gelu(const Tensor& x); // tanh approximation
Tensor embedding_lookup(const Tensor& table, const std::vector<int>& ids);
Tensor concat_rows(const std::vector<Tensor>& parts); // rank-1 part = one row
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor slice_rows(const Tensor& x, size_t start, size_t len);
Tensor slice_cols(const Tensor& x, size_t start, size_t len);
Tensor transpose(const Tensor& x);
// Mean negative log-likelihood over rows; targets are class indices per row.
Tensor cross_entropy_logits(const Tensor& logits, const std::vector<int>& targets);
Tensor dropout(const Tensor& x, double rate, Rng& rng, bool train);
Tensor sum(const Tensor& x);

// Bernoulli(1-rate) mask scaled by 1/(1-rate); the mask dropout() applies.
Tensor dropout_mask(Rng& rng, const std::vector<size_t>& shape, double rate);

// Populates .grad of every requires-grad tensor reachable from `loss`, then
// clears the active tape. `loss` must be a scalar produced on the active tape.
void backward(const Tensor& loss);

size_t argmax(std::span<const double> v); // ties break to the lowest index

// Generic dispatcher over the op vocabulary; used by the gradient test
// harness to drive every op through one entry point.
enum class OpKind {
    matmul,
    add,
    mul,
    softmax_lastdim,
    layer_norm,
    gelu,
    embedding_lookup,
    concat,
    slice,
    transpose,
    cross_entropy_logits,
    dropout,
    scale,
};

struct OpAttrs {
    double scalar = 1.0;
    double rate = 0.0;
    double eps = 1e-5;
    bool train = false;
    Rng* rng = nullptr;
    std::vector<int> ids; // embedding ids / cross-entropy targets
    size_t start = 0, len = 0;
    int axis = 0; // concat/slice: 0 = rows, 1 = cols
};

Tensor forward_op(OpKind kind, const std::vector<Tensor>& inputs, const OpAttrs& attrs);
OpKind op_kind_from_string(const std::string& name);

} // namespace kplug::numcore
