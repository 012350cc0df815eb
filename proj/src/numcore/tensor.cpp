#include "numcore/tensor.hpp"

#include "common/error.hpp"

namespace kplug::numcore {

size_t shape_numel(const std::vector<size_t>& shape) {
    size_t n = 1;
    for (size_t d : shape) n *= d;
    return n;
}

std::string shape_to_string(const std::vector<size_t>& shape) {
    std::string s = "(";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + ")";
}

Tensor Tensor::zeros(std::vector<size_t> shape, bool requires_grad) {
    return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(std::vector<size_t> shape, double value, bool requires_grad) {
    for (size_t d : shape) require(d > 0, "shape", "dimension sizes must be positive");
    auto impl = std::make_shared<TensorImpl>();
    impl->data.assign(shape_numel(shape), value);
    impl->shape = std::move(shape);
    impl->requires_grad = requires_grad;
    return Tensor(std::move(impl));
}

Tensor Tensor::from(std::vector<size_t> shape, std::vector<double> data, bool requires_grad) {
    for (size_t d : shape) require(d > 0, "shape", "dimension sizes must be positive");
    require(shape_numel(shape) == data.size(), "shape",
            "data length " + std::to_string(data.size()) + " does not match shape " +
                shape_to_string(shape));
    auto impl = std::make_shared<TensorImpl>();
    impl->shape = std::move(shape);
    impl->data = std::move(data);
    impl->requires_grad = requires_grad;
    return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double v, bool requires_grad) {
    return from({1}, {v}, requires_grad);
}

size_t Tensor::cols() const {
    if (rank() == 0) return 1;
    return p_->shape.back();
}

double Tensor::item() const {
    require(size() == 1, "contract", "item() on tensor of size " + std::to_string(size()));
    return p_->data[0];
}

void Tensor::ensure_grad() const {
    if (p_->grad.empty()) p_->grad.assign(p_->data.size(), 0.0);
}

void Tensor::zero_grad() const {
    p_->grad.assign(p_->data.size(), 0.0);
}

Tensor Tensor::clone() const {
    auto impl = std::make_shared<TensorImpl>();
    impl->shape = p_->shape;
    impl->data = p_->data;
    impl->requires_grad = p_->requires_grad;
    return Tensor(std::move(impl));
}

std::string Tensor::shape_str() const { return shape_to_string(p_->shape); }

} // namespace kplug::numcore
