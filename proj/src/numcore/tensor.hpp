#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace kplug::numcore {

struct TensorImpl {
    std::vector<size_t> shape;
    std::vector<double> data;
    std::vector<double> grad; // empty until touched by backward
    bool requires_grad = false;
};

// Value-semantic handle to shared storage; copying a Tensor aliases it.
// Shape is fixed at creation. All data is row-major 64-bit float.
class Tensor {
  public:
    Tensor() = default;

    static Tensor zeros(std::vector<size_t> shape, bool requires_grad = false);
    static Tensor full(std::vector<size_t> shape, double value, bool requires_grad = false);
    static Tensor from(std::vector<size_t> shape, std::vector<double> data,
                       bool requires_grad = false);
    static Tensor scalar(double v, bool requires_grad = false);

    bool defined() const { return p_ != nullptr; }
    const std::vector<size_t>& shape() const { return p_->shape; }
    size_t rank() const { return p_->shape.size(); }
    size_t size() const { return p_->data.size(); }

    // Row/column view: rank-1 tensors count as a single row.
    size_t rows() const { return rank() <= 1 ? 1 : p_->shape[0]; }
    size_t cols() const;

    std::span<const double> data() const { return p_->data; }
    std::span<double> data_mut() { return p_->data; }
    double at(size_t i) const { return p_->data[i]; }
    double& at_mut(size_t i) { return p_->data[i]; }
    double item() const; // scalar value; contract error if size != 1

    bool requires_grad() const { return p_->requires_grad; }
    void set_requires_grad(bool rg) { p_->requires_grad = rg; }

    // Gradient buffers are auxiliary training state shared through the
    // handle, so these are const: a const Tensor& can still receive grads.
    bool has_grad() const { return !p_->grad.empty(); }
    std::span<const double> grad() const { return p_->grad; }
    std::span<double> grad_mut() const { return p_->grad; }
    void ensure_grad() const;       // allocate zeroed grad buffer if absent
    void zero_grad() const;         // zero (and allocate) the grad buffer
    void drop_grad() const { p_->grad.clear(); }

    Tensor clone() const; // deep copy of values (grad not copied)

    TensorImpl* impl() const { return p_.get(); }
    std::string shape_str() const;

  private:
    explicit Tensor(std::shared_ptr<TensorImpl> p) : p_(std::move(p)) {}
    std::shared_ptr<TensorImpl> p_;
};

size_t shape_numel(const std::vector<size_t>& shape);
std::string shape_to_string(const std::vector<size_t>& shape);

} // namespace kplug::numcore
