#include "numcore/ops.hpp"

#include "common/error.hpp"
#include "numcore/kernels.hpp"
#include "numcore/tape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kplug::numcore {

namespace {

bool tape_on() { return active_tape() != nullptr; }

bool grad_wanted(std::initializer_list<const Tensor*> ins) {
    if (!tape_on()) return false;
    for (const Tensor* t : ins)
        if (t->requires_grad()) return true;
    return false;
}

Tensor out_like(std::vector<size_t> shape, bool rg) {
    Tensor t = Tensor::zeros(std::move(shape));
    t.set_requires_grad(rg);
    return t;
}

void record(std::function<void()> fn) { active_tape()->record(std::move(fn)); }

[[noreturn]] void shape_fail(const std::string& op, const Tensor& a, const Tensor& b) {
    fail("shape", op + ": incompatible shapes " + a.shape_str() + " and " + b.shape_str());
}

// broadcast mode for add/mul
enum class Bcast { same, row_vec };

Bcast bcast_mode(const std::string& op, const Tensor& a, const Tensor& b) {
    if (a.shape() == b.shape()) return Bcast::same;
    if (b.rank() == 1 && a.rank() >= 1 && b.size() == a.cols()) return Bcast::row_vec;
    shape_fail(op, a, b);
}

} // namespace

size_t argmax(std::span<const double> v) {
    size_t best = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require(a.rank() == 2 && b.rank() == 2, "shape",
            "matmul: needs rank-2 operands, got " + a.shape_str() + " and " + b.shape_str());
    if (a.shape()[1] != b.shape()[0]) shape_fail("matmul", a, b);
    const size_t n = a.shape()[0], k = a.shape()[1], m = b.shape()[1];
    const bool rg = grad_wanted({&a, &b});
    Tensor out = out_like({n, m}, rg);
    kern::active().gemm_nn(a.data().data(), b.data().data(), out.data_mut().data(), n, k, m);
    if (rg) {
        record([a, b, out, n, k, m]() {
            if (a.requires_grad()) {
                a.ensure_grad();
                kern::active().gemm_nt(out.grad().data(), b.data().data(),
                                       a.grad_mut().data(), n, m, k);
            }
            if (b.requires_grad()) {
                b.ensure_grad();
                kern::active().gemm_tn(a.data().data(), out.grad().data(),
                                       b.grad_mut().data(), k, n, m);
            }
        });
    }
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    const Bcast mode = bcast_mode("add", a, b);
    const bool rg = grad_wanted({&a, &b});
    Tensor out = out_like(a.shape(), rg);
    if (mode == Bcast::same) {
        kern::active().add(a.data().data(), b.data().data(), out.data_mut().data(), a.size());
    } else {
        const size_t rows = a.size() / b.size(), d = b.size();
        for (size_t r = 0; r < rows; ++r)
            kern::active().add(a.data().data() + r * d, b.data().data(),
                               out.data_mut().data() + r * d, d);
    }
    if (rg) {
        record([a, b, out, mode]() {
            if (a.requires_grad()) {
                a.ensure_grad();
                kern::active().axpy(1.0, out.grad().data(), a.grad_mut().data(),
                                    a.size());
            }
            if (b.requires_grad()) {
                b.ensure_grad();
                auto bg = b.grad_mut();
                if (mode == Bcast::same) {
                    kern::active().axpy(1.0, out.grad().data(), bg.data(), b.size());
                } else {
                    const size_t d = b.size(), rows = a.size() / d;
                    for (size_t r = 0; r < rows; ++r)
                        kern::active().axpy(1.0, out.grad().data() + r * d, bg.data(), d);
                }
            }
        });
    }
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    const Bcast mode = bcast_mode("mul", a, b);
    const bool rg = grad_wanted({&a, &b});
    Tensor out = out_like(a.shape(), rg);
    if (mode == Bcast::same) {
        kern::active().mul(a.data().data(), b.data().data(), out.data_mut().data(), a.size());
    } else {
        const size_t d = b.size(), rows = a.size() / d;
        for (size_t r = 0; r < rows; ++r)
            kern::active().mul(a.data().data() + r * d, b.data().data(),
                               out.data_mut().data() + r * d, d);
    }
    if (rg) {
        record([a, b, out, mode]() {
            const size_t d = b.size(), rows = a.size() / d;
            if (a.requires_grad()) {
                a.ensure_grad();
                auto ag = a.grad_mut();
                if (mode == Bcast::same) {
                    for (size_t i = 0; i < a.size(); ++i) ag[i] += out.grad()[i] * b.at(i);
                } else {
                    for (size_t r = 0; r < rows; ++r)
                        for (size_t j = 0; j < d; ++j)
                            ag[r * d + j] += out.grad()[r * d + j] * b.at(j);
                }
            }
            if (b.requires_grad()) {
                b.ensure_grad();
                auto bg = b.grad_mut();
                if (mode == Bcast::same) {
                    for (size_t i = 0; i < b.size(); ++i) bg[i] += out.grad()[i] * a.at(i);
                } else {
                    for (size_t r = 0; r < rows; ++r)
                        for (size_t j = 0; j < d; ++j)
                            bg[j] += out.grad()[r * d + j] * a.at(r * d + j);
                }
            }
        });
    }
    return out;
}

Tensor scale(const Tensor& a, double s) {
    const bool rg = grad_wanted({&a});
    Tensor out = out_like(a.shape(), rg);
    kern::active().scale(s, a.data().data(), out.data_mut().data(), a.size());
    if (rg) {
        record([a, out, s]() {
            a.ensure_grad();
            kern::active().axpy(s, out.grad().data(), a.grad_mut().data(),
                                a.size());
        });
    }
    return out;
}

Tensor softmax_lastdim(const Tensor& x) {
    const size_t d = x.cols(), rows = x.size() / d;
    require(d >= 1, "shape", "softmax_lastdim: empty rows");
    const bool rg = grad_wanted({&x});
    Tensor out = out_like(x.shape(), rg);
    auto od = out.data_mut();
    for (size_t r = 0; r < rows; ++r) {
        const double* xr = x.data().data() + r * d;
        double mx = xr[0];
        for (size_t j = 1; j < d; ++j) mx = std::max(mx, xr[j]);
        double z = 0.0;
        for (size_t j = 0; j < d; ++j) {
            od[r * d + j] = std::exp(xr[j] - mx);
            z += od[r * d + j];
        }
        for (size_t j = 0; j < d; ++j) od[r * d + j] /= z;
    }
    if (rg) {
        record([x, out, rows, d]() {
            x.ensure_grad();
            auto xg = x.grad_mut();
            for (size_t r = 0; r < rows; ++r) {
                const double* y = out.data().data() + r * d;
                const double* dy = out.grad().data() + r * d;
                double dot = 0.0;
                for (size_t j = 0; j < d; ++j) dot += dy[j] * y[j];
                for (size_t j = 0; j < d; ++j) xg[r * d + j] += y[j] * (dy[j] - dot);
            }
        });
    }
    return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
    const size_t d = x.cols(), rows = x.size() / d;
    require(gain.rank() == 1 && gain.size() == d && bias.rank() == 1 && bias.size() == d, "shape",
            "layer_norm: gain/bias must be rank-1 of size " + std::to_string(d));
    const bool rg = grad_wanted({&x, &gain, &bias});
    Tensor out = out_like(x.shape(), rg);
    // xhat and 1/sigma per row are needed again in the backward pass
    auto xhat = std::make_shared<std::vector<double>>(x.size());
    auto inv = std::make_shared<std::vector<double>>(rows);
    auto od = out.data_mut();
    for (size_t r = 0; r < rows; ++r) {
        const double* xr = x.data().data() + r * d;
        double mu = 0.0;
        for (size_t j = 0; j < d; ++j) mu += xr[j];
        mu /= static_cast<double>(d);
        double var = 0.0;
        for (size_t j = 0; j < d; ++j) var += (xr[j] - mu) * (xr[j] - mu);
        var /= static_cast<double>(d);
        const double is = 1.0 / std::sqrt(var + eps);
        (*inv)[r] = is;
        for (size_t j = 0; j < d; ++j) {
            const double xh = (xr[j] - mu) * is;
            (*xhat)[r * d + j] = xh;
            od[r * d + j] = gain.at(j) * xh + bias.at(j);
        }
    }
    if (rg) {
        record([x, gain, bias, out, xhat, inv, rows, d]() {
            for (size_t r = 0; r < rows; ++r) {
                const double* dy = out.grad().data() + r * d;
                const double* xh = xhat->data() + r * d;
                if (gain.requires_grad()) {
                    gain.ensure_grad();
                    auto gg = gain.grad_mut();
                    for (size_t j = 0; j < d; ++j) gg[j] += dy[j] * xh[j];
                }
                if (bias.requires_grad()) {
                    bias.ensure_grad();
                    auto bg = bias.grad_mut();
                    for (size_t j = 0; j < d; ++j) bg[j] += dy[j];
                }
                if (x.requires_grad()) {
                    x.ensure_grad();
                    auto xg = x.grad_mut();
                    double m1 = 0.0, m2 = 0.0;
                    for (size_t j = 0; j < d; ++j) {
                        const double dxh = dy[j] * gain.at(j);
                        m1 += dxh;
                        m2 += dxh * xh[j];
                    }
                    m1 /= static_cast<double>(d);
                    m2 /= static_cast<double>(d);
                    for (size_t j = 0; j < d; ++j) {
                        const double dxh = dy[j] * gain.at(j);
                        xg[r * d + j] += (*inv)[r] * (dxh - m1 - xh[j] * m2);
                    }
                }
            }
        });
    }
    return out;
}

Tensor gelu(const Tensor& x) {
    static const double c = std::sqrt(2.0 / std::numbers::pi);
    static constexpr double a3 = 0.044715;
    const bool rg = grad_wanted({&x});
    Tensor out = out_like(x.shape(), rg);
    auto od = out.data_mut();
    for (size_t i = 0; i < x.size(); ++i) {
        const double v = x.at(i);
        od[i] = 0.5 * v * (1.0 + std::tanh(c * (v + a3 * v * v * v)));
    }
    if (rg) {
        record([x, out]() {
            x.ensure_grad();
            auto xg = x.grad_mut();
            for (size_t i = 0; i < x.size(); ++i) {
                const double v = x.at(i);
                const double t = std::tanh(c * (v + a3 * v * v * v));
                const double du = c * (1.0 + 3.0 * a3 * v * v);
                const double dydx = 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * du;
                xg[i] += out.grad()[i] * dydx;
            }
        });
    }
    return out;
}

Tensor embedding_lookup(const Tensor& table, const std::vector<int>& ids) {
    require(table.rank() == 2, "shape", "embedding_lookup: table must be rank-2");
    require(!ids.empty(), "shape", "embedding_lookup: empty id list");
    const size_t v = table.shape()[0], d = table.shape()[1];
    for (int id : ids)
        require(id >= 0 && static_cast<size_t>(id) < v, "lookup",
                "embedding_lookup: id " + std::to_string(id) + " out of range [0," +
                    std::to_string(v) + ")");
    const bool rg = grad_wanted({&table});
    Tensor out = out_like({ids.size(), d}, rg);
    auto od = out.data_mut();
    for (size_t i = 0; i < ids.size(); ++i)
        std::copy_n(table.data().data() + static_cast<size_t>(ids[i]) * d, d, od.data() + i * d);
    if (rg) {
        record([table, out, ids, d]() {
            table.ensure_grad();
            auto tg = table.grad_mut();
            for (size_t i = 0; i < ids.size(); ++i)
                kern::active().axpy(1.0, out.grad().data() + i * d,
                                    tg.data() + static_cast<size_t>(ids[i]) * d, d);
        });
    }
    return out;
}

namespace {

size_t part_rows(const Tensor& t) { return t.rank() == 1 ? 1 : t.shape()[0]; }
size_t part_cols(const Tensor& t) { return t.rank() == 1 ? t.size() : t.shape()[1]; }

} // namespace

Tensor concat_rows(const std::vector<Tensor>& parts) {
    require(!parts.empty(), "shape", "concat: no inputs");
    const size_t d = part_cols(parts[0]);
    size_t total = 0;
    bool rg = false;
    for (const Tensor& p : parts) {
        require(part_cols(p) == d, "shape", "concat rows: column mismatch " + p.shape_str());
        total += part_rows(p);
        rg = rg || (tape_on() && p.requires_grad());
    }
    Tensor out = out_like({total, d}, rg);
    auto od = out.data_mut();
    size_t row = 0;
    for (const Tensor& p : parts) {
        std::copy_n(p.data().data(), p.size(), od.data() + row * d);
        row += part_rows(p);
    }
    if (rg) {
        record([parts, out, d]() {
            size_t row = 0;
            for (const Tensor& p : parts) {
                if (p.requires_grad()) {
                    p.ensure_grad();
                    kern::active().axpy(1.0, out.grad().data() + row * d,
                                        p.grad_mut().data(), p.size());
                }
                row += part_rows(p);
            }
        });
    }
    return out;
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
    require(!parts.empty(), "shape", "concat: no inputs");
    const size_t n = part_rows(parts[0]);
    size_t dtot = 0;
    bool rg = false;
    for (const Tensor& p : parts) {
        require(part_rows(p) == n, "shape", "concat cols: row mismatch " + p.shape_str());
        dtot += part_cols(p);
        rg = rg || (tape_on() && p.requires_grad());
    }
    Tensor out = out_like({n, dtot}, rg);
    auto od = out.data_mut();
    size_t col = 0;
    for (const Tensor& p : parts) {
        const size_t pd = part_cols(p);
        for (size_t r = 0; r < n; ++r)
            std::copy_n(p.data().data() + r * pd, pd, od.data() + r * dtot + col);
        col += pd;
    }
    if (rg) {
        record([parts, out, n, dtot]() {
            size_t col = 0;
            for (const Tensor& p : parts) {
                const size_t pd = part_cols(p);
                if (p.requires_grad()) {
                    p.ensure_grad();
                    auto pg = p.grad_mut();
                    for (size_t r = 0; r < n; ++r)
                        for (size_t j = 0; j < pd; ++j)
                            pg[r * pd + j] += out.grad()[r * dtot + col + j];
                }
                col += pd;
            }
        });
    }
    return out;
}

Tensor slice_rows(const Tensor& x, size_t start, size_t len) {
    require(x.rank() == 2, "shape", "slice_rows: needs rank-2 input");
    const size_t n = x.shape()[0], d = x.shape()[1];
    require(len > 0 && start + len <= n, "shape",
            "slice_rows: range [" + std::to_string(start) + "," + std::to_string(start + len) +
                ") out of " + std::to_string(n) + " rows");
    const bool rg = grad_wanted({&x});
    Tensor out = out_like({len, d}, rg);
    std::copy_n(x.data().data() + start * d, len * d, out.data_mut().data());
    if (rg) {
        record([x, out, start, d, len]() {
            x.ensure_grad();
            kern::active().axpy(1.0, out.grad().data(),
                                x.grad_mut().data() + start * d, len * d);
        });
    }
    return out;
}

Tensor slice_cols(const Tensor& x, size_t start, size_t len) {
    require(x.rank() == 2, "shape", "slice_cols: needs rank-2 input");
    const size_t n = x.shape()[0], d = x.shape()[1];
    require(len > 0 && start + len <= d, "shape",
            "slice_cols: range [" + std::to_string(start) + "," + std::to_string(start + len) +
                ") out of " + std::to_string(d) + " cols");
    const bool rg = grad_wanted({&x});
    Tensor out = out_like({n, len}, rg);
    auto od = out.data_mut();
    for (size_t r = 0; r < n; ++r)
        std::copy_n(x.data().data() + r * d + start, len, od.data() + r * len);
    if (rg) {
        record([x, out, start, n, d, len]() {
            x.ensure_grad();
            auto xg = x.grad_mut();
            for (size_t r = 0; r < n; ++r)
                for (size_t j = 0; j < len; ++j)
                    xg[r * d + start + j] += out.grad()[r * len + j];
        });
    }
    return out;
}

Tensor transpose(const Tensor& x) {
    require(x.rank() == 2, "shape", "transpose: needs rank-2 input");
    const size_t n = x.shape()[0], m = x.shape()[1];
    const bool rg = grad_wanted({&x});
    Tensor out = out_like({m, n}, rg);
    auto od = out.data_mut();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) od[j * n + i] = x.at(i * m + j);
    if (rg) {
        record([x, out, n, m]() {
            x.ensure_grad();
            auto xg = x.grad_mut();
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < m; ++j) xg[i * m + j] += out.grad()[j * n + i];
        });
    }
    return out;
}

Tensor cross_entropy_logits(const Tensor& logits, const std::vector<int>& targets) {
    const size_t d = logits.cols(), rows = logits.size() / d;
    require(targets.size() == rows, "shape",
            "cross_entropy_logits: " + std::to_string(targets.size()) + " targets for " +
                std::to_string(rows) + " rows");
    for (int t : targets)
        require(t >= 0 && static_cast<size_t>(t) < d, "contract",
                "cross_entropy_logits: target " + std::to_string(t) + " out of range");
    const bool rg = grad_wanted({&logits});
    // softmax probabilities are reused by the backward pass
    auto probs = std::make_shared<std::vector<double>>(logits.size());
    double total = 0.0;
    for (size_t r = 0; r < rows; ++r) {
        const double* xr = logits.data().data() + r * d;
        double mx = xr[0];
        for (size_t j = 1; j < d; ++j) mx = std::max(mx, xr[j]);
        double z = 0.0;
        for (size_t j = 0; j < d; ++j) z += std::exp(xr[j] - mx);
        const double lse = mx + std::log(z);
        total += lse - xr[targets[r]];
        for (size_t j = 0; j < d; ++j) (*probs)[r * d + j] = std::exp(xr[j] - lse);
    }
    Tensor out = Tensor::scalar(total / static_cast<double>(rows));
    out.set_requires_grad(rg);
    if (rg) {
        record([logits, out, probs, targets, rows, d]() {
            logits.ensure_grad();
            auto lg = logits.grad_mut();
            const double go = out.grad()[0] / static_cast<double>(rows);
            for (size_t r = 0; r < rows; ++r) {
                for (size_t j = 0; j < d; ++j) lg[r * d + j] += go * (*probs)[r * d + j];
                lg[r * d + static_cast<size_t>(targets[r])] -= go;
            }
        });
    }
    return out;
}

Tensor dropout_mask(Rng& rng, const std::vector<size_t>& shape, double rate) {
    require(rate >= 0.0 && rate < 1.0, "param",
            "dropout rate must lie in [0,1), got " + std::to_string(rate));
    Tensor mask = Tensor::zeros(shape);
    const double keep_scale = 1.0 / (1.0 - rate);
    auto md = mask.data_mut();
    for (size_t i = 0; i < mask.size(); ++i) md[i] = rng.uniform() >= rate ? keep_scale : 0.0;
    return mask;
}

Tensor dropout(const Tensor& x, double rate, Rng& rng, bool train) {
    require(rate >= 0.0 && rate < 1.0, "param",
            "dropout rate must lie in [0,1), got " + std::to_string(rate));
    if (!train || rate == 0.0) return x; // evaluation mode is the identity
    Tensor mask = dropout_mask(rng, x.shape(), rate);
    return mul(x, mask);
}

Tensor sum(const Tensor& x) {
    const bool rg = grad_wanted({&x});
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x.at(i);
    Tensor out = Tensor::scalar(s);
    out.set_requires_grad(rg);
    if (rg) {
        record([x, out]() {
            x.ensure_grad();
            auto xg = x.grad_mut();
            const double go = out.grad()[0];
            for (size_t i = 0; i < x.size(); ++i) xg[i] += go;
        });
    }
    return out;
}

void backward(const Tensor& loss) {
    require(loss.defined() && loss.size() == 1, "contract", "backward: loss must be a scalar");
    Tape* tape = active_tape();
    require(tape != nullptr, "contract", "backward: no active tape");
    loss.ensure_grad();
    loss.grad_mut()[0] += 1.0;
    tape->run_reverse();
    tape->clear();
}

OpKind op_kind_from_string(const std::string& name) {
    if (name == "matmul") return OpKind::matmul;
    if (name == "add") return OpKind::add;
    if (name == "mul") return OpKind::mul;
    if (name == "softmax_lastdim") return OpKind::softmax_lastdim;
    if (name == "layer_norm") return OpKind::layer_norm;
    if (name == "gelu") return OpKind::gelu;
    if (name == "embedding_lookup") return OpKind::embedding_lookup;
    if (name == "concat") return OpKind::concat;
    if (name == "slice") return OpKind::slice;
    if (name == "transpose") return OpKind::transpose;
    if (name == "cross_entropy_logits") return OpKind::cross_entropy_logits;
    if (name == "dropout") return OpKind::dropout;
    if (name == "scale") return OpKind::scale;
    fail("contract", "unknown op kind: " + name);
}

Tensor forward_op(OpKind kind, const std::vector<Tensor>& inputs, const OpAttrs& attrs) {
    auto need = [&](size_t n) {
        require(inputs.size() == n, "contract", "forward_op: wrong input count");
    };
    switch (kind) {
        case OpKind::matmul: need(2); return matmul(inputs[0], inputs[1]);
        case OpKind::add: need(2); return add(inputs[0], inputs[1]);
        case OpKind::mul: need(2); return mul(inputs[0], inputs[1]);
        case OpKind::softmax_lastdim: need(1); return softmax_lastdim(inputs[0]);
        case OpKind::layer_norm: need(3); return layer_norm(inputs[0], inputs[1], inputs[2], attrs.eps);
        case OpKind::gelu: need(1); return gelu(inputs[0]);
        case OpKind::embedding_lookup: need(1); return embedding_lookup(inputs[0], attrs.ids);
        case OpKind::concat:
            return attrs.axis == 0 ? concat_rows(inputs) : concat_cols(inputs);
        case OpKind::slice:
            need(1);
            return attrs.axis == 0 ? slice_rows(inputs[0], attrs.start, attrs.len)
                                   : slice_cols(inputs[0], attrs.start, attrs.len);
        case OpKind::transpose: need(1); return transpose(inputs[0]);
        case OpKind::cross_entropy_logits: need(1); return cross_entropy_logits(inputs[0], attrs.ids);
        case OpKind::dropout: {
            need(1);
            require(attrs.rng != nullptr, "contract", "dropout: rng required");
            return dropout(inputs[0], attrs.rate, *attrs.rng, attrs.train);
        }
        case OpKind::scale: need(1); return scale(inputs[0], attrs.scalar);
    }
    fail("contract", "forward_op: unhandled op kind");
}

} // namespace kplug::numcore
