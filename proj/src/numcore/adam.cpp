#include "numcore/adam.hpp"

#include "common/error.hpp"
#include "numcore/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace kplug::numcore {

AdamState::AdamState(AdamConfig cfg, const std::vector<Tensor>& params) : cfg_(std::move(cfg)) {
    for (const Tensor& p : params) {
        Slot s;
        s.m.assign(p.size(), 0.0);
        s.v.assign(p.size(), 0.0);
        slots_.emplace(p.impl(), std::move(s));
    }
}

double AdamState::effective_lr(long step) const {
    if (cfg_.total_steps <= 0 || cfg_.warmup_frac <= 0.0) return cfg_.lr;
    const double warmup = cfg_.warmup_frac * static_cast<double>(cfg_.total_steps);
    if (warmup < 1.0) return cfg_.lr;
    return cfg_.lr * std::min(1.0, static_cast<double>(step) / warmup);
}

void AdamState::step(std::vector<Tensor>& params) {
    ++step_;
    const double lr_t = effective_lr(step_);
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (Tensor& p : params) {
        auto it = slots_.find(p.impl());
        require(it != slots_.end(), "contract", "adam_step: parameter not registered");
        require(p.has_grad(), "contract", "adam_step: parameter is missing its gradient");
        kern::active().adam_update(p.data_mut().data(), p.grad_mut().data(), it->second.m.data(),
                                   it->second.v.data(), p.size(), lr_t, cfg_.beta1, cfg_.beta2,
                                   cfg_.eps, bc1, bc2, cfg_.weight_decay);
        p.zero_grad();
    }
}

} // namespace kplug::numcore
