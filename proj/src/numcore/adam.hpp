#pragma once

#include "numcore/tensor.hpp"

#include <unordered_map>
#include <vector>

namespace kplug::numcore {

// One optimizer covers the whole repo: weight_decay = 0 gives plain Adam,
// nonzero gives AdamW-style decoupled decay. Learning rate ramps linearly
// over the first warmup_frac * total_steps steps, then stays at lr.
struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
    double warmup_frac = 0.1;
    long total_steps = 0; // 0 disables warmup
};

class AdamState {
  public:
    AdamState(AdamConfig cfg, const std::vector<Tensor>& params);

    // Applies one Adam update to every registered parameter, in registration
    // order, then zeroes their gradients. Every parameter must have a
    // populated gradient buffer.
    void step(std::vector<Tensor>& params);

    long step_count() const { return step_; }
    double effective_lr(long step) const; // warmup ramp at a given 1-based step
    const AdamConfig& config() const { return cfg_; }

  private:
    struct Slot {
        std::vector<double> m, v;
    };
    AdamConfig cfg_;
    std::unordered_map<const TensorImpl*, Slot> slots_;
    long step_ = 0;
};

} // namespace kplug::numcore
