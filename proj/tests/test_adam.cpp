#include "common/error.hpp"
#include "numcore/adam.hpp"
#include "numcore/ops.hpp"
#include "numcore/tape.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace kplug::numcore;

TEST_SUITE_BEGIN("adam");

TEST_CASE("zero gradient leaves the parameter unchanged") {
    Tensor p = Tensor::from({3}, {1.0, -2.0, 0.5}, true);
    p.zero_grad();
    auto before = std::vector<double>(p.data().begin(), p.data().end());
    AdamConfig cfg;
    cfg.weight_decay = 0.0;
    std::vector<Tensor> params{p};
    AdamState st(cfg, params);
    st.step(params);
    for (size_t i = 0; i < 3; ++i) CHECK(p.at(i) == before[i]);
}

TEST_CASE("one step with constant gradient matches the hand-computed update") {
    // With zero moments and one step: m=(1-b1)g, v=(1-b2)g^2, and after bias
    // correction the step is exactly lr * g/(|g|+eps') with eps' = eps.
    const double lr = 0.01, g = 0.37;
    Tensor p = Tensor::scalar(1.0, true);
    p.ensure_grad();
    p.grad_mut()[0] = g;
    AdamConfig cfg;
    cfg.lr = lr;
    std::vector<Tensor> params{p};
    AdamState st(cfg, params);
    st.step(params);
    const double mhat = g;              // m/(1-b1) after one step
    const double vhat = g * g;          // v/(1-b2) after one step
    const double expect = 1.0 - lr * mhat / (std::sqrt(vhat) + cfg.eps);
    CHECK(p.item() == doctest::Approx(expect).epsilon(1e-12));
    // gradient zeroed after the step
    CHECK(p.grad()[0] == 0.0);
}

TEST_CASE("warmup ramp: fraction 0.1, 100 steps, step 5 is half lr") {
    AdamConfig cfg;
    cfg.lr = 2e-3;
    cfg.warmup_frac = 0.1;
    cfg.total_steps = 100;
    std::vector<Tensor> none;
    AdamState st(cfg, none);
    CHECK(st.effective_lr(5) == doctest::Approx(1e-3));
    CHECK(st.effective_lr(10) == doctest::Approx(2e-3));
    CHECK(st.effective_lr(50) == doctest::Approx(2e-3));
}

TEST_CASE("missing gradient is a contract error") {
    Tensor p = Tensor::scalar(1.0, true);
    AdamConfig cfg;
    std::vector<Tensor> params{p};
    AdamState st(cfg, params);
    CHECK_THROWS_AS(st.step(params), kplug::Error);
}

TEST_CASE("weight decay 0 is plain Adam; nonzero decays the parameter") {
    auto run = [](double wd) {
        Tensor p = Tensor::scalar(1.0, true);
        p.zero_grad();
        AdamConfig cfg;
        cfg.weight_decay = wd;
        cfg.lr = 0.1;
        std::vector<Tensor> params{p};
        AdamState st(cfg, params);
        st.step(params);
        return p.item();
    };
    CHECK(run(0.0) == 1.0);
    CHECK(run(0.01) == doctest::Approx(1.0 - 0.1 * 0.01));
}

TEST_CASE("adam drives a quadratic toward its minimum") {
    TapeScope ts;
    Tensor x = Tensor::scalar(3.0, true);
    AdamConfig cfg;
    cfg.lr = 0.05;
    std::vector<Tensor> params{x};
    AdamState st(cfg, params);
    for (int i = 0; i < 400; ++i) {
        Tensor loss = sum(mul(x, x));
        backward(loss);
        st.step(params);
    }
    CHECK(std::fabs(x.item()) < 0.05);
    CHECK(st.step_count() == 400);
}

TEST_SUITE_END();
