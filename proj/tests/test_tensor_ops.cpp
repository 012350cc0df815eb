#include "common/error.hpp"
#include "numcore/ops.hpp"
#include "numcore/tape.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace kplug::numcore;
using kplug::Error;

TEST_SUITE_BEGIN("tensor_ops");

TEST_CASE("tensor invariants") {
    Tensor t = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
    CHECK(t.size() == 6);
    CHECK(t.rows() == 2);
    CHECK(t.cols() == 3);
    CHECK_THROWS_AS(Tensor::from({2, 2}, {1, 2, 3}), Error);
    CHECK_THROWS_AS(Tensor::zeros({0, 3}), Error);
}

TEST_CASE("matmul identity") {
    Tensor a = Tensor::from({2, 2}, {1, 2, 3, 4});
    Tensor eye = Tensor::from({2, 2}, {1, 0, 0, 1});
    Tensor c = matmul(a, eye);
    for (size_t i = 0; i < 4; ++i) CHECK(c.at(i) == a.at(i));
}

TEST_CASE("matmul shape error names shapes") {
    Tensor a = Tensor::zeros({2, 3});
    Tensor b = Tensor::zeros({2, 3});
    try {
        matmul(a, b);
        FAIL("expected shape error");
    } catch (const Error& e) {
        CHECK(e.kind == "shape");
        CHECK(std::string(e.what()).find("(2,3)") != std::string::npos);
        CHECK(std::string(e.what()).find("matmul") != std::string::npos);
    }
}

TEST_CASE("softmax symmetry and row sums") {
    Tensor x = Tensor::from({2}, {0, 0});
    Tensor y = softmax_lastdim(x);
    CHECK(y.at(0) == doctest::Approx(0.5));
    CHECK(y.at(1) == doctest::Approx(0.5));

    Rng rng(77);
    Tensor big = Tensor::zeros({8, 13});
    for (size_t i = 0; i < big.size(); ++i) big.data_mut()[i] = rng.uniform(-30, 30);
    Tensor sm = softmax_lastdim(big);
    for (size_t r = 0; r < 8; ++r) {
        double s = 0;
        for (size_t j = 0; j < 13; ++j) s += sm.at(r * 13 + j);
        CHECK(std::fabs(s - 1.0) < 1e-9);
    }
}

TEST_CASE("cross entropy of uniform logits is log C") {
    Tensor logits = Tensor::from({4}, {0, 0, 0, 0});
    Tensor loss = cross_entropy_logits(logits, {2});
    CHECK(loss.item() == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("cross entropy gradient is softmax minus onehot") {
    TapeScope ts;
    Tensor logits = Tensor::from({2}, {0, 0}, true);
    Tensor loss = cross_entropy_logits(logits, {0});
    backward(loss);
    CHECK(logits.grad()[0] == doctest::Approx(-0.5));
    CHECK(logits.grad()[1] == doctest::Approx(0.5));
}

TEST_CASE("backward of sum of squares") {
    TapeScope ts;
    Tensor x = Tensor::from({1}, {3.0}, true);
    Tensor loss = sum(mul(x, x));
    backward(loss);
    CHECK(x.grad()[0] == doctest::Approx(6.0));
}

TEST_CASE("backward requires a scalar and an active tape") {
    {
        TapeScope ts;
        Tensor x = Tensor::from({2}, {1, 2}, true);
        Tensor y = add(x, x);
        CHECK_THROWS_AS(backward(y), Error);
    }
    Tensor s = Tensor::scalar(1.0, true);
    CHECK_THROWS_AS(backward(s), Error); // no tape
}

TEST_CASE("layer_norm normalizes rows before affine") {
    Rng rng(3);
    Tensor x = Tensor::zeros({5, 16});
    for (size_t i = 0; i < x.size(); ++i) x.data_mut()[i] = rng.uniform(-4, 4);
    Tensor ones = Tensor::full({16}, 1.0);
    Tensor zeros = Tensor::zeros({16});
    Tensor y = layer_norm(x, ones, zeros, 1e-12);
    for (size_t r = 0; r < 5; ++r) {
        double mu = 0, var = 0;
        for (size_t j = 0; j < 16; ++j) mu += y.at(r * 16 + j);
        mu /= 16;
        for (size_t j = 0; j < 16; ++j) var += (y.at(r * 16 + j) - mu) * (y.at(r * 16 + j) - mu);
        var /= 16;
        CHECK(std::fabs(mu) < 1e-9);
        CHECK(std::fabs(var - 1.0) < 1e-6);
    }
}

TEST_CASE("dropout mask semantics") {
    Rng rng(11);
    Tensor m0 = dropout_mask(rng, {4, 4}, 0.0);
    for (size_t i = 0; i < m0.size(); ++i) CHECK(m0.at(i) == 1.0);

    // Monte-Carlo keep rate at rate 0.25
    Rng rng2(12);
    const size_t n = 100000;
    Tensor m = dropout_mask(rng2, {n}, 0.25);
    size_t kept = 0;
    for (size_t i = 0; i < n; ++i)
        if (m.at(i) != 0.0) ++kept;
    CHECK(std::fabs(kept / double(n) - 0.75) < 0.01);
    // kept entries carry the 1/(1-rate) scale
    for (size_t i = 0; i < n; ++i)
        if (m.at(i) != 0.0) CHECK(m.at(i) == doctest::Approx(1.0 / 0.75));

    CHECK_THROWS_AS(dropout_mask(rng2, {2}, 1.0), Error);
}

TEST_CASE("dropout in eval mode is the identity, bit-exactly") {
    Rng rng(13);
    Tensor x = Tensor::from({3}, {0.1, -0.2, 0.3});
    Tensor y = dropout(x, 0.9, rng, false);
    CHECK(std::memcmp(x.data().data(), y.data().data(), 3 * sizeof(double)) == 0);
}

TEST_CASE("determinism: same seed, same op sequence, bit-identical tensors") {
    auto run = [](uint64_t seed) {
        Rng rng(seed);
        Tensor a = Tensor::zeros({6, 6});
        for (size_t i = 0; i < a.size(); ++i) a.data_mut()[i] = rng.normal();
        Tensor b = softmax_lastdim(matmul(a, transpose(a)));
        Tensor c = dropout(b, 0.3, rng, true);
        return c;
    };
    Tensor r1 = run(99), r2 = run(99);
    CHECK(std::memcmp(r1.data().data(), r2.data().data(), r1.size() * sizeof(double)) == 0);
}

TEST_CASE("embedding lookup gathers and bounds-checks") {
    Tensor table = Tensor::from({3, 2}, {0, 1, 10, 11, 20, 21});
    Tensor out = embedding_lookup(table, {2, 0, 2});
    CHECK(out.at(0) == 20);
    CHECK(out.at(3) == 1);
    CHECK(out.at(4) == 20);
    CHECK_THROWS_AS(embedding_lookup(table, {3}), Error);
}

TEST_CASE("concat and slice round trip") {
    Tensor a = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
    Tensor b = Tensor::from({1, 3}, {7, 8, 9});
    Tensor cat = concat_rows({a, b});
    CHECK(cat.shape() == std::vector<size_t>{3, 3});
    Tensor back = slice_rows(cat, 2, 1);
    CHECK(back.at(2) == 9);

    Tensor cc = concat_cols({a, a});
    CHECK(cc.shape() == std::vector<size_t>{2, 6});
    Tensor col = slice_cols(cc, 3, 3);
    for (size_t i = 0; i < 6; ++i) CHECK(col.at(i) == a.at(i));
}

TEST_CASE("argmax ties break to the lower index") {
    std::vector<double> v{0.2, 0.7, 0.7, 0.1};
    CHECK(argmax(v) == 1);
}

TEST_SUITE_END();
