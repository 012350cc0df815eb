#include "numcore/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using kplug::numcore::Rng;

TEST_SUITE_BEGIN("rng");

TEST_CASE("same seed, same call sequence, identical stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng c(42), d(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(c.uniform() == d.uniform());
        CHECK(c.normal() == d.normal());
        CHECK(c.uniform_int(17) == d.uniform_int(17));
    }
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("fork gives independent reproducible streams") {
    Rng root(7);
    Rng c1 = root.fork(11);
    Rng c2 = root.fork(12);
    CHECK(c1.next_u64() != c2.next_u64());
    // forking does not advance the parent
    Rng root2(7);
    CHECK(root.next_u64() == root2.next_u64());
    // same seed, same fork key: same stream
    Rng again = Rng(7).fork(11);
    Rng c1b = Rng(7).fork(11);
    CHECK(again.next_u64() == c1b.next_u64());
}

TEST_CASE("uniform moments and range") {
    Rng r(123);
    double sum = 0.0, mn = 1.0, mx = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        sum += u;
        mn = std::min(mn, u);
        mx = std::max(mx, u);
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(mn >= 0.0);
    CHECK(mx < 1.0);
}

TEST_CASE("normal moments") {
    Rng r(321);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        s1 += z;
        s2 += z * z;
    }
    CHECK(s1 / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("uniform_int covers range uniformly") {
    Rng r(5);
    std::vector<int> hist(10, 0);
    for (int i = 0; i < 50000; ++i) ++hist[r.uniform_int(10)];
    for (int h : hist) CHECK(std::fabs(h / 5000.0 - 1.0) < 0.1);
}

TEST_CASE("shuffle is a permutation") {
    Rng r(9);
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
    auto orig = v;
    r.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == orig);
}

TEST_SUITE_END();
