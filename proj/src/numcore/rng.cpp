#include "numcore/rng.hpp"

#include "common/error.hpp"

#include <cmath>
#include <numbers>

namespace kplug::numcore {

uint64_t Rng::uniform_int(uint64_t n) {
    require(n > 0, "param", "uniform_int needs n > 0");
    return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
}

double Rng::normal() {
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<size_t> Rng::sample_indices(size_t n, size_t k) {
    require(k <= n, "param", "sample_indices: k > n");
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    // partial Fisher-Yates: first k slots end up as the sample
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + static_cast<size_t>(uniform_int(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

} // namespace kplug::numcore
