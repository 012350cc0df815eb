#include "numcore/kernels.hpp"

#include "common/error.hpp"

namespace kplug::numcore::kern {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {
const Kernels* forced = nullptr;
}

const Kernels& active() {
    if (forced) return *forced;
    static const Kernels& chosen = avx2_supported() ? avx2_kernels() : scalar_kernels();
    return chosen;
}

void force_impl(const std::string& name) {
    if (name == "auto") {
        forced = nullptr;
    } else if (name == "scalar") {
        forced = &scalar_kernels();
    } else if (name == "avx2") {
        require(avx2_supported(), "config", "avx2 kernels not supported on this CPU");
        forced = &avx2_kernels();
    } else {
        fail("config", "unknown kernel impl: " + name);
    }
}

} // namespace kplug::numcore::kern
