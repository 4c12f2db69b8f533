#include "kong/simd/bit_kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace kong::simd {

namespace {

const BitKernels& select_kernels()
{
    if (const char* forced = std::getenv("KONG_SIMD"); forced && std::string_view(forced) == "scalar")
        return scalar_kernels();
    if (const BitKernels* k = avx2_kernels()) return *k;
    if (const BitKernels* k = neon_kernels()) return *k;
    return scalar_kernels();
}

} // namespace

const BitKernels& active_kernels()
{
    static const BitKernels& chosen = select_kernels();
    return chosen;
}

} // namespace kong::simd
