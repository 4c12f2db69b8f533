#include "kong/simd/bit_kernels.hpp"

#include <bit>

namespace kong::simd {

namespace {

void or_into_scalar(Word* dst, const Word* src, std::size_t words)
{
    for (std::size_t i = 0; i < words; ++i)
        dst[i] |= src[i];
}

std::size_t or_into_count_scalar(Word* dst, const Word* src, std::size_t words)
{
    std::size_t added = 0;
    for (std::size_t i = 0; i < words; ++i) {
        added += static_cast<std::size_t>(std::popcount(src[i] & ~dst[i]));
        dst[i] |= src[i];
    }
    return added;
}

std::size_t popcount_scalar(const Word* src, std::size_t words)
{
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i)
        total += static_cast<std::size_t>(std::popcount(src[i]));
    return total;
}

std::size_t popcount_and_scalar(const Word* a, const Word* b, std::size_t words)
{
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i)
        total += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return total;
}

bool intersects_scalar(const Word* a, const Word* b, std::size_t words)
{
    for (std::size_t i = 0; i < words; ++i)
        if (a[i] & b[i]) return true;
    return false;
}

constexpr BitKernels kScalar{
    "scalar",         or_into_scalar,      or_into_count_scalar,
    popcount_scalar,  popcount_and_scalar, intersects_scalar,
};

} // namespace

const BitKernels& scalar_kernels() { return kScalar; }

} // namespace kong::simd
