#include "kong/simd/bit_kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#define KONG_HAVE_NEON_VARIANT 1
#include <arm_neon.h>
#else
#define KONG_HAVE_NEON_VARIANT 0
#endif

namespace kong::simd {

#if KONG_HAVE_NEON_VARIANT

namespace {

inline std::size_t count_vector(uint64x2_t v)
{
    return static_cast<std::size_t>(vaddvq_u8(vcntq_u8(vreinterpretq_u8_u64(v))));
}

void or_into_neon(Word* dst, const Word* src, std::size_t words)
{
    std::size_t i = 0;
    for (; i + 2 <= words; i += 2)
        vst1q_u64(dst + i, vorrq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
    for (; i < words; ++i)
        dst[i] |= src[i];
}

std::size_t or_into_count_neon(Word* dst, const Word* src, std::size_t words)
{
    std::size_t added = 0;
    std::size_t i = 0;
    for (; i + 2 <= words; i += 2) {
        const uint64x2_t d = vld1q_u64(dst + i);
        const uint64x2_t s = vld1q_u64(src + i);
        added += count_vector(vbicq_u64(s, d));
        vst1q_u64(dst + i, vorrq_u64(d, s));
    }
    for (; i < words; ++i) {
        added += static_cast<std::size_t>(__builtin_popcountll(src[i] & ~dst[i]));
        dst[i] |= src[i];
    }
    return added;
}

std::size_t popcount_neon(const Word* src, std::size_t words)
{
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= words; i += 2)
        total += count_vector(vld1q_u64(src + i));
    for (; i < words; ++i)
        total += static_cast<std::size_t>(__builtin_popcountll(src[i]));
    return total;
}

std::size_t popcount_and_neon(const Word* a, const Word* b, std::size_t words)
{
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= words; i += 2)
        total += count_vector(vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
    for (; i < words; ++i)
        total += static_cast<std::size_t>(__builtin_popcountll(a[i] & b[i]));
    return total;
}

bool intersects_neon(const Word* a, const Word* b, std::size_t words)
{
    std::size_t i = 0;
    for (; i + 2 <= words; i += 2) {
        const uint64x2_t v = vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i));
        if (vgetq_lane_u64(v, 0) | vgetq_lane_u64(v, 1)) return true;
    }
    for (; i < words; ++i)
        if (a[i] & b[i]) return true;
    return false;
}

constexpr BitKernels kNeon{
    "neon",        or_into_neon,      or_into_count_neon,
    popcount_neon, popcount_and_neon, intersects_neon,
};

} // namespace

const BitKernels* neon_kernels() { return &kNeon; }

#else

const BitKernels* neon_kernels() { return nullptr; }

#endif

} // namespace kong::simd
