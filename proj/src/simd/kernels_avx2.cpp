#include "kong/simd/bit_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define KONG_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#else
#define KONG_HAVE_AVX2_VARIANT 0
#endif

#include <bit>

namespace kong::simd {

#if KONG_HAVE_AVX2_VARIANT

namespace {

#define KONG_AVX2 __attribute__((target("avx2,popcnt")))

// Nibble lookup popcount: per-byte counts via pshufb, folded into four
// 64-bit lanes with psadbw.
KONG_AVX2 inline __m256i popcount_lanes(__m256i v)
{
    const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i bytes =
        _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

KONG_AVX2 inline std::size_t horizontal_sum(__m256i acc)
{
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    return static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
}

KONG_AVX2 void or_into_avx2(Word* dst, const Word* src, std::size_t words)
{
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        auto* d = reinterpret_cast<__m256i*>(dst + i);
        const auto* s = reinterpret_cast<const __m256i*>(src + i);
        _mm256_storeu_si256(d, _mm256_or_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
    }
    for (; i < words; ++i)
        dst[i] |= src[i];
}

KONG_AVX2 std::size_t or_into_count_avx2(Word* dst, const Word* src, std::size_t words)
{
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        auto* d = reinterpret_cast<__m256i*>(dst + i);
        const auto* s = reinterpret_cast<const __m256i*>(src + i);
        const __m256i dv = _mm256_loadu_si256(d);
        const __m256i sv = _mm256_loadu_si256(s);
        acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_andnot_si256(dv, sv)));
        _mm256_storeu_si256(d, _mm256_or_si256(dv, sv));
    }
    std::size_t added = horizontal_sum(acc);
    for (; i < words; ++i) {
        added += static_cast<std::size_t>(__builtin_popcountll(src[i] & ~dst[i]));
        dst[i] |= src[i];
    }
    return added;
}

KONG_AVX2 std::size_t popcount_avx2(const Word* src, std::size_t words)
{
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4)
        acc = _mm256_add_epi64(
            acc, popcount_lanes(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i))));
    std::size_t total = horizontal_sum(acc);
    for (; i < words; ++i)
        total += static_cast<std::size_t>(__builtin_popcountll(src[i]));
    return total;
}

KONG_AVX2 std::size_t popcount_and_avx2(const Word* a, const Word* b, std::size_t words)
{
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_and_si256(av, bv)));
    }
    std::size_t total = horizontal_sum(acc);
    for (; i < words; ++i)
        total += static_cast<std::size_t>(__builtin_popcountll(a[i] & b[i]));
    return total;
}

KONG_AVX2 bool intersects_avx2(const Word* a, const Word* b, std::size_t words)
{
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        if (!_mm256_testz_si256(av, bv)) return true;
    }
    for (; i < words; ++i)
        if (a[i] & b[i]) return true;
    return false;
}

#undef KONG_AVX2

constexpr BitKernels kAvx2{
    "avx2",        or_into_avx2,      or_into_count_avx2,
    popcount_avx2, popcount_and_avx2, intersects_avx2,
};

} // namespace

const BitKernels* avx2_kernels()
{
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    return supported ? &kAvx2 : nullptr;
}

#else

const BitKernels* avx2_kernels() { return nullptr; }

#endif

} // namespace kong::simd
