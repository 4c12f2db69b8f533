#pragma once

// Word-level bitset kernels used by the matrix fills and the reachability
// oracle. Every variant computes exactly the same result as the scalar
// reference; the active table is picked once at startup from the CPU.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace kong::simd {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

struct BitKernels {
    std::string_view name;
    // dst |= src
    void (*or_into)(Word* dst, const Word* src, std::size_t words);
    // dst |= src, returns the number of bits that flipped 0 -> 1
    std::size_t (*or_into_count)(Word* dst, const Word* src, std::size_t words);
    std::size_t (*popcount)(const Word* src, std::size_t words);
    // popcount(a & b)
    std::size_t (*popcount_and)(const Word* a, const Word* b, std::size_t words);
    // (a & b) != 0
    bool (*intersects)(const Word* a, const Word* b, std::size_t words);
};

const BitKernels& scalar_kernels();

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const BitKernels* avx2_kernels();
const BitKernels* neon_kernels();

// Best available table. Setting KONG_SIMD=scalar in the environment pins
// the scalar reference.
const BitKernels& active_kernels();

inline std::size_t words_for_bits(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

inline void or_into(std::span<Word> dst, std::span<const Word> src)
{
    active_kernels().or_into(dst.data(), src.data(), dst.size());
}

inline std::size_t or_into_count(std::span<Word> dst, std::span<const Word> src)
{
    return active_kernels().or_into_count(dst.data(), src.data(), dst.size());
}

inline std::size_t popcount(std::span<const Word> src)
{
    return active_kernels().popcount(src.data(), src.size());
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b)
{
    return active_kernels().popcount_and(a.data(), b.data(), a.size());
}

inline bool intersects(std::span<const Word> a, std::span<const Word> b)
{
    return active_kernels().intersects(a.data(), b.data(), a.size());
}

inline bool test_bit(std::span<const Word> bits, std::size_t i)
{
    return (bits[i / kWordBits] >> (i % kWordBits)) & 1u;
}

inline void set_bit(std::span<Word> bits, std::size_t i)
{
    bits[i / kWordBits] |= Word{1} << (i % kWordBits);
}

inline void clear_bit(std::span<Word> bits, std::size_t i)
{
    bits[i / kWordBits] &= ~(Word{1} << (i % kWordBits));
}

template <class F>
void for_each_bit(std::span<const Word> bits, F&& f)
{
    for (std::size_t w = 0; w < bits.size(); ++w) {
        Word word = bits[w];
        while (word) {
            const auto bit = static_cast<std::size_t>(__builtin_ctzll(word));
            f(w * kWordBits + bit);
            word &= word - 1;
        }
    }
}

} // namespace kong::simd
