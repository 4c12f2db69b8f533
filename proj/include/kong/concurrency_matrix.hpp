#pragma once

#include "kong/simd/bit_kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kong {

/// Cell of a concurrency matrix: nonconcurrent, concurrent, or undecided.
enum class Cell : std::uint8_t { Zero, One, Unknown };

char to_symbol(Cell cell);

/// Symmetric tri-state matrix over an ordered set of nodes.
///
/// The logical content is the lower triangle C[i,0..i]. Storage is two
/// square bit matrices (`known`, `ones`) kept symmetric so that whole rows
/// can be updated with the word kernels; at(i, j) == at(j, i) always holds.
class ConcurrencyMatrix {
public:
    using Word = simd::Word;

    ConcurrencyMatrix() = default;

    static ConcurrencyMatrix zeros(std::size_t n);
    static ConcurrencyMatrix undecided(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::size_t words_per_row() const noexcept { return words_; }

    Cell at(std::size_t i, std::size_t j) const;

    /// Returns true when the stored value changed.
    bool set(std::size_t i, std::size_t j, Cell value);

    bool is_zero(std::size_t i, std::size_t j) const;
    bool is_one(std::size_t i, std::size_t j) const;
    bool is_unknown(std::size_t i, std::size_t j) const;

    /// C[a,b] = 1 for every a in `rows`, b in `cols` (both as node bitsets).
    /// Returns the number of matrix bits that flipped to 1.
    std::size_t mark_product(std::span<const Word> rows, std::span<const Word> cols);

    /// Same as mark_product but only touches matrix rows in [row_begin, row_end),
    /// so disjoint row ranges may be filled by different threads.
    std::size_t mark_product_rows(std::span<const Word> rows, std::span<const Word> cols,
                                  std::size_t row_begin, std::size_t row_end);

    /// C[a,b] = 1 for every pair a, b of `members` (diagonal included).
    std::size_t mark_clique(std::span<const Word> members);
    std::size_t mark_clique_rows(std::span<const Word> members, std::size_t row_begin,
                                 std::size_t row_end);

    std::span<const Word> ones_row(std::size_t i) const;
    std::span<const Word> known_row(std::size_t i) const;

    /// Number of decided cells in the lower triangle (diagonal included).
    std::size_t defined_cells() const;
    std::size_t cell_count() const noexcept { return n_ * (n_ + 1) / 2; }
    bool complete() const { return defined_cells() == cell_count(); }

    /// Sub-matrix over the given node indices, in that order.
    ConcurrencyMatrix restricted(std::span<const std::size_t> indices) const;

    friend bool operator==(const ConcurrencyMatrix&, const ConcurrencyMatrix&) = default;

private:
    ConcurrencyMatrix(std::size_t n, bool known);

    std::span<Word> ones_row_mut(std::size_t i);
    std::span<Word> known_row_mut(std::size_t i);

    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<Word> known_;
    std::vector<Word> ones_;
};

} // namespace kong
