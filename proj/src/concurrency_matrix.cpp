#include "kong/concurrency_matrix.hpp"

#include <cassert>

namespace kong {

using simd::clear_bit;
using simd::set_bit;
using simd::test_bit;

char to_symbol(Cell cell)
{
    switch (cell) {
    case Cell::Zero: return '0';
    case Cell::One: return '1';
    case Cell::Unknown: return '.';
    }
    return '?';
}

ConcurrencyMatrix::ConcurrencyMatrix(std::size_t n, bool known)
    : n_(n), words_(simd::words_for_bits(n)), known_(n * words_, 0), ones_(n * words_, 0)
{
    if (known) {
        for (std::size_t i = 0; i < n_; ++i) {
            auto row = known_row_mut(i);
            for (std::size_t j = 0; j < n_; ++j)
                set_bit(row, j);
        }
    }
}

ConcurrencyMatrix ConcurrencyMatrix::zeros(std::size_t n) { return ConcurrencyMatrix(n, true); }

ConcurrencyMatrix ConcurrencyMatrix::undecided(std::size_t n) { return ConcurrencyMatrix(n, false); }

std::span<ConcurrencyMatrix::Word> ConcurrencyMatrix::ones_row_mut(std::size_t i)
{
    return {ones_.data() + i * words_, words_};
}

std::span<ConcurrencyMatrix::Word> ConcurrencyMatrix::known_row_mut(std::size_t i)
{
    return {known_.data() + i * words_, words_};
}

std::span<const ConcurrencyMatrix::Word> ConcurrencyMatrix::ones_row(std::size_t i) const
{
    return {ones_.data() + i * words_, words_};
}

std::span<const ConcurrencyMatrix::Word> ConcurrencyMatrix::known_row(std::size_t i) const
{
    return {known_.data() + i * words_, words_};
}

Cell ConcurrencyMatrix::at(std::size_t i, std::size_t j) const
{
    assert(i < n_ && j < n_);
    if (!test_bit(known_row(i), j)) return Cell::Unknown;
    return test_bit(ones_row(i), j) ? Cell::One : Cell::Zero;
}

bool ConcurrencyMatrix::is_zero(std::size_t i, std::size_t j) const { return at(i, j) == Cell::Zero; }
bool ConcurrencyMatrix::is_one(std::size_t i, std::size_t j) const { return at(i, j) == Cell::One; }
bool ConcurrencyMatrix::is_unknown(std::size_t i, std::size_t j) const
{
    return at(i, j) == Cell::Unknown;
}

bool ConcurrencyMatrix::set(std::size_t i, std::size_t j, Cell value)
{
    if (at(i, j) == value) return false;
    for (auto [r, c] : {std::pair{i, j}, std::pair{j, i}}) {
        auto known = known_row_mut(r);
        auto ones = ones_row_mut(r);
        switch (value) {
        case Cell::Unknown:
            clear_bit(known, c);
            clear_bit(ones, c);
            break;
        case Cell::Zero:
            set_bit(known, c);
            clear_bit(ones, c);
            break;
        case Cell::One:
            set_bit(known, c);
            set_bit(ones, c);
            break;
        }
    }
    return true;
}

std::size_t ConcurrencyMatrix::mark_product(std::span<const Word> rows, std::span<const Word> cols)
{
    return mark_product_rows(rows, cols, 0, n_);
}

std::size_t ConcurrencyMatrix::mark_product_rows(std::span<const Word> rows,
                                                 std::span<const Word> cols,
                                                 std::size_t row_begin, std::size_t row_end)
{
    const auto& k = simd::active_kernels();
    std::size_t added = 0;
    auto fill = [&](std::span<const Word> targets, std::span<const Word> values) {
        simd::for_each_bit(targets, [&](std::size_t r) {
            if (r < row_begin || r >= row_end) return;
            added += k.or_into_count(ones_.data() + r * words_, values.data(), words_);
            k.or_into(known_.data() + r * words_, values.data(), words_);
        });
    };
    fill(rows, cols);
    fill(cols, rows);
    return added;
}

std::size_t ConcurrencyMatrix::mark_clique(std::span<const Word> members)
{
    return mark_clique_rows(members, 0, n_);
}

std::size_t ConcurrencyMatrix::mark_clique_rows(std::span<const Word> members, std::size_t row_begin,
                                                std::size_t row_end)
{
    const auto& k = simd::active_kernels();
    std::size_t added = 0;
    simd::for_each_bit(members, [&](std::size_t r) {
        if (r < row_begin || r >= row_end) return;
        added += k.or_into_count(ones_.data() + r * words_, members.data(), words_);
        k.or_into(known_.data() + r * words_, members.data(), words_);
    });
    return added;
}

std::size_t ConcurrencyMatrix::defined_cells() const
{
    // Symmetric storage counts off-diagonal cells twice.
    const std::size_t total = simd::active_kernels().popcount(known_.data(), known_.size());
    std::size_t diagonal = 0;
    for (std::size_t i = 0; i < n_; ++i)
        diagonal += test_bit(known_row(i), i) ? 1 : 0;
    return (total + diagonal) / 2;
}

ConcurrencyMatrix ConcurrencyMatrix::restricted(std::span<const std::size_t> indices) const
{
    ConcurrencyMatrix out = undecided(indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a)
        for (std::size_t b = 0; b <= a; ++b)
            out.set(a, b, at(indices[a], indices[b]));
    return out;
}

} // namespace kong
