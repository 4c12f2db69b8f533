#pragma once

#include "kong/concurrency_matrix.hpp"
#include "kong/error.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kong {

enum class MatrixEncoding { Plain, Rle };

/// Text form:
///
///     n
///     name_0
///     ...
///     name_{n-1}
///     row_0
///     ...
///     row_{n-1}
///
/// Row i lists C[i,0..i] with the symbols 0, 1 and `.` (undecided). In the
/// run-length encoding a run of k >= 2 equal symbols s is written `k(s)`.
/// A digit string directly followed by `(` is a count; any other digit is a
/// symbol, so the writer spells a single 0 or 1 that precedes a count as
/// `1(s)`.
struct MatrixDocument {
    std::vector<std::string> order;
    ConcurrencyMatrix matrix;
    MatrixEncoding encoding = MatrixEncoding::Plain;

    /// The encoding is presentation only and does not take part.
    friend bool operator==(const MatrixDocument& a, const MatrixDocument& b)
    {
        return a.order == b.order && a.matrix == b.matrix;
    }
};

/// BadHeader, RowLengthMismatch and BadSymbol carry 0-based positions.
class MatrixFormatError : public Error {
public:
    MatrixFormatError(ErrorCode code, std::size_t row, std::size_t column, const std::string& message)
        : Error(code, message), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

std::string write_matrix(const MatrixDocument& doc);

/// Accepts both encodings, and literals mixed with runs in one row; the
/// returned encoding is Rle when some row holds a run.
MatrixDocument read_matrix(std::string_view text);

std::string encode_row(std::string_view symbols, MatrixEncoding encoding);

/// 2|C| / (n^2 + n) with |C| the number of decided cells; 1 for n = 0.
double filling_ratio(const ConcurrencyMatrix& m);

struct MatrixComparison {
    enum class Kind { Equal, Compatible, Contradiction };
    Kind kind = Kind::Equal;
    /// Cells decided on one side and undecided on the other.
    std::size_t resolved = 0;
    /// (row, column) with row >= column where one side says 0 and the other 1.
    std::vector<std::pair<std::size_t, std::size_t>> conflicts;
};

/// Throws OrderMismatch when the two documents list different nodes.
MatrixComparison compare_matrices(const MatrixDocument& a, const MatrixDocument& b);

std::string_view to_string(MatrixComparison::Kind kind);

} // namespace kong
