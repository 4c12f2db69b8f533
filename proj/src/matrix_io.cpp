#include "kong/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace kong {

namespace {

bool is_symbol(char c) { return c == '0' || c == '1' || c == '.'; }

Cell from_symbol(char c)
{
    switch (c) {
    case '0': return Cell::Zero;
    case '1': return Cell::One;
    default: return Cell::Unknown;
    }
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = eol + 1;
    }
    return lines;
}

[[noreturn]] void bad_header(const std::string& why)
{
    throw MatrixFormatError(ErrorCode::BadHeader, 0, 0, "bad matrix header: " + why);
}

[[noreturn]] void bad_symbol(std::size_t row, std::size_t column, char c)
{
    throw MatrixFormatError(ErrorCode::BadSymbol, row, column,
                            "row " + std::to_string(row) + ", column " + std::to_string(column) +
                                ": unexpected character '" + std::string(1, c) + "'");
}

std::string decode_row(std::string_view text, std::size_t row, bool& saw_run)
{
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t digits = i;
        while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits])))
            ++digits;
        if (digits > i && digits < text.size() && text[digits] == '(') {
            std::size_t count = 0;
            auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + digits, count);
            if (ec != std::errc{} || count == 0) bad_symbol(row, i, text[i]);
            if (digits + 1 >= text.size()) bad_symbol(row, digits, '(');
            if (!is_symbol(text[digits + 1])) bad_symbol(row, digits + 1, text[digits + 1]);
            if (digits + 2 >= text.size() || text[digits + 2] != ')')
                bad_symbol(row, digits + 1, text[digits + 1]);
            if (count > row + 1)
                throw MatrixFormatError(ErrorCode::RowLengthMismatch, row, i,
                                        "row " + std::to_string(row) + " is longer than " + std::to_string(row + 1));
            out.append(count, text[digits + 1]);
            saw_run = true;
            i = digits + 3;
            continue;
        }
        if (!is_symbol(text[i])) bad_symbol(row, i, text[i]);
        out += text[i++];
    }
    return out;
}

} // namespace

std::string encode_row(std::string_view symbols, MatrixEncoding encoding)
{
    if (encoding == MatrixEncoding::Plain) return std::string(symbols);
    std::vector<std::pair<char, std::size_t>> runs;
    for (char c : symbols) {
        if (!runs.empty() && runs.back().first == c)
            ++runs.back().second;
        else
            runs.emplace_back(c, 1);
    }
    // Right to left: a literal digit in front of a count would read as part
    // of that count, so it becomes a count of one.
    std::vector<bool> as_count(runs.size(), false);
    bool next_is_count = false;
    for (std::size_t k = runs.size(); k-- > 0;) {
        as_count[k] = runs[k].second >= 2 || (runs[k].first != '.' && next_is_count);
        next_is_count = as_count[k];
    }
    std::string out;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        if (as_count[k])
            out += std::to_string(runs[k].second) + "(" + runs[k].first + ")";
        else
            out += runs[k].first;
    }
    return out;
}

std::string write_matrix(const MatrixDocument& doc)
{
    const std::size_t n = doc.order.size();
    if (doc.matrix.size() != n)
        throw Error(ErrorCode::OrderMismatch, "matrix has " + std::to_string(doc.matrix.size()) + " rows but " +
                                                  std::to_string(n) + " names");
    std::string out = std::to_string(n) + "\n";
    for (const std::string& name : doc.order)
        out += name + "\n";
    std::string symbols;
    for (std::size_t i = 0; i < n; ++i) {
        symbols.clear();
        for (std::size_t j = 0; j <= i; ++j)
            symbols += to_symbol(doc.matrix.at(i, j));
        out += encode_row(symbols, doc.encoding);
        out += '\n';
    }
    return out;
}

MatrixDocument read_matrix(std::string_view text)
{
    const auto lines = split_lines(text);
    if (lines.empty()) bad_header("empty input");
    std::size_t n = 0;
    {
        const std::string_view first = lines[0];
        auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), n);
        if (first.empty() || ec != std::errc{} || ptr != first.data() + first.size())
            bad_header("first line must be the node count, got '" + std::string(first) + "'");
    }
    if (lines.size() < 1 + n) bad_header("expected " + std::to_string(n) + " node names");

    MatrixDocument doc;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string_view name = lines[1 + i];
        if (name.empty() || std::any_of(name.begin(), name.end(), [](char c) {
                return std::isspace(static_cast<unsigned char>(c));
            }))
            bad_header("invalid node name on line " + std::to_string(i + 2));
        doc.order.emplace_back(name);
    }

    doc.matrix = ConcurrencyMatrix::undecided(n);
    bool saw_run = false;
    for (std::size_t row = 0; row < n; ++row) {
        const std::size_t line = 1 + n + row;
        const std::string decoded = line < lines.size() ? decode_row(lines[line], row, saw_run) : std::string();
        if (decoded.size() != row + 1)
            throw MatrixFormatError(ErrorCode::RowLengthMismatch, row, decoded.size(),
                                    "row " + std::to_string(row) + " has " + std::to_string(decoded.size()) +
                                        " cells, expected " + std::to_string(row + 1));
        for (std::size_t col = 0; col <= row; ++col)
            doc.matrix.set(row, col, from_symbol(decoded[col]));
    }
    for (std::size_t line = 1 + 2 * n; line < lines.size(); ++line)
        if (!lines[line].empty())
            throw MatrixFormatError(ErrorCode::RowLengthMismatch, n, 0,
                                    "unexpected row " + std::to_string(n) + " after the last one");
    doc.encoding = saw_run ? MatrixEncoding::Rle : MatrixEncoding::Plain;
    return doc;
}

double filling_ratio(const ConcurrencyMatrix& m)
{
    const std::size_t n = m.size();
    if (n == 0) return 1.0;
    return 2.0 * static_cast<double>(m.defined_cells()) / static_cast<double>(n * n + n);
}

MatrixComparison compare_matrices(const MatrixDocument& a, const MatrixDocument& b)
{
    if (a.order != b.order) throw Error(ErrorCode::OrderMismatch, "the two matrices list different nodes");
    MatrixComparison report;
    const std::size_t n = a.order.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const Cell x = a.matrix.at(i, j);
            const Cell y = b.matrix.at(i, j);
            if (x == y) continue;
            if (x == Cell::Unknown || y == Cell::Unknown)
                ++report.resolved;
            else
                report.conflicts.emplace_back(i, j);
        }
    }
    if (!report.conflicts.empty())
        report.kind = MatrixComparison::Kind::Contradiction;
    else if (report.resolved > 0)
        report.kind = MatrixComparison::Kind::Compatible;
    return report;
}

std::string_view to_string(MatrixComparison::Kind kind)
{
    switch (kind) {
    case MatrixComparison::Kind::Equal: return "equal";
    case MatrixComparison::Kind::Compatible: return "compatible";
    case MatrixComparison::Kind::Contradiction: return "contradiction";
    }
    return "?";
}

} // namespace kong
