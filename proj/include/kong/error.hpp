#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kong {

enum class ErrorCode {
    // petri-core
    NotEnabled,
    UnknownTransition,
    UnknownPlace,
    NotSafe,
    // net formats
    Malformed,
    Unsupported,
    SyntaxError,
    DuplicateId,
    // equations / TFG
    DuplicateRemoval,
    BadConstant,
    WellFormedness,
    UnknownNode,
    NotAncestor,
    UndefinedAt,
    IllDefinedInput,
    BadShareSum,
    NotAgglomeration,
    NoTokenAt,
    // kernel
    IncompleteRootRelation,
    // matrix io
    BadHeader,
    RowLengthMismatch,
    BadSymbol,
    OrderMismatch,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse error carrying a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, std::string expected);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string expected_;
};

enum class WellFormedCondition { T1, T2, T3, T4, Cycle };

std::string_view to_string(WellFormedCondition condition);

class WellFormednessError : public Error {
public:
    WellFormednessError(WellFormedCondition condition, std::vector<std::string> nodes,
                        const std::string& detail);

    WellFormedCondition condition() const noexcept { return condition_; }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }

private:
    WellFormedCondition condition_;
    std::vector<std::string> nodes_;
};

} // namespace kong
