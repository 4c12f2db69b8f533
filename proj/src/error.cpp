#include "kong/error.hpp"

namespace kong {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::UnknownTransition: return "UnknownTransition";
    case ErrorCode::UnknownPlace: return "UnknownPlace";
    case ErrorCode::NotSafe: return "NotSafe";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DuplicateRemoval: return "DuplicateRemoval";
    case ErrorCode::BadConstant: return "BadConstant";
    case ErrorCode::WellFormedness: return "WellFormedness";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NotAncestor: return "NotAncestor";
    case ErrorCode::UndefinedAt: return "UndefinedAt";
    case ErrorCode::IllDefinedInput: return "IllDefinedInput";
    case ErrorCode::BadShareSum: return "BadShareSum";
    case ErrorCode::NotAgglomeration: return "NotAgglomeration";
    case ErrorCode::NoTokenAt: return "NoTokenAt";
    case ErrorCode::IncompleteRootRelation: return "IncompleteRootRelation";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::RowLengthMismatch: return "RowLengthMismatch";
    case ErrorCode::BadSymbol: return "BadSymbol";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string_view to_string(WellFormedCondition condition)
{
    switch (condition) {
    case WellFormedCondition::T1: return "T1";
    case WellFormedCondition::T2: return "T2";
    case WellFormedCondition::T3: return "T3";
    case WellFormedCondition::T4: return "T4";
    case WellFormedCondition::Cycle: return "Cycle";
    }
    return "?";
}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string expected)
    : Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": expected " + expected),
      line_(line), column_(column), expected_(std::move(expected))
{
}

namespace {

std::string describe(WellFormedCondition condition, const std::vector<std::string>& nodes,
                     const std::string& detail)
{
    std::string msg = "TFG not well-formed (";
    msg += to_string(condition);
    msg += "): ";
    msg += detail;
    if (!nodes.empty()) {
        msg += " [";
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (i) msg += ", ";
            msg += nodes[i];
        }
        msg += "]";
    }
    return msg;
}

} // namespace

WellFormednessError::WellFormednessError(WellFormedCondition condition,
                                         std::vector<std::string> nodes,
                                         const std::string& detail)
    : Error(ErrorCode::WellFormedness, describe(condition, nodes, detail)),
      condition_(condition), nodes_(std::move(nodes))
{
}

} // namespace kong
