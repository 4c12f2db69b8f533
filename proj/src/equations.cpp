#include "kong/equations.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace kong {

std::vector<std::string> Equation::removed() const
{
    std::vector<std::string> out;
    if (tag == EquationTag::Redundancy) {
        if (!defined.is_constant()) out.push_back(defined.name);
    } else {
        for (const Term& t : parts)
            if (!t.is_constant()) out.push_back(t.name);
    }
    return out;
}

void EquationSystem::add(Equation eq)
{
    if (eq.parts.empty()) throw Error(ErrorCode::SyntaxError, "equation without right-hand side");
    auto check_constant = [](const Term& t) {
        if (t.is_constant() && *t.constant > 1)
            throw Error(ErrorCode::BadConstant,
                        "constant " + std::to_string(*t.constant) + " is not 0 or 1");
    };
    check_constant(eq.defined);
    const auto literal_parts =
        std::count_if(eq.parts.begin(), eq.parts.end(), [](const Term& t) { return t.is_constant(); });
    for (const Term& t : eq.parts)
        check_constant(t);
    if (literal_parts > 0 && (eq.parts.size() > 1 || eq.defined.is_constant()))
        throw Error(ErrorCode::SyntaxError, "a constant must stand alone on one side: " + format_equation(eq));

    for (const std::string& name : eq.removed()) {
        for (const Equation& prior : equations_) {
            const auto prior_removed = prior.removed();
            if (std::find(prior_removed.begin(), prior_removed.end(), name) != prior_removed.end())
                throw Error(ErrorCode::DuplicateRemoval,
                            "node '" + name + "' is removed twice (T3: nodes can be removed only once)");
        }
    }
    equations_.push_back(std::move(eq));
}

std::vector<std::string> EquationSystem::variables() const
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    auto visit = [&](const Term& t) {
        if (!t.is_constant() && seen.insert(t.name).second) out.push_back(t.name);
    };
    for (const Equation& eq : equations_) {
        visit(eq.defined);
        for (const Term& t : eq.parts)
            visit(t);
    }
    return out;
}

namespace {

class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    void skip_spaces()
    {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
    }

    bool at_end()
    {
        skip_spaces();
        return pos_ >= line_.size();
    }

    void expect(std::string_view token)
    {
        skip_spaces();
        if (line_.substr(pos_, token.size()) != token)
            throw SyntaxError(line_no_, pos_ + 1, "'" + std::string(token) + "'");
        pos_ += token.size();
    }

    bool accept(char c)
    {
        skip_spaces();
        if (pos_ < line_.size() && line_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    EquationTag tag()
    {
        skip_spaces();
        if (pos_ < line_.size() && (line_[pos_] == 'R' || line_[pos_] == 'A')) {
            const char c = line_[pos_++];
            return c == 'R' ? EquationTag::Redundancy : EquationTag::Agglomeration;
        }
        throw SyntaxError(line_no_, pos_ + 1, "tag 'R' or 'A'");
    }

    Term term()
    {
        skip_spaces();
        const std::size_t start = pos_;
        while (pos_ < line_.size()) {
            const char c = line_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '+' || c == '=' || c == '#') break;
            ++pos_;
        }
        if (pos_ == start) throw SyntaxError(line_no_, start + 1, "identifier or constant");
        const std::string_view text = line_.substr(start, pos_ - start);
        if (std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            TokenCount value = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{}) throw Error(ErrorCode::BadConstant, "constant '" + std::string(text) + "' out of range");
            return Term::literal(value);
        }
        return Term::node(std::string(text));
    }

    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

bool skippable(std::string_view line)
{
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string_view::npos || line.substr(first, 2) == "//";
}

} // namespace

EquationSystem parse_equation_system(std::string_view input)
{
    EquationSystem system;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= input.size()) {
        const std::size_t eol = input.find('\n', pos);
        const std::string_view line =
            input.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        ++line_no;
        if (!skippable(line)) {
            LineScanner scan(line, line_no);
            scan.expect("#");
            Equation eq;
            eq.tag = scan.tag();
            scan.expect("|-");
            eq.defined = scan.term();
            scan.expect("=");
            eq.parts.push_back(scan.term());
            while (scan.accept('+'))
                eq.parts.push_back(scan.term());
            if (!scan.at_end()) scan.expect("+");
            try {
                system.add(std::move(eq));
            } catch (const Error& e) {
                if (e.code() == ErrorCode::SyntaxError) throw SyntaxError(line_no, 1, "well-formed equation");
                throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return system;
}

std::string format_equation(const Equation& eq)
{
    std::string out = "# ";
    out += eq.tag == EquationTag::Redundancy ? 'R' : 'A';
    out += " |- " + eq.defined.text() + " =";
    for (std::size_t i = 0; i < eq.parts.size(); ++i) {
        out += i ? " + " : " ";
        out += eq.parts[i].text();
    }
    return out;
}

std::string write_equation_system(const EquationSystem& system)
{
    std::string out;
    for (const Equation& eq : system.equations())
        out += format_equation(eq) + "\n";
    return out;
}

} // namespace kong
