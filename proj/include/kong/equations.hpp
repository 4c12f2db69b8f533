#pragma once

#include "kong/petri_net.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kong {

/// R: the defined node is reconstructible from the parts (it is removed).
/// A: the defined node is split among the parts (they are removed).
enum class EquationTag { Redundancy, Agglomeration };

struct Term {
    std::string name;                   // empty for literals
    std::optional<TokenCount> constant; // set for literals

    static Term node(std::string name) { return Term{std::move(name), std::nullopt}; }
    static Term literal(TokenCount k) { return Term{{}, k}; }

    bool is_constant() const noexcept { return constant.has_value(); }
    std::string text() const { return constant ? std::to_string(*constant) : name; }

    friend bool operator==(const Term&, const Term&) = default;
};

/// defined = parts[0] + ... + parts[k-1]; at most one side is a literal and
/// a literal on the right stands alone.
struct Equation {
    EquationTag tag;
    Term defined;
    std::vector<Term> parts;

    /// Node names this equation removes.
    std::vector<std::string> removed() const;

    friend bool operator==(const Equation&, const Equation&) = default;
};

class EquationSystem {
public:
    /// Appends after checking the literal constraints (BadConstant,
    /// SyntaxError-free shape) and single removal (DuplicateRemoval).
    void add(Equation eq);

    const std::vector<Equation>& equations() const noexcept { return equations_; }
    std::size_t size() const noexcept { return equations_.size(); }
    bool empty() const noexcept { return equations_.empty(); }

    /// fv(E): variable names in first-occurrence order.
    std::vector<std::string> variables() const;

    friend bool operator==(const EquationSystem&, const EquationSystem&) = default;

private:
    std::vector<Equation> equations_;
};

/// Lines of the form `# R |- p5 = p4` or `# A |- a1 = p2 + p1`; blank lines
/// and `//` comments are skipped.
EquationSystem parse_equation_system(std::string_view input);
std::string write_equation_system(const EquationSystem& system);
std::string format_equation(const Equation& eq);

} // namespace kong
