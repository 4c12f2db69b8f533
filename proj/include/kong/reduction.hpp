#pragma once

#include "kong/equations.hpp"
#include "kong/net_formats.hpp"

#include <cstddef>

namespace kong {

/// removed / total, kept exact.
struct Ratio {
    std::size_t removed = 0;
    std::size_t total = 0;

    /// 0 places removed out of 0 counts as 0.
    double value() const noexcept { return total == 0 ? 0.0 : static_cast<double>(removed) / total; }

    /// Exact comparison of the two fractions.
    friend bool operator==(const Ratio& a, const Ratio& b) noexcept
    {
        return a.removed * b.total == b.removed * a.total && (a.total == 0) == (b.total == 0);
    }
};

struct ReductionResult {
    NetDocument original;
    NetDocument residual;
    EquationSystem equations;
    Ratio ratio;
};

/// Reduces a safe net to a fixpoint with three rules, scanning places in
/// order and trying, for each place, R-dup, R-const, then A-chain:
///
///   R-dup    q has the same pre/post column and initial marking as an
///            earlier place p: drop q, emit `R |- q = p`.
///   R-const  every transition touching p has pre(t,p) = post(t,p): drop p,
///            emit `R |- p = k` with k = m(p). Transitions needing more than
///            k tokens from p can never fire and are removed too.
///   A-chain  p is consumed only by t, t has pre {p:1} and post {q:1}, q is
///            produced only by t and m(q) = 0: replace p and q by a fresh
///            place x (at p's position, m(x) = m(p)), drop t, emit
///            `A |- x = p + q`.
///
/// Fresh places are named a1, a2, ... skipping names already in use.
/// Transitions left with no arcs at all are dropped.
ReductionResult reduce_net(const NetDocument& doc);

/// Fraction of the original places missing from the residual net.
Ratio reduction_ratio(const NetDocument& original, const NetDocument& residual);
Ratio reduction_ratio(const ReductionResult& result);

/// Place names of a net document, in order.
std::vector<std::string> place_names(const NetDocument& doc);

} // namespace kong
