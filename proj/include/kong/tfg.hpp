#pragma once

#include "kong/equations.hpp"
#include "kong/simd/bit_kernels.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kong {

using NodeIndex = std::size_t;

struct TfgNode {
    std::string name;
    std::optional<TokenCount> constant; // set for constant nodes, K(value)
};

/// One equation at node level: head = sum(parts).
/// Redundancy: arcs part ->• head. Agglomeration: arcs head o-> part.
struct TfgEquation {
    EquationTag tag;
    NodeIndex head;
    std::vector<NodeIndex> parts;
};

/// Token Flow Graph of a reduction equation system.
///
/// Node order is canonical: places of the initial net in document order,
/// then places only present in the reduced net, then inserted variables and
/// constant nodes in equation order. Every tie-break uses this order.
/// Immutable once built; successor sets are computed eagerly so concurrent
/// readers never race on a cache.
class TokenFlowGraph {
public:
    using Word = simd::Word;
    using ArcList = std::vector<std::pair<NodeIndex, NodeIndex>>;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    const TfgNode& node(NodeIndex v) const { return nodes_.at(v); }
    const std::string& name(NodeIndex v) const { return nodes_.at(v).name; }
    bool is_constant(NodeIndex v) const { return nodes_.at(v).constant.has_value(); }
    std::optional<NodeIndex> find(std::string_view name) const;
    /// Throws UnknownNode.
    NodeIndex require(std::string_view name) const;

    /// Nodes 0 .. initial_place_count()-1 are the places of the initial net.
    std::size_t initial_place_count() const noexcept { return initial_places_; }
    bool in_reduced_net(NodeIndex v) const { return in_reduced_.at(v); }

    const std::vector<NodeIndex>& roots() const noexcept { return roots_; }
    bool is_root(NodeIndex v) const { return parents_.at(v).empty(); }

    const std::vector<TfgEquation>& equations() const noexcept { return equations_; }
    const ArcList& redundancy_arcs() const noexcept { return r_arcs_; }
    const ArcList& agglomeration_arcs() const noexcept { return a_arcs_; }

    /// Children w with v o-> w, in equation order.
    std::span<const NodeIndex> agglomeration_children(NodeIndex v) const { return a_children_.at(v); }
    /// Children w with v ->• w, in arc order.
    std::span<const NodeIndex> redundancy_children(NodeIndex v) const { return r_children_.at(v); }
    std::span<const NodeIndex> parents(NodeIndex v) const { return parents_.at(v); }

    /// Index of the equation removing v, if any.
    std::optional<std::size_t> removing_equation(NodeIndex v) const;
    /// Equations whose head is v / whose parts contain v.
    std::span<const std::size_t> equations_with_head(NodeIndex v) const { return head_of_.at(v); }
    std::span<const std::size_t> equations_with_part(NodeIndex v) const { return part_of_.at(v); }
    /// The agglomeration equation headed by v, if any.
    std::optional<std::size_t> agglomeration_of(NodeIndex v) const;

    /// succs(v) = { w | v ->* w } as a node bitset (v included).
    std::span<const Word> successor_bits(NodeIndex v) const
    {
        return {succ_.data() + v * words_, words_};
    }
    std::vector<NodeIndex> successors(NodeIndex v) const;
    bool reaches(NodeIndex from, NodeIndex to) const { return simd::test_bit(successor_bits(from), to); }
    std::size_t words_per_set() const noexcept { return words_; }

    /// Parents before children.
    const std::vector<NodeIndex>& topological_order() const noexcept { return topo_; }

    /// Non-fatal findings (leaves that are not places of the initial net).
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool leaves_are_initial_places() const noexcept { return warnings_.empty(); }

private:
    friend TokenFlowGraph build_tfg(const EquationSystem&, std::span<const std::string>,
                                    std::span<const std::string>);

    std::vector<TfgNode> nodes_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::size_t initial_places_ = 0;
    std::vector<bool> in_reduced_;
    std::vector<TfgEquation> equations_;
    ArcList r_arcs_;
    ArcList a_arcs_;
    std::vector<std::vector<NodeIndex>> a_children_;
    std::vector<std::vector<NodeIndex>> r_children_;
    std::vector<std::vector<NodeIndex>> parents_;
    std::vector<std::optional<std::size_t>> removed_by_;
    std::vector<std::vector<std::size_t>> head_of_;
    std::vector<std::vector<std::size_t>> part_of_;
    std::vector<NodeIndex> roots_;
    std::vector<NodeIndex> topo_;
    std::size_t words_ = 0;
    std::vector<Word> succ_;
    std::vector<std::string> warnings_;
};

/// Builds the graph and checks well-formedness:
///   T1  non-constant roots are exactly the places of the reduced net,
///   T2  constants are roots,
///   T3  every node is removed at most once,
///   T4  one arc group per equation (no repeated parts, one agglomeration
///       per head),
///   acyclicity.
/// Throws WellFormednessError. Leaves outside the initial net only produce
/// a warning.
TokenFlowGraph build_tfg(const EquationSystem& equations, std::span<const std::string> initial_places,
                         std::span<const std::string> reduced_places);

std::vector<NodeIndex> successors(const TokenFlowGraph& tfg, std::string_view node);

// ---------------------------------------------------------------------------
// Configurations

using Count = std::uint64_t;

/// Partial valuation of the nodes. Constant nodes always hold their value.
class Configuration {
public:
    explicit Configuration(const TokenFlowGraph& tfg);

    std::optional<Count> operator[](NodeIndex v) const { return values_.at(v); }
    /// Throws IllDefinedInput when asked to change a constant node.
    void set(NodeIndex v, std::optional<Count> value);
    std::size_t size() const noexcept { return values_.size(); }
    bool total() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::vector<std::optional<Count>> values_;
    std::vector<bool> fixed_;
};

struct ConfigurationVerdict {
    enum class Kind { WellDefined, CBot, CEq };
    Kind kind = Kind::WellDefined;
    std::optional<NodeIndex> node;

    bool well_defined() const noexcept { return kind == Kind::WellDefined; }
};

/// CBot: along every arc both ends are defined or both undefined (reported
/// on the undefined end). CEq: each defined equation head equals the sum of
/// its parts (reported on the head).
ConfigurationVerdict check_configuration(const TokenFlowGraph& tfg, const Configuration& c);

/// Forward token propagation: a well-defined c' with c'(q) >= c'(p) = c(p)
/// that agrees with c outside succs(p). The token is routed down one
/// deterministic path and the descendants are re-balanced in topological
/// order.
Configuration propagate_token(const TokenFlowGraph& tfg, const Configuration& c, NodeIndex p,
                              NodeIndex q);

/// Re-splits the agglomeration p o-> X with the given shares (X in equation
/// order), keeping c'(p) = c(p) and c outside succs(p).
Configuration split_token(const TokenFlowGraph& tfg, const Configuration& c, NodeIndex p,
                          std::span<const Count> shares);

/// Smallest root (canonical order) v with v ->* p and c(v) > 0.
NodeIndex find_marked_root(const TokenFlowGraph& tfg, const Configuration& c, NodeIndex p);

} // namespace kong
