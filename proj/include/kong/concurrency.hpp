#pragma once

#include "kong/concurrency_matrix.hpp"
#include "kong/tfg.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kong {

/// Concurrency relation on the roots of a TFG: the places of the reduced
/// net plus the constant nodes.
class RootRelation {
public:
    /// Every cell undecided, then constant rows filled in (see
    /// apply_constants).
    explicit RootRelation(const TokenFlowGraph& tfg);

    /// Reads the reduced-net places from `m2` (rows in `order2`) and fills
    /// the constant rows. Throws UnknownNode when a non-constant root is not
    /// in `order2`.
    static RootRelation from_reduced(const TokenFlowGraph& tfg, const ConcurrencyMatrix& m2,
                                     std::span<const std::string> order2);

    const std::vector<NodeIndex>& roots() const noexcept { return roots_; }
    bool is_root(NodeIndex v) const { return v < position_.size() && position_[v] != kNone; }

    /// Node indices; both must be roots.
    Cell at(NodeIndex v, NodeIndex w) const;
    void set(NodeIndex v, NodeIndex w, Cell value);

    /// K(0) rows are 0. K(1) is live, concurrent with other K(1) roots and
    /// with a place root exactly as far as that place is known to be live.
    void apply_constants();

    bool complete() const { return cells_.complete(); }
    const ConcurrencyMatrix& cells() const noexcept { return cells_; }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    std::size_t slot(NodeIndex v) const;

    const TokenFlowGraph* tfg_;
    std::vector<NodeIndex> roots_;
    std::vector<std::size_t> position_;
    ConcurrencyMatrix cells_;
};

/// Instrumentation of one kernel run.
struct KernelStats {
    std::size_t propagate_bodies = 0; // Propagate executions, memo hits excluded
    std::size_t memo_hits = 0;
    std::size_t write_attempts = 0;   // cells addressed by 1-writes, as unordered pairs
    std::size_t cells_flipped = 0;    // cells that actually changed to 1
    std::size_t axiom_writes = 0;     // cells closed to 0 by the partial-mode axioms
};

/// Function Propagate with its memo table. Calls after the first one for a
/// node return the stored successor set and write nothing.
class NodePropagator {
public:
    NodePropagator(const TokenFlowGraph& tfg, ConcurrencyMatrix& matrix, KernelStats* stats = nullptr);

    /// Marks v live, recurses into agglomeration children, then pairs the
    /// successors gathered so far with those of each redundancy child.
    /// Returns succs(v) as a node bitset.
    std::span<const simd::Word> propagate(NodeIndex v);

    bool visited(NodeIndex v) const { return done_.at(v); }

private:
    void count_pairs(std::span<const simd::Word> a, std::span<const simd::Word> b);

    const TokenFlowGraph& tfg_;
    ConcurrencyMatrix& matrix_;
    KernelStats* stats_;
    std::size_t words_;
    std::vector<simd::Word> memo_;
    std::vector<bool> done_;
};

/// Unordered pairs {a, b} with a in A and b in B.
std::size_t product_pairs(std::span<const simd::Word> a, std::span<const simd::Word> b);

/// Function Matrix over all TFG nodes: start from zeros, propagate every
/// live root, then pair the successor sets of concurrent roots. Rows of the
/// result follow the TFG node order. Throws IncompleteRootRelation when rel2
/// has an undecided cell.
ConcurrencyMatrix matrix_complete(const TokenFlowGraph& tfg, const RootRelation& rel2,
                                  KernelStats* stats = nullptr);

struct PartialOptions {
    /// Processes the axiom worklist in a random order drawn from this seed.
    std::optional<std::uint64_t> shuffle_seed;
};

/// Starts from an undecided matrix, seeds the root cells, runs the
/// 1-propagation from roots known to be live, then closes the matrix under
/// the 0-axioms (per equation head = sum of parts):
///
///   A1  C[v,v] = 0 implies C[v,w] = 0 for every w
///   A2  every part dead implies the head dead
///   A3  head dead implies every part dead
///   A4  distinct parts of one equation are nonconcurrent
///   A5  every part nonconcurrent with w implies the head nonconcurrent with w
///   A6  head nonconcurrent with w implies every part nonconcurrent with w
///
/// Axioms only ever write into undecided cells.
ConcurrencyMatrix matrix_partial(const TokenFlowGraph& tfg, const RootRelation& rel2,
                                 KernelStats* stats = nullptr, const PartialOptions& options = {});

/// Rows of the initial-net places, in net order.
ConcurrencyMatrix initial_places_view(const TokenFlowGraph& tfg, const ConcurrencyMatrix& full);

} // namespace kong
