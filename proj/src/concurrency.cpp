#include "kong/concurrency.hpp"

#include "kong/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <utility>

namespace kong {

RootRelation::RootRelation(const TokenFlowGraph& tfg)
    : tfg_(&tfg), roots_(tfg.roots()), position_(tfg.node_count(), kNone),
      cells_(ConcurrencyMatrix::undecided(tfg.roots().size()))
{
    for (std::size_t i = 0; i < roots_.size(); ++i)
        position_[roots_[i]] = i;
    apply_constants();
}

std::size_t RootRelation::slot(NodeIndex v) const
{
    if (!is_root(v))
        throw Error(ErrorCode::UnknownNode, "'" + (v < tfg_->node_count() ? tfg_->name(v) : std::to_string(v)) +
                                                "' is not a root of the TFG");
    return position_[v];
}

Cell RootRelation::at(NodeIndex v, NodeIndex w) const { return cells_.at(slot(v), slot(w)); }

void RootRelation::set(NodeIndex v, NodeIndex w, Cell value) { cells_.set(slot(v), slot(w), value); }

void RootRelation::apply_constants()
{
    for (NodeIndex v : roots_) {
        const auto k = tfg_->node(v).constant;
        if (!k) continue;
        for (NodeIndex w : roots_) {
            const auto kw = tfg_->node(w).constant;
            Cell value;
            if (*k == 0 || (kw && *kw == 0))
                value = Cell::Zero;
            else if (kw || w == v)
                value = Cell::One;
            else
                value = at(w, w);
            set(v, w, value);
        }
    }
}

RootRelation RootRelation::from_reduced(const TokenFlowGraph& tfg, const ConcurrencyMatrix& m2,
                                        std::span<const std::string> order2)
{
    RootRelation rel(tfg);
    std::vector<std::pair<NodeIndex, std::size_t>> rows;
    for (NodeIndex v : rel.roots_) {
        if (tfg.is_constant(v)) continue;
        auto it = std::find(order2.begin(), order2.end(), tfg.name(v));
        if (it == order2.end())
            throw Error(ErrorCode::UnknownNode, "root '" + tfg.name(v) + "' has no row in the reduced-net matrix");
        rows.emplace_back(v, static_cast<std::size_t>(it - order2.begin()));
    }
    for (const auto& [v, i] : rows)
        for (const auto& [w, j] : rows)
            rel.set(v, w, m2.at(i, j));
    rel.apply_constants();
    return rel;
}

// ---------------------------------------------------------------------------

std::size_t product_pairs(std::span<const simd::Word> a, std::span<const simd::Word> b)
{
    const std::size_t common = simd::popcount_and(a, b);
    return simd::popcount(a) * simd::popcount(b) - common * (common - (common ? 1 : 0)) / 2;
}

NodePropagator::NodePropagator(const TokenFlowGraph& tfg, ConcurrencyMatrix& matrix, KernelStats* stats)
    : tfg_(tfg), matrix_(matrix), stats_(stats), words_(simd::words_for_bits(tfg.node_count())),
      memo_(tfg.node_count() * words_, 0), done_(tfg.node_count(), false)
{
}

void NodePropagator::count_pairs(std::span<const simd::Word> a, std::span<const simd::Word> b)
{
    if (stats_) stats_->write_attempts += product_pairs(a, b);
}

std::span<const simd::Word> NodePropagator::propagate(NodeIndex v)
{
    std::span<simd::Word> succs(memo_.data() + v * words_, words_);
    if (done_[v]) {
        if (stats_) ++stats_->memo_hits;
        return succs;
    }
    if (stats_) {
        ++stats_->propagate_bodies;
        ++stats_->write_attempts;
    }
    if (matrix_.set(v, v, Cell::One) && stats_) ++stats_->cells_flipped;
    simd::set_bit(succs, v);
    for (NodeIndex w : tfg_.agglomeration_children(v))
        simd::or_into(succs, propagate(w));
    for (NodeIndex w : tfg_.redundancy_children(v)) {
        const auto child = propagate(w);
        count_pairs(succs, child);
        // Diagonals of both sets are already 1, so every flipped cell is two bits.
        const std::size_t flipped = matrix_.mark_product(succs, child);
        if (stats_) stats_->cells_flipped += flipped / 2;
        simd::or_into(succs, child);
    }
    done_[v] = true;
    return succs;
}

namespace {

// Pairs the successor sets of concurrent roots, rows split across workers.
void mark_root_pairs(const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs, NodePropagator& prop,
                     ConcurrencyMatrix& matrix, KernelStats* stats)
{
    if (pairs.empty()) return;
    std::vector<std::pair<std::span<const simd::Word>, std::span<const simd::Word>>> sets;
    sets.reserve(pairs.size());
    for (const auto& [v, w] : pairs) {
        sets.emplace_back(prop.propagate(v), prop.propagate(w));
        if (stats) stats->write_attempts += product_pairs(sets.back().first, sets.back().second);
    }
    std::atomic<std::size_t> flipped{0};
    parallel_rows(matrix.size(), 256, [&](std::size_t begin, std::size_t end) {
        std::size_t local = 0;
        for (const auto& [a, b] : sets)
            local += matrix.mark_product_rows(a, b, begin, end);
        flipped += local;
    });
    // Symmetric storage: an off-diagonal cell flips two bits.
    if (stats) stats->cells_flipped += flipped / 2;
}

} // namespace

ConcurrencyMatrix matrix_complete(const TokenFlowGraph& tfg, const RootRelation& rel2, KernelStats* stats)
{
    if (!rel2.complete())
        throw Error(ErrorCode::IncompleteRootRelation,
                    "the root relation has undecided cells; use the partial computation instead");
    ConcurrencyMatrix matrix = ConcurrencyMatrix::zeros(tfg.node_count());
    NodePropagator prop(tfg, matrix, stats);
    const auto& roots = rel2.roots();
    for (NodeIndex v : roots)
        if (rel2.at(v, v) == Cell::One) prop.propagate(v);
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (rel2.at(roots[i], roots[j]) == Cell::One) pairs.emplace_back(roots[i], roots[j]);
    mark_root_pairs(pairs, prop, matrix, stats);
    return matrix;
}

namespace {

class AxiomClosure {
public:
    AxiomClosure(const TokenFlowGraph& tfg, ConcurrencyMatrix& matrix, KernelStats* stats,
                 std::optional<std::uint64_t> seed)
        : tfg_(tfg), matrix_(matrix), stats_(stats)
    {
        if (seed) rng_.emplace(*seed);
    }

    void seed_known_zeros()
    {
        const std::size_t n = matrix_.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b <= a; ++b)
                if (matrix_.is_zero(a, b)) pending_.emplace_back(a, b);
    }

    void seed_siblings()
    {
        for (const TfgEquation& e : tfg_.equations())
            for (std::size_t i = 0; i < e.parts.size(); ++i)
                for (std::size_t j = i + 1; j < e.parts.size(); ++j)
                    close(e.parts[i], e.parts[j]);
    }

    void run()
    {
        while (!pending_.empty()) {
            std::size_t pick = pending_.size() - 1;
            if (rng_) pick = std::uniform_int_distribution<std::size_t>(0, pick)(*rng_);
            std::swap(pending_[pick], pending_.back());
            const auto [a, b] = pending_.back();
            pending_.pop_back();
            process(a, b);
            if (a != b) process(b, a);
        }
    }

private:
    void close(NodeIndex a, NodeIndex b)
    {
        if (!matrix_.is_unknown(a, b)) return;
        matrix_.set(a, b, Cell::Zero);
        if (stats_) ++stats_->axiom_writes;
        pending_.emplace_back(a, b);
    }

    bool dead(NodeIndex v) const { return matrix_.is_zero(v, v); }

    // Reacts to C[x,y] = 0.
    void process(NodeIndex x, NodeIndex y)
    {
        if (x == y) {
            for (NodeIndex w = 0; w < matrix_.size(); ++w)
                close(x, w); // A1
            for (std::size_t ei : tfg_.equations_with_part(x)) {
                const TfgEquation& e = tfg_.equations()[ei];
                if (std::all_of(e.parts.begin(), e.parts.end(), [&](NodeIndex p) { return dead(p); }))
                    close(e.head, e.head); // A2
            }
            for (std::size_t ei : tfg_.equations_with_head(x))
                for (NodeIndex p : tfg_.equations()[ei].parts)
                    close(p, p); // A3
        }
        for (std::size_t ei : tfg_.equations_with_part(x)) {
            const TfgEquation& e = tfg_.equations()[ei];
            if (std::all_of(e.parts.begin(), e.parts.end(), [&](NodeIndex p) { return matrix_.is_zero(p, y); }))
                close(e.head, y); // A5
        }
        for (std::size_t ei : tfg_.equations_with_head(x))
            for (NodeIndex p : tfg_.equations()[ei].parts)
                close(p, y); // A6
    }

    const TokenFlowGraph& tfg_;
    ConcurrencyMatrix& matrix_;
    KernelStats* stats_;
    std::optional<std::mt19937_64> rng_;
    std::vector<std::pair<NodeIndex, NodeIndex>> pending_;
};

} // namespace

ConcurrencyMatrix matrix_partial(const TokenFlowGraph& tfg, const RootRelation& rel2, KernelStats* stats,
                                 const PartialOptions& options)
{
    ConcurrencyMatrix matrix = ConcurrencyMatrix::undecided(tfg.node_count());
    const auto& roots = rel2.roots();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            matrix.set(roots[i], roots[j], rel2.at(roots[i], roots[j]));

    // A root concurrent with anything is live even when its diagonal is masked.
    NodePropagator prop(tfg, matrix, stats);
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (rel2.at(roots[i], roots[j]) != Cell::One) continue;
            prop.propagate(roots[i]);
            prop.propagate(roots[j]);
            if (i != j) pairs.emplace_back(roots[j], roots[i]);
        }
    }
    mark_root_pairs(pairs, prop, matrix, stats);

    AxiomClosure closure(tfg, matrix, stats, options.shuffle_seed);
    closure.seed_known_zeros();
    closure.seed_siblings();
    closure.run();
    return matrix;
}

ConcurrencyMatrix initial_places_view(const TokenFlowGraph& tfg, const ConcurrencyMatrix& full)
{
    std::vector<std::size_t> rows(tfg.initial_place_count());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i] = i;
    return full.restricted(rows);
}

} // namespace kong
