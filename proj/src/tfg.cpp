#include "kong/tfg.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_set>

namespace kong {

std::optional<NodeIndex> TokenFlowGraph::find(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeIndex TokenFlowGraph::require(std::string_view name) const
{
    if (auto v = find(name)) return *v;
    throw Error(ErrorCode::UnknownNode, "unknown TFG node '" + std::string(name) + "'");
}

std::optional<std::size_t> TokenFlowGraph::removing_equation(NodeIndex v) const { return removed_by_.at(v); }

std::optional<std::size_t> TokenFlowGraph::agglomeration_of(NodeIndex v) const
{
    for (std::size_t e : head_of_.at(v))
        if (equations_[e].tag == EquationTag::Agglomeration) return e;
    return std::nullopt;
}

std::vector<NodeIndex> TokenFlowGraph::successors(NodeIndex v) const
{
    std::vector<NodeIndex> out;
    simd::for_each_bit(successor_bits(v), [&](std::size_t w) { out.push_back(w); });
    return out;
}

std::vector<NodeIndex> successors(const TokenFlowGraph& tfg, std::string_view node)
{
    return tfg.successors(tfg.require(node));
}

TokenFlowGraph build_tfg(const EquationSystem& equations, std::span<const std::string> initial_places,
                         std::span<const std::string> reduced_places)
{
    using WF = WellFormedCondition;
    TokenFlowGraph g;

    auto add_node = [&g](std::string name, std::optional<TokenCount> constant) {
        const NodeIndex v = g.nodes_.size();
        g.index_.emplace(name, v);
        g.nodes_.push_back({std::move(name), constant});
        g.in_reduced_.push_back(false);
        return v;
    };

    for (const std::string& p : initial_places) {
        if (g.index_.count(p)) throw WellFormednessError(WF::T1, {p}, "duplicate place name in the initial net");
        add_node(p, std::nullopt);
    }
    g.initial_places_ = g.nodes_.size();
    for (const std::string& p : reduced_places) {
        auto it = g.index_.find(p);
        const NodeIndex v = it == g.index_.end() ? add_node(p, std::nullopt) : it->second;
        g.in_reduced_[v] = true;
    }

    const auto& eqs = equations.equations();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        auto resolve = [&](const Term& t) -> NodeIndex {
            if (t.is_constant())
                return add_node(std::to_string(*t.constant) + "#e" + std::to_string(i), *t.constant);
            auto it = g.index_.find(t.name);
            return it == g.index_.end() ? add_node(t.name, std::nullopt) : it->second;
        };
        TfgEquation te;
        te.tag = eqs[i].tag;
        te.head = resolve(eqs[i].defined);
        for (const Term& t : eqs[i].parts)
            te.parts.push_back(resolve(t));
        g.equations_.push_back(std::move(te));
    }

    const std::size_t n = g.nodes_.size();
    g.a_children_.assign(n, {});
    g.r_children_.assign(n, {});
    g.parents_.assign(n, {});
    g.removed_by_.assign(n, std::nullopt);
    g.head_of_.assign(n, {});
    g.part_of_.assign(n, {});

    std::vector<bool> agglomeration_head(n, false);
    for (std::size_t i = 0; i < g.equations_.size(); ++i) {
        const TfgEquation& e = g.equations_[i];
        const std::string text = format_equation(eqs[i]);
        if (e.tag == EquationTag::Redundancy && g.is_constant(e.head))
            throw WellFormednessError(WF::T2, {g.name(e.head)}, "constant defined by a redundancy: " + text);
        if (e.tag == EquationTag::Agglomeration)
            for (NodeIndex w : e.parts)
                if (g.is_constant(w))
                    throw WellFormednessError(WF::T2, {g.name(w)}, "constant removed by an agglomeration: " + text);
        std::unordered_set<NodeIndex> seen;
        for (NodeIndex w : e.parts) {
            if (w == e.head) throw WellFormednessError(WF::Cycle, {g.name(w)}, "node on both sides: " + text);
            if (!seen.insert(w).second)
                throw WellFormednessError(WF::T4, {g.name(w)}, "repeated term: " + text);
        }
        if (e.tag == EquationTag::Agglomeration) {
            if (agglomeration_head[e.head])
                throw WellFormednessError(WF::T4, {g.name(e.head)}, "node agglomerated by two equations");
            agglomeration_head[e.head] = true;
        }

        auto remove = [&](NodeIndex v) {
            if (g.removed_by_[v])
                throw WellFormednessError(WF::T3, {g.name(v)}, "nodes can be removed only once");
            g.removed_by_[v] = i;
        };
        g.head_of_[e.head].push_back(i);
        for (NodeIndex w : e.parts)
            g.part_of_[w].push_back(i);
        if (e.tag == EquationTag::Redundancy) {
            remove(e.head);
            for (NodeIndex w : e.parts) {
                g.r_arcs_.emplace_back(w, e.head);
                g.r_children_[w].push_back(e.head);
                g.parents_[e.head].push_back(w);
            }
        } else {
            for (NodeIndex w : e.parts) {
                remove(w);
                g.a_arcs_.emplace_back(e.head, w);
                g.a_children_[e.head].push_back(w);
                g.parents_[w].push_back(e.head);
            }
        }
    }

    // Kahn's algorithm, smallest index first.
    std::vector<std::size_t> indegree(n, 0);
    for (NodeIndex v = 0; v < n; ++v)
        indegree[v] = g.parents_[v].size();
    std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
    for (NodeIndex v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);
    while (!ready.empty()) {
        const NodeIndex v = ready.top();
        ready.pop();
        g.topo_.push_back(v);
        for (const auto* children : {&g.a_children_[v], &g.r_children_[v]})
            for (NodeIndex w : *children)
                if (--indegree[w] == 0) ready.push(w);
    }
    if (g.topo_.size() != n) {
        std::vector<std::string> stuck;
        for (NodeIndex v = 0; v < n; ++v)
            if (indegree[v] != 0) stuck.push_back(g.name(v));
        throw WellFormednessError(WF::Cycle, stuck, "the graph has a cycle");
    }

    for (NodeIndex v = 0; v < n; ++v) {
        if (!g.parents_[v].empty()) {
            if (g.in_reduced_[v])
                throw WellFormednessError(WF::T1, {g.name(v)}, "a place of the reduced net is removed by an equation");
            continue;
        }
        g.roots_.push_back(v);
        if (!g.is_constant(v) && !g.in_reduced_[v])
            throw WellFormednessError(WF::T1, {g.name(v)},
                                      "root is neither a constant nor a place of the reduced net");
    }

    g.words_ = simd::words_for_bits(n);
    g.succ_.assign(n * g.words_, 0);
    for (auto it = g.topo_.rbegin(); it != g.topo_.rend(); ++it) {
        const NodeIndex v = *it;
        std::span<simd::Word> mine(g.succ_.data() + v * g.words_, g.words_);
        simd::set_bit(mine, v);
        for (const auto* children : {&g.a_children_[v], &g.r_children_[v]})
            for (NodeIndex w : *children)
                simd::or_into(mine, g.successor_bits(w));
    }

    for (NodeIndex v = 0; v < n; ++v) {
        const bool leaf = g.a_children_[v].empty() && g.r_children_[v].empty();
        if (leaf && v >= g.initial_places_)
            g.warnings_.push_back("W5: leaf '" + g.name(v) + "' is not a place of the initial net");
    }
    return g;
}

// ---------------------------------------------------------------------------

Configuration::Configuration(const TokenFlowGraph& tfg)
    : values_(tfg.node_count()), fixed_(tfg.node_count(), false)
{
    for (NodeIndex v = 0; v < tfg.node_count(); ++v) {
        if (auto k = tfg.node(v).constant) {
            values_[v] = *k;
            fixed_[v] = true;
        }
    }
}

void Configuration::set(NodeIndex v, std::optional<Count> value)
{
    if (fixed_.at(v)) {
        if (value != values_[v])
            throw Error(ErrorCode::IllDefinedInput, "constant nodes keep their value");
        return;
    }
    values_[v] = value;
}

bool Configuration::total() const
{
    return std::all_of(values_.begin(), values_.end(), [](const auto& v) { return v.has_value(); });
}

ConfigurationVerdict check_configuration(const TokenFlowGraph& tfg, const Configuration& c)
{
    using Kind = ConfigurationVerdict::Kind;
    for (const TfgEquation& e : tfg.equations()) {
        for (NodeIndex w : e.parts) {
            if (c[e.head].has_value() != c[w].has_value())
                return {Kind::CBot, c[e.head] ? w : e.head};
        }
    }
    for (const TfgEquation& e : tfg.equations()) {
        if (!c[e.head]) continue;
        Count sum = 0;
        for (NodeIndex w : e.parts)
            sum += *c[w];
        if (sum != *c[e.head]) return {Kind::CEq, e.head};
    }
    return {};
}

namespace {

void require_node(const TokenFlowGraph& tfg, NodeIndex v)
{
    if (v >= tfg.node_count())
        throw Error(ErrorCode::UnknownNode, "unknown TFG node index " + std::to_string(v));
}

void require_well_defined(const TokenFlowGraph& tfg, const Configuration& c)
{
    if (c.size() != tfg.node_count())
        throw Error(ErrorCode::IllDefinedInput, "configuration does not match the graph");
    const auto verdict = check_configuration(tfg, c);
    if (!verdict.well_defined())
        throw Error(ErrorCode::IllDefinedInput,
                    std::string("input configuration violates ") +
                        (verdict.kind == ConfigurationVerdict::Kind::CBot ? "CBot" : "CEq") + " at '" +
                        tfg.name(*verdict.node) + "'");
}

// How an agglomeration below the origin gets re-split.
struct SplitOverride {
    std::optional<NodeIndex> routed_part;   // whole head value to this part
    std::vector<Count> shares;              // explicit shares (equation order)
};

// Recomputes every strict successor of origin in topological order.
// Redundancy heads become the sum of their parts; agglomerations are split
// per override, kept as in `before` when the head kept its value, or
// adjusted greedily otherwise.
Configuration rebalance(const TokenFlowGraph& tfg, const Configuration& before, NodeIndex origin,
                        const std::unordered_map<std::size_t, SplitOverride>& overrides)
{
    Configuration after = before;
    std::vector<bool> split_done(tfg.equations().size(), false);
    for (NodeIndex v : tfg.topological_order()) {
        if (v == origin || !tfg.reaches(origin, v)) continue;
        const std::size_t ei = *tfg.removing_equation(v);
        const TfgEquation& e = tfg.equations()[ei];
        if (e.tag == EquationTag::Redundancy) {
            Count sum = 0;
            for (NodeIndex w : e.parts)
                sum += after[w].value_or(0);
            after.set(v, sum);
            continue;
        }
        if (split_done[ei]) continue;
        split_done[ei] = true;

        const Count total = after[e.head].value_or(0);
        std::vector<Count> values(e.parts.size(), 0);
        auto ov = overrides.find(ei);
        if (ov != overrides.end() && !ov->second.shares.empty()) {
            values = ov->second.shares;
        } else if (ov != overrides.end() && ov->second.routed_part) {
            for (std::size_t k = 0; k < e.parts.size(); ++k)
                if (e.parts[k] == *ov->second.routed_part) values[k] = total;
        } else {
            Count sum = 0;
            for (std::size_t k = 0; k < e.parts.size(); ++k) {
                values[k] = before[e.parts[k]].value_or(0);
                sum += values[k];
            }
            if (sum < total) {
                values[0] += total - sum;
            } else {
                Count excess = sum - total;
                for (std::size_t k = 0; k < values.size() && excess > 0; ++k) {
                    const Count take = std::min(values[k], excess);
                    values[k] -= take;
                    excess -= take;
                }
            }
        }
        for (std::size_t k = 0; k < e.parts.size(); ++k)
            after.set(e.parts[k], values[k]);
    }
    return after;
}

} // namespace

Configuration propagate_token(const TokenFlowGraph& tfg, const Configuration& c, NodeIndex p, NodeIndex q)
{
    require_node(tfg, p);
    require_node(tfg, q);
    require_well_defined(tfg, c);
    if (!c[p]) throw Error(ErrorCode::UndefinedAt, "configuration undefined at '" + tfg.name(p) + "'");
    if (!tfg.reaches(p, q))
        throw Error(ErrorCode::NotAncestor, "'" + tfg.name(p) + "' does not reach '" + tfg.name(q) + "'");
    if (p == q) return c;

    // Shortest path p ->* q, children visited in canonical order.
    std::vector<std::optional<NodeIndex>> via(tfg.node_count());
    std::deque<NodeIndex> queue{p};
    via[p] = p;
    while (!queue.empty() && !via[q]) {
        const NodeIndex v = queue.front();
        queue.pop_front();
        for (auto children : {tfg.agglomeration_children(v), tfg.redundancy_children(v)})
            for (NodeIndex w : children)
                if (!via[w]) {
                    via[w] = v;
                    queue.push_back(w);
                }
    }

    std::unordered_map<std::size_t, SplitOverride> overrides;
    for (NodeIndex w = q; w != p; w = *via[w]) {
        const NodeIndex parent = *via[w];
        const std::size_t ei = *tfg.removing_equation(w);
        if (tfg.equations()[ei].tag == EquationTag::Agglomeration) overrides[ei].routed_part = w;
        (void)parent;
    }
    return rebalance(tfg, c, p, overrides);
}

Configuration split_token(const TokenFlowGraph& tfg, const Configuration& c, NodeIndex p,
                          std::span<const Count> shares)
{
    require_node(tfg, p);
    require_well_defined(tfg, c);
    const auto ei = tfg.agglomeration_of(p);
    if (!ei) throw Error(ErrorCode::NotAgglomeration, "'" + tfg.name(p) + "' heads no agglomeration");
    if (!c[p]) throw Error(ErrorCode::UndefinedAt, "configuration undefined at '" + tfg.name(p) + "'");
    const TfgEquation& e = tfg.equations()[*ei];
    Count sum = 0;
    for (Count s : shares)
        sum += s;
    if (shares.size() != e.parts.size() || sum != *c[p])
        throw Error(ErrorCode::BadShareSum, "shares for '" + tfg.name(p) + "' must be " +
                                                std::to_string(e.parts.size()) + " counts summing to " +
                                                std::to_string(*c[p]));
    std::unordered_map<std::size_t, SplitOverride> overrides;
    overrides[*ei].shares.assign(shares.begin(), shares.end());
    return rebalance(tfg, c, p, overrides);
}

NodeIndex find_marked_root(const TokenFlowGraph& tfg, const Configuration& c, NodeIndex p)
{
    require_node(tfg, p);
    if (!c[p] || *c[p] == 0) throw Error(ErrorCode::NoTokenAt, "no token at '" + tfg.name(p) + "'");
    require_well_defined(tfg, c);
    for (NodeIndex root : tfg.roots())
        if (tfg.reaches(root, p) && c[root].value_or(0) > 0) return root;
    throw Error(ErrorCode::IllDefinedInput, "no marked root above '" + tfg.name(p) + "'");
}

} // namespace kong
