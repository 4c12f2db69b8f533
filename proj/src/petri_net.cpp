#include "kong/petri_net.hpp"

#include "kong/parallel.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace kong {

namespace {

void accumulate(std::vector<Arc>& arcs, PlaceIndex p, TokenCount weight)
{
    if (weight == 0) return;
    auto it = std::lower_bound(arcs.begin(), arcs.end(), p,
                               [](const Arc& a, PlaceIndex place) { return a.place < place; });
    if (it != arcs.end() && it->place == p)
        it->weight += weight;
    else
        arcs.insert(it, Arc{p, weight});
}

TokenCount weight_of(std::span<const Arc> arcs, PlaceIndex p)
{
    auto it = std::lower_bound(arcs.begin(), arcs.end(), p,
                               [](const Arc& a, PlaceIndex place) { return a.place < place; });
    return (it != arcs.end() && it->place == p) ? it->weight : 0;
}

std::string describe(const PetriNet& net, const Marking& m)
{
    std::string out = "{";
    bool first = true;
    for (PlaceIndex p = 0; p < m.size(); ++p) {
        if (m[p] == 0) continue;
        if (!first) out += ", ";
        first = false;
        out += net.place_name(p) + ":" + std::to_string(m[p]);
    }
    return out + "}";
}

} // namespace

PlaceIndex PetriNet::add_place(std::string id)
{
    if (place_index_.count(id) || transition_index_.count(id))
        throw Error(ErrorCode::DuplicateId, "duplicate identifier '" + id + "'");
    const PlaceIndex p = places_.size();
    place_index_.emplace(id, p);
    places_.push_back(std::move(id));
    return p;
}

TransitionIndex PetriNet::add_transition(std::string id)
{
    if (place_index_.count(id) || transition_index_.count(id))
        throw Error(ErrorCode::DuplicateId, "duplicate identifier '" + id + "'");
    const TransitionIndex t = transitions_.size();
    transition_index_.emplace(id, t);
    transitions_.push_back(std::move(id));
    pre_.emplace_back();
    post_.emplace_back();
    return t;
}

void PetriNet::add_input(TransitionIndex t, PlaceIndex p, TokenCount weight)
{
    if (p >= places_.size()) throw Error(ErrorCode::UnknownPlace, "unknown place index");
    accumulate(pre_.at(t), p, weight);
}

void PetriNet::add_output(TransitionIndex t, PlaceIndex p, TokenCount weight)
{
    if (p >= places_.size()) throw Error(ErrorCode::UnknownPlace, "unknown place index");
    accumulate(post_.at(t), p, weight);
}

std::optional<PlaceIndex> PetriNet::find_place(std::string_view id) const
{
    auto it = place_index_.find(std::string(id));
    if (it == place_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<TransitionIndex> PetriNet::find_transition(std::string_view id) const
{
    auto it = transition_index_.find(std::string(id));
    if (it == transition_index_.end()) return std::nullopt;
    return it->second;
}

TokenCount PetriNet::pre_weight(TransitionIndex t, PlaceIndex p) const { return weight_of(pre(t), p); }

TokenCount PetriNet::post_weight(TransitionIndex t, PlaceIndex p) const { return weight_of(post(t), p); }

void require_marking_of(const PetriNet& net, const Marking& m)
{
    if (m.size() != net.place_count())
        throw Error(ErrorCode::Malformed, "marking has " + std::to_string(m.size()) +
                                              " entries but the net has " +
                                              std::to_string(net.place_count()) + " places");
}

bool is_enabled(const PetriNet& net, const Marking& m, TransitionIndex t)
{
    for (const Arc& a : net.pre(t))
        if (m[a.place] < a.weight) return false;
    return true;
}

Marking fire_transition(const PetriNet& net, const Marking& m, TransitionIndex t)
{
    if (t >= net.transition_count())
        throw Error(ErrorCode::UnknownTransition, "unknown transition index " + std::to_string(t));
    require_marking_of(net, m);
    if (!is_enabled(net, m, t))
        throw Error(ErrorCode::NotEnabled,
                    "transition '" + net.transition_name(t) + "' is not enabled at " + describe(net, m));
    Marking next = m;
    for (const Arc& a : net.pre(t))
        next.tokens[a.place] -= a.weight;
    for (const Arc& a : net.post(t))
        next.tokens[a.place] += a.weight;
    return next;
}

Marking fire_transition(const PetriNet& net, const Marking& m, std::string_view t)
{
    auto index = net.find_transition(t);
    if (!index) throw Error(ErrorCode::UnknownTransition, "unknown transition '" + std::string(t) + "'");
    return fire_transition(net, m, *index);
}

Marking ReachabilitySet::marking(std::size_t i) const
{
    Marking m{std::vector<TokenCount>(places_, 0)};
    simd::for_each_bit(bits(i), [&](std::size_t p) { m.tokens[p] = 1; });
    return m;
}

bool ReachabilitySet::contains(const Marking& m) const
{
    if (m.size() != places_) return false;
    for (TokenCount k : m.tokens)
        if (k > 1) return false;
    std::vector<Word> probe(words_, 0);
    for (PlaceIndex p = 0; p < places_; ++p)
        if (m[p]) simd::set_bit(probe, p);
    for (std::size_t i = 0; i < count_; ++i)
        if (std::equal(probe.begin(), probe.end(), bits(i).begin())) return true;
    return false;
}

namespace {

// Per-transition firing data for 1-bounded markings.
struct CompiledTransition {
    std::vector<simd::Word> pre;
    std::vector<simd::Word> post;
    bool never_enabled = false; // some pre weight >= 2
    bool overflows = false;     // some post weight >= 2
};

struct StoreHash {
    const std::vector<simd::Word>* store;
    std::size_t words;
    std::size_t operator()(std::size_t i) const
    {
        std::size_t h = 0xcbf29ce484222325ull;
        for (std::size_t w = 0; w < words; ++w) {
            h ^= (*store)[i * words + w] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

struct StoreEq {
    const std::vector<simd::Word>* store;
    std::size_t words;
    bool operator()(std::size_t a, std::size_t b) const
    {
        return std::equal(store->begin() + static_cast<std::ptrdiff_t>(a * words),
                          store->begin() + static_cast<std::ptrdiff_t>((a + 1) * words),
                          store->begin() + static_cast<std::ptrdiff_t>(b * words));
    }
};

} // namespace

ReachabilitySet explore_reachable(const PetriNet& net, const Marking& m0, const ExploreLimits& limits)
{
    require_marking_of(net, m0);
    if (limits.max_states < 1) throw Error(ErrorCode::Malformed, "state cap must be at least 1");

    for (TokenCount k : m0.tokens)
        if (k > 1) throw NotSafeError(m0, "initial marking is not 1-bounded: " + describe(net, m0));

    const std::size_t places = net.place_count();
    const std::size_t words = simd::words_for_bits(places);
    const auto& kernels = simd::active_kernels();

    std::vector<CompiledTransition> compiled(net.transition_count());
    for (TransitionIndex t = 0; t < net.transition_count(); ++t) {
        auto& ct = compiled[t];
        ct.pre.assign(words, 0);
        ct.post.assign(words, 0);
        for (const Arc& a : net.pre(t)) {
            simd::set_bit(ct.pre, a.place);
            if (a.weight > 1) ct.never_enabled = true;
        }
        for (const Arc& a : net.post(t)) {
            simd::set_bit(ct.post, a.place);
            if (a.weight > 1) ct.overflows = true;
        }
    }

    ReachabilitySet result;
    result.places_ = places;
    result.words_ = words;
    auto& store = result.store_;

    // Slot count is the scratch slot for the candidate successor; it is
    // committed by bumping count.
    std::unordered_set<std::size_t, StoreHash, StoreEq> seen(
        1024, StoreHash{&store, words}, StoreEq{&store, words});

    store.assign(words, 0);
    for (PlaceIndex p = 0; p < places; ++p)
        if (m0[p]) simd::set_bit(std::span(store).subspan(0, words), p);
    result.count_ = 1;
    seen.insert(0);

    const auto deadline = std::chrono::steady_clock::now() + limits.budget;
    std::vector<simd::Word> next(words);

    for (std::size_t current = 0; current < result.count_; ++current) {
        if ((current & 0xff) == 0 && std::chrono::steady_clock::now() >= deadline) {
            result.truncated_ = true;
            break;
        }
        for (TransitionIndex t = 0; t < net.transition_count(); ++t) {
            const auto& ct = compiled[t];
            if (ct.never_enabled) continue;
            const simd::Word* m = store.data() + current * words;
            bool enabled = true;
            for (std::size_t w = 0; w < words; ++w) {
                if ((m[w] & ct.pre[w]) != ct.pre[w]) {
                    enabled = false;
                    break;
                }
            }
            if (!enabled) continue;
            for (std::size_t w = 0; w < words; ++w)
                next[w] = m[w] & ~ct.pre[w];
            if (ct.overflows || kernels.intersects(next.data(), ct.post.data(), words)) {
                Marking witness = fire_transition(net, result.marking(current), t);
                throw NotSafeError(witness, "net is not safe: firing '" + net.transition_name(t) +
                                                "' reaches " + describe(net, witness));
            }
            kernels.or_into(next.data(), ct.post.data(), words);

            store.insert(store.end(), next.begin(), next.end());
            const std::size_t slot = result.count_;
            if (seen.count(slot)) {
                store.resize(slot * words);
                continue;
            }
            if (result.count_ >= limits.max_states) {
                store.resize(slot * words);
                result.truncated_ = true;
                break;
            }
            seen.insert(slot);
            ++result.count_;
        }
        if (result.truncated_) break;
    }
    return result;
}

ConcurrencyMatrix oracle_matrix(const ReachabilitySet& states)
{
    const std::size_t n = states.place_count();
    ConcurrencyMatrix matrix =
        states.truncated() ? ConcurrencyMatrix::undecided(n) : ConcurrencyMatrix::zeros(n);
    // Writes are monotone (-> 1) and confined to each worker's rows.
    parallel_rows(n, 256, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = 0; i < states.size(); ++i)
            matrix.mark_clique_rows(states.bits(i), begin, end);
    });
    return matrix;
}

ConcurrencyMatrix oracle_matrix(const PetriNet& net, const Marking& m0, const ExploreLimits& limits)
{
    return oracle_matrix(explore_reachable(net, m0, limits));
}

} // namespace kong
