#pragma once

#include "kong/concurrency_matrix.hpp"
#include "kong/error.hpp"
#include "kong/simd/bit_kernels.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kong {

using PlaceIndex = std::size_t;
using TransitionIndex = std::size_t;
using TokenCount = std::uint32_t;

struct Arc {
    PlaceIndex place;
    TokenCount weight;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Place/transition net. Places and transitions keep insertion order; that
/// order is the canonical row order of every matrix computed downstream.
/// Identifiers are unique across places and transitions.
class PetriNet {
public:
    PlaceIndex add_place(std::string id);
    TransitionIndex add_transition(std::string id);

    /// Adds weight to pre(t, p); repeated arcs accumulate.
    void add_input(TransitionIndex t, PlaceIndex p, TokenCount weight = 1);
    /// Adds weight to post(t, p).
    void add_output(TransitionIndex t, PlaceIndex p, TokenCount weight = 1);

    std::size_t place_count() const noexcept { return places_.size(); }
    std::size_t transition_count() const noexcept { return transitions_.size(); }

    const std::string& place_name(PlaceIndex p) const { return places_.at(p); }
    const std::string& transition_name(TransitionIndex t) const { return transitions_.at(t); }
    const std::vector<std::string>& place_names() const noexcept { return places_; }
    const std::vector<std::string>& transition_names() const noexcept { return transitions_; }

    std::optional<PlaceIndex> find_place(std::string_view id) const;
    std::optional<TransitionIndex> find_transition(std::string_view id) const;

    /// Arcs sorted by place index, zero weights omitted.
    std::span<const Arc> pre(TransitionIndex t) const { return pre_.at(t); }
    std::span<const Arc> post(TransitionIndex t) const { return post_.at(t); }

    TokenCount pre_weight(TransitionIndex t, PlaceIndex p) const;
    TokenCount post_weight(TransitionIndex t, PlaceIndex p) const;

    friend bool operator==(const PetriNet& a, const PetriNet& b)
    {
        return a.places_ == b.places_ && a.transitions_ == b.transitions_ && a.pre_ == b.pre_ &&
               a.post_ == b.post_;
    }

private:
    std::vector<std::string> places_;
    std::vector<std::string> transitions_;
    std::unordered_map<std::string, PlaceIndex> place_index_;
    std::unordered_map<std::string, TransitionIndex> transition_index_;
    std::vector<std::vector<Arc>> pre_;
    std::vector<std::vector<Arc>> post_;
};

struct Marking {
    std::vector<TokenCount> tokens;

    TokenCount operator[](PlaceIndex p) const { return tokens[p]; }
    std::size_t size() const noexcept { return tokens.size(); }

    friend bool operator==(const Marking&, const Marking&) = default;
    friend auto operator<=>(const Marking&, const Marking&) = default;
};

/// Throws Malformed unless m ranges over exactly the places of net.
void require_marking_of(const PetriNet& net, const Marking& m);

bool is_enabled(const PetriNet& net, const Marking& m, TransitionIndex t);

/// m - pre(t) + post(t). Throws NotEnabled or UnknownTransition.
Marking fire_transition(const PetriNet& net, const Marking& m, TransitionIndex t);
Marking fire_transition(const PetriNet& net, const Marking& m, std::string_view t);

class NotSafeError : public Error {
public:
    NotSafeError(Marking witness, const std::string& message)
        : Error(ErrorCode::NotSafe, message), witness_(std::move(witness)) {}

    const Marking& witness() const noexcept { return witness_; }

private:
    Marking witness_;
};

struct ExploreLimits {
    std::size_t max_states = 1'000'000;
    std::chrono::milliseconds budget{60'000};
};

/// Reachable markings of a safe net, each stored as a place bitset in
/// discovery (BFS) order; index 0 is the initial marking.
class ReachabilitySet {
public:
    using Word = simd::Word;

    std::size_t size() const noexcept { return count_; }
    std::size_t place_count() const noexcept { return places_; }
    std::size_t words_per_marking() const noexcept { return words_; }

    std::span<const Word> bits(std::size_t i) const { return {store_.data() + i * words_, words_}; }
    Marking marking(std::size_t i) const;
    bool contains(const Marking& m) const;

    bool safe() const noexcept { return safe_; }
    bool truncated() const noexcept { return truncated_; }

private:
    friend ReachabilitySet explore_reachable(const PetriNet&, const Marking&, const ExploreLimits&);

    std::size_t places_ = 0;
    std::size_t words_ = 0;
    std::size_t count_ = 0;
    std::vector<Word> store_;
    bool safe_ = true;
    bool truncated_ = false;
};

/// Breadth-first closure of m0 under firing. Stops with truncated() set when
/// the state cap or the wall-clock budget is hit. Throws NotSafeError as soon
/// as a marking with two tokens in some place shows up.
ReachabilitySet explore_reachable(const PetriNet& net, const Marking& m0,
                                  const ExploreLimits& limits = {});

/// Ground-truth concurrency relation over net places in net order. When the
/// exploration was truncated, witnessed pairs are 1 and everything else is
/// undecided.
ConcurrencyMatrix oracle_matrix(const ReachabilitySet& states);
ConcurrencyMatrix oracle_matrix(const PetriNet& net, const Marking& m0,
                                const ExploreLimits& limits = {});

} // namespace kong
