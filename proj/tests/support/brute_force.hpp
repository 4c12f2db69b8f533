#pragma once

// Reference semantics kept deliberately naive and separate from the library:
// markings are plain integer vectors in a std::set, firing reads the arc
// lists directly.

#include "kong/net_formats.hpp"

#include <optional>
#include <set>
#include <vector>

namespace kong::testing {

using Tokens = std::vector<long>;

struct BruteForceResult {
    std::set<Tokens> markings;
    bool safe = true;
    bool complete = true;
};

/// Depth-first closure; stops early on a marking above 1 or past `limit`.
BruteForceResult brute_force_states(const NetDocument& doc, std::size_t limit = 20000);

/// concurrent[p][q] as 0/1, or nullopt when the net is unsafe or too large.
std::optional<std::vector<std::vector<int>>> brute_force_concurrency(const NetDocument& doc,
                                                                     std::size_t limit = 20000);

} // namespace kong::testing
