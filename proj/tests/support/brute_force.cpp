#include "brute_force.hpp"

namespace kong::testing {

BruteForceResult brute_force_states(const NetDocument& doc, std::size_t limit)
{
    const PetriNet& net = doc.net;
    BruteForceResult result;
    Tokens m0(doc.initial.tokens.begin(), doc.initial.tokens.end());
    std::vector<Tokens> stack{m0};
    result.markings.insert(m0);
    while (!stack.empty()) {
        const Tokens m = stack.back();
        stack.pop_back();
        for (TransitionIndex t = 0; t < net.transition_count(); ++t) {
            Tokens next = m;
            bool enabled = true;
            for (const Arc& a : net.pre(t)) {
                next[a.place] -= a.weight;
                if (next[a.place] < 0) enabled = false;
            }
            if (!enabled) continue;
            for (const Arc& a : net.post(t))
                next[a.place] += a.weight;
            for (long v : next)
                if (v > 1) result.safe = false;
            if (!result.safe) return result;
            if (result.markings.insert(next).second) {
                if (result.markings.size() > limit) {
                    result.complete = false;
                    return result;
                }
                stack.push_back(std::move(next));
            }
        }
    }
    return result;
}

std::optional<std::vector<std::vector<int>>> brute_force_concurrency(const NetDocument& doc, std::size_t limit)
{
    const BruteForceResult states = brute_force_states(doc, limit);
    if (!states.safe || !states.complete) return std::nullopt;
    const std::size_t n = doc.net.place_count();
    std::vector<std::vector<int>> c(n, std::vector<int>(n, 0));
    for (const Tokens& m : states.markings)
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (m[p] > 0 && m[q] > 0) c[p][q] = 1;
    return c;
}

} // namespace kong::testing
