#pragma once

#include "kong/concurrency.hpp"
#include "kong/petri_net.hpp"
#include "kong/reduction.hpp"
#include "kong/tfg.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace kong::testing {

// Reduce, build the graph, and fetch the reduced-net relation by exploration.
struct Pipeline {
    NetDocument initial;
    ReductionResult reduction;
    std::vector<std::string> p1;
    std::vector<std::string> p2;
    std::optional<TokenFlowGraph> tfg;
    ConcurrencyMatrix m2;
    ConcurrencyMatrix oracle;

    explicit Pipeline(NetDocument doc)
        : initial(std::move(doc)), reduction(reduce_net(initial)), p1(initial.net.place_names()),
          p2(reduction.residual.net.place_names())
    {
        tfg.emplace(build_tfg(reduction.equations, p1, p2));
        m2 = oracle_matrix(reduction.residual.net, reduction.residual.initial);
        oracle = oracle_matrix(initial.net, initial.initial);
    }

    RootRelation relation() const { return RootRelation::from_reduced(*tfg, m2, p2); }

    // Each reduced-net cell hidden with probability `mask`.
    RootRelation masked_relation(std::mt19937_64& rng, double mask) const
    {
        return RootRelation::from_reduced(*tfg, masked(m2, rng, mask), p2);
    }

    static ConcurrencyMatrix masked(const ConcurrencyMatrix& m, std::mt19937_64& rng, double mask)
    {
        ConcurrencyMatrix out = m;
        std::bernoulli_distribution hide(mask);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if (hide(rng)) out.set(i, j, Cell::Unknown);
        return out;
    }
};

} // namespace kong::testing
