// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "brute_force.hpp"
#include "pipeline.hpp"
#include "random_nets.hpp"

#include "cli.hpp"
#include "kong/concurrency.hpp"
#include "kong/matrix_io.hpp"
#include "kong/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace kong;
using namespace kong::testing;

namespace {

std::string data_path(const std::string& name) { return std::string(KONG_TEST_DATA) + "/" + name; }

// Collects failures; a criterion passes when none was recorded.
struct Verdict {
    std::size_t violations = 0;
    std::string first;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (ok) return;
        if (violations++ == 0) first = what;
    }
};

bool criterion(int id, const std::string& title, double limit_seconds, const std::function<void(Verdict&)>& body)
{
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0) v.require(seconds < limit_seconds, "took longer than " + std::to_string(limit_seconds) + " s");
    const bool pass = v.violations == 0;
    std::printf("[%s] %d. %s (%.3f s)%s%s\n", pass ? "PASS" : "FAIL", id, title.c_str(), seconds,
                v.detail.empty() ? "" : " ", v.detail.c_str());
    if (!pass) std::printf("       %zu violation(s), first: %s\n", v.violations, v.first.c_str());
    std::fflush(stdout);
    return pass;
}

std::vector<NetDocument> fuzz_corpus(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<NetDocument> nets;
    nets.reserve(count);
    NetShape shape;
    shape.max_places = 10;
    shape.max_transitions = 10;
    while (nets.size() < count)
        nets.push_back(random_safe_net(rng, shape));
    return nets;
}

std::size_t mismatches(const ConcurrencyMatrix& a, const ConcurrencyMatrix& b)
{
    if (a.size() != b.size()) return a.size() + b.size();
    std::size_t bad = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            bad += a.at(i, j) != b.at(i, j) ? 1 : 0;
    return bad;
}

// Decided cells of `partial` that disagree with `truth`.
std::size_t unsound_cells(const ConcurrencyMatrix& partial, const ConcurrencyMatrix& truth)
{
    std::size_t bad = 0;
    for (std::size_t i = 0; i < partial.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            bad += !partial.is_unknown(i, j) && partial.at(i, j) != truth.at(i, j) ? 1 : 0;
    return bad;
}

// Cells between initial places left undecided although both roots and their
// pair are known. A node and its own descendant are skipped: the kernel never
// relates a head to the nodes below it.
std::size_t accuracy_gaps(const TokenFlowGraph& g, const RootRelation& rel, const ConcurrencyMatrix& partial)
{
    const std::size_t places = g.initial_place_count();
    std::size_t gaps = 0;
    const auto& roots = rel.roots();
    for (NodeIndex v1 : roots)
        for (NodeIndex v2 : roots) {
            if (rel.at(v1, v1) == Cell::Unknown || rel.at(v2, v2) == Cell::Unknown) continue;
            if (rel.at(v1, v2) == Cell::Unknown) continue;
            for (NodeIndex p : g.successors(v1))
                for (NodeIndex q : g.successors(v2))
                    if (p < places && q < places && (p == q || !(g.reaches(p, q) || g.reaches(q, p))))
                        gaps += partial.is_unknown(p, q) ? 1 : 0;
        }
    return gaps;
}

std::string write_plain(const std::vector<std::string>& order, const ConcurrencyMatrix& m)
{
    return write_matrix(MatrixDocument{order, m, MatrixEncoding::Plain});
}

} // namespace

int main()
{
    bool all = true;
    const std::vector<NetDocument> corpus = fuzz_corpus(500, 20240601);
    std::size_t gap_instances = 0;

    all &= criterion(1, "reference net: matrix through the reduction equals the oracle", 1.0, [](Verdict& v) {
        const NetDocument m1 = load_net_file(data_path("m1.net"));
        const NetDocument m2 = load_net_file(data_path("m2.net"));
        const auto p1 = m1.net.place_names();
        const auto p2 = m2.net.place_names();
        const TokenFlowGraph g = build_tfg(parse_equation_system(read_text_file(data_path("m1.eq"))), p1, p2);
        const RootRelation rel = RootRelation::from_reduced(g, oracle_matrix(m2.net, m2.initial), p2);
        const ConcurrencyMatrix view = initial_places_view(g, matrix_complete(g, rel));
        const ConcurrencyMatrix oracle = oracle_matrix(m1.net, m1.initial);
        v.require(write_plain(p1, view) == write_plain(p1, oracle), "library output differs from the oracle");

        std::ostringstream a, b, err;
        v.require(cli::run({"matrix", data_path("m1.net"), "--equations", data_path("m1.eq"), "--reduced",
                            data_path("m2.net")},
                           a, err) == cli::kOk,
                  "matrix command failed: " + err.str());
        v.require(cli::run({"oracle", data_path("m1.net")}, b, err) == cli::kOk, "oracle command failed");
        v.require(!a.str().empty() && a.str() == b.str(), "command outputs differ");

        auto at = [&](const char* x, const char* y) { return view.at(*m1.net.find_place(x), *m1.net.find_place(y)); };
        for (const char* x : {"p1", "p4", "p5", "p6"})
            for (const char* y : {"p1", "p4", "p5", "p6"})
                v.require(at(x, y) == Cell::One, std::string(x) + "," + y + " not concurrent");
        v.require(at("p1", "p2") == Cell::Zero, "p1,p2 concurrent");
        v.require(at("p3", "p4") == Cell::Zero, "p3,p4 concurrent");
    });

    all &= criterion(2, "reduce, graph and complete kernel match the oracle on 500 random safe nets", 60.0,
                     [&](Verdict& v) {
                         std::size_t cells = 0;
                         for (std::size_t i = 0; i < corpus.size(); ++i) {
                             const Pipeline p(corpus[i]);
                             const ConcurrencyMatrix view = initial_places_view(*p.tfg, matrix_complete(*p.tfg, p.relation()));
                             const std::size_t bad = mismatches(view, p.oracle);
                             v.require(bad == 0, "net " + std::to_string(i) + ": " + std::to_string(bad) + " cells");
                             cells += view.cell_count();
                         }
                         v.detail = "[" + std::to_string(corpus.size()) + " nets, " + std::to_string(cells) + " cells]";
                     });

    all &= criterion(3, "partial kernel is sound under random masks and fills monotonically", 0.0, [&](Verdict& v) {
        std::mt19937_64 rng(7);
        std::size_t runs = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const Pipeline p(corpus[i]);
            const TokenFlowGraph& g = *p.tfg;

            std::vector<std::pair<std::size_t, std::size_t>> cells;
            for (std::size_t r = 0; r < p.m2.size(); ++r)
                for (std::size_t c = 0; c <= r; ++c)
                    cells.emplace_back(r, c);
            std::shuffle(cells.begin(), cells.end(), rng);

            // Masks shrink from everything hidden to nothing hidden.
            double last = -1.0;
            bool gap = false;
            for (std::size_t hidden = cells.size() + 1; hidden-- > 0;) {
                ConcurrencyMatrix m2 = p.m2;
                for (std::size_t k = 0; k < hidden; ++k)
                    m2.set(cells[k].first, cells[k].second, Cell::Unknown);
                const RootRelation rel = RootRelation::from_reduced(g, m2, p.p2);
                const ConcurrencyMatrix partial = matrix_partial(g, rel);
                const ConcurrencyMatrix view = initial_places_view(g, partial);
                const std::size_t bad = unsound_cells(view, p.oracle);
                v.require(bad == 0, "net " + std::to_string(i) + ", " + std::to_string(hidden) + " hidden: " +
                                        std::to_string(bad) + " unsound cells");
                const double ratio = filling_ratio(view);
                v.require(ratio >= last, "net " + std::to_string(i) + ": filling ratio dropped");
                last = ratio;
                gap |= accuracy_gaps(g, rel, partial) > 0;
                ++runs;
            }
            v.require(last == 1.0, "net " + std::to_string(i) + ": unmasked run is not complete");
            gap_instances += gap ? 1 : 0;
        }
        v.detail = "[" + std::to_string(runs) + " masked runs]";
    });

    all &= criterion(4, "lemma operations on 1000 random configurations; safe configurations are 0/1", 0.0,
                     [](Verdict& v) {
                         std::mt19937_64 rng(11);
                         std::size_t configs = 0;
                         while (configs < 1000) {
                             const RandomSystem sys = random_equation_system(rng);
                             const TokenFlowGraph g = build_tfg(sys.equations, sys.initial, sys.reduced);
                             const Configuration c = random_configuration(g, rng);
                             ++configs;
                             const std::string tag = "configuration " + std::to_string(configs);
                             v.require(check_configuration(g, c).well_defined(), tag + ": generator output ill-defined");

                             const NodeIndex p = rng() % g.node_count();
                             const auto below = g.successors(p);
                             const NodeIndex q = below[rng() % below.size()];
                             const Configuration fwd = propagate_token(g, c, p, q);
                             v.require(check_configuration(g, fwd).well_defined(), tag + ": propagate ill-defined");
                             v.require(fwd[p] == c[p] && *fwd[q] >= *c[p], tag + ": propagate moved the token wrong");
                             for (NodeIndex w = 0; w < g.node_count(); ++w)
                                 if (!g.reaches(p, w)) v.require(fwd[w] == c[w], tag + ": propagate touched outside succs");

                             std::vector<NodeIndex> heads;
                             for (NodeIndex w = 0; w < g.node_count(); ++w)
                                 if (g.agglomeration_of(w)) heads.push_back(w);
                             if (!heads.empty()) {
                                 const NodeIndex h = heads[rng() % heads.size()];
                                 const auto& parts = g.equations()[*g.agglomeration_of(h)].parts;
                                 std::vector<Count> shares(parts.size(), 0);
                                 for (Count t = 0; t < *c[h]; ++t)
                                     ++shares[rng() % shares.size()];
                                 const Configuration split = split_token(g, c, h, shares);
                                 v.require(check_configuration(g, split).well_defined(), tag + ": split ill-defined");
                                 v.require(split[h] == c[h], tag + ": split changed the head");
                                 for (std::size_t k = 0; k < parts.size(); ++k)
                                     v.require(split[parts[k]] == shares[k], tag + ": split ignored a share");
                                 for (NodeIndex w = 0; w < g.node_count(); ++w)
                                     if (!g.reaches(h, w)) v.require(split[w] == c[w], tag + ": split touched outside succs");
                             }

                             std::vector<NodeIndex> marked;
                             for (NodeIndex w = 0; w < g.node_count(); ++w)
                                 if (*c[w] > 0) marked.push_back(w);
                             if (!marked.empty()) {
                                 const NodeIndex target = marked[rng() % marked.size()];
                                 const NodeIndex root = find_marked_root(g, c, target);
                                 v.require(g.is_root(root) && g.reaches(root, target) && *c[root] > 0,
                                           tag + ": marked root does not cover the node");
                                 for (NodeIndex r : g.roots())
                                     if (r < root && g.reaches(r, target))
                                         v.require(*c[r] == 0, tag + ": a smaller marked root exists");
                             }
                         }

                         std::size_t safe_configs = 0;
                         std::size_t nets = 0;
                         while (nets < 100) {
                             const NetDocument doc = random_safe_net(rng);
                             const ReductionResult red = reduce_net(doc);
                             const auto p1 = doc.net.place_names();
                             const auto p2 = red.residual.net.place_names();
                             const TokenFlowGraph g = build_tfg(red.equations, p1, p2);
                             const BruteForceResult s2 = brute_force_states(red.residual);
                             ++nets;
                             for (const Tokens& m2 : s2.markings) {
                                 std::vector<std::optional<Count>> roots;
                                 for (NodeIndex r : g.roots())
                                     roots.push_back(g.is_constant(r)
                                                         ? std::optional<Count>{}
                                                         : std::optional<Count>(
                                                               m2[*red.residual.net.find_place(g.name(r))]));
                                 for (int draw = 0; draw < 4; ++draw) {
                                     const Configuration c = extend_from_roots(g, roots, rng);
                                     ++safe_configs;
                                     v.require(c.total() && check_configuration(g, c).well_defined(),
                                               "safe configuration ill-defined");
                                     for (NodeIndex w = 0; w < g.node_count(); ++w)
                                         v.require(c[w] && *c[w] <= 1, "net " + std::to_string(nets) + ": node " +
                                                                           g.name(w) + " holds more than one token");
                                 }
                             }
                         }
                         v.detail = "[" + std::to_string(configs) + " configurations, " + std::to_string(safe_configs) +
                                    " safe configurations]";
                     });

    all &= criterion(5, "complete kernel stays within the body and write bounds", 0.0, [&](Verdict& v) {
        std::size_t worst_bodies = 0, worst_writes = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const Pipeline p(corpus[i]);
            KernelStats stats;
            const ConcurrencyMatrix full = matrix_complete(*p.tfg, p.relation(), &stats);
            std::size_t live = 0;
            for (std::size_t k = 0; k < full.size(); ++k)
                live += full.is_one(k, k) ? 1 : 0;
            const std::size_t n = full.size();
            v.require(stats.propagate_bodies <= live, "net " + std::to_string(i) + ": " +
                                                          std::to_string(stats.propagate_bodies) + " bodies for " +
                                                          std::to_string(live) + " live nodes");
            v.require(stats.write_attempts <= (n * n + n) / 2,
                      "net " + std::to_string(i) + ": " + std::to_string(stats.write_attempts) + " writes");
            worst_bodies = std::max(worst_bodies, stats.propagate_bodies);
            worst_writes = std::max(worst_writes, stats.write_attempts);
        }
        v.detail = "[max bodies " + std::to_string(worst_bodies) + ", max writes " + std::to_string(worst_writes) + "]";
    });

    all &= criterion(6, "10^4 random matrices round-trip in both encodings; filling ratio formula", 0.0,
                     [](Verdict& v) {
                         std::mt19937_64 rng(6);
                         const Cell symbols[] = {Cell::Zero, Cell::One, Cell::Unknown};
                         for (int trial = 0; trial < 10000; ++trial) {
                             const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
                             std::discrete_distribution<int> pick({double(rng() % 5 + 1), double(rng() % 5 + 1),
                                                                   double(rng() % 3)});
                             MatrixDocument doc;
                             for (std::size_t i = 0; i < n; ++i)
                                 doc.order.push_back("x" + std::to_string(i));
                             doc.matrix = ConcurrencyMatrix::undecided(n);
                             for (std::size_t i = 0; i < n; ++i)
                                 for (std::size_t j = 0; j <= i; ++j)
                                     doc.matrix.set(i, j, symbols[pick(rng)]);
                             for (MatrixEncoding enc : {MatrixEncoding::Plain, MatrixEncoding::Rle}) {
                                 doc.encoding = enc;
                                 const std::string text = write_matrix(doc);
                                 const MatrixDocument back = read_matrix(text);
                                 v.require(back == doc && write_matrix(back) == write_matrix(MatrixDocument{
                                                                                    back.order, back.matrix, back.encoding}),
                                           "trial " + std::to_string(trial) + " did not round-trip");
                                 v.require(write_matrix(MatrixDocument{back.order, back.matrix, enc}) == text,
                                           "trial " + std::to_string(trial) + ": rewrite differs");
                             }
                         }
                         ConcurrencyMatrix m = ConcurrencyMatrix::undecided(2);
                         v.require(filling_ratio(m) == 0.0, "all undecided is not 0");
                         m.set(0, 0, Cell::One);
                         m.set(1, 0, Cell::Zero);
                         v.require(filling_ratio(m) == 4.0 / 6.0, "n=2 with 2 cells is not 2/3");
                         m.set(1, 1, Cell::Zero);
                         v.require(filling_ratio(m) == 1.0, "n=2 with 3 cells is not 1");
                         ConcurrencyMatrix big = ConcurrencyMatrix::undecided(4);
                         big.set(0, 0, Cell::One);
                         big.set(2, 1, Cell::One);
                         big.set(3, 3, Cell::Zero);
                         v.require(filling_ratio(big) == 6.0 / 20.0, "n=4 with 3 cells is not 3/10");
                     });

    all &= criterion(7, "reduction ratios of the reference cases", 0.0, [](Verdict& v) {
        const Ratio seq = reduce_net(load_net_file(data_path("seq2.net"))).ratio;
        v.require(seq.value() == 1.0, "seq2 ratio " + std::to_string(seq.value()));

        const NetDocument choice =
            parse_net_text("pl a 1\npl b\npl c\ntr t1 : a -> b\ntr t2 : a -> c\ntr t3 : b -> a\ntr t4 : c -> a\n");
        const ReductionResult identity = reduce_net(choice);
        v.require(identity.equations.empty() && identity.ratio.value() == 0.0, "identity reduction removed places");
        const NetDocument fork = load_net_file(data_path("fork.net"));
        v.require(reduction_ratio(fork, fork).value() == 0.0, "a net against itself is not 0");

        const Ratio ref =
            reduction_ratio(load_net_file(data_path("m1.net")), load_net_file(data_path("m2.net")));
        v.require(ref == Ratio{5, 7}, "reference ratio " + std::to_string(ref.removed) + "/" + std::to_string(ref.total));
        v.detail = "[seq2 " + std::to_string(seq.value()) + ", identity 0, reference " + std::to_string(ref.removed) +
                   "/" + std::to_string(ref.total) + "]";
    });

    // Informational: undecided cells under both roots and their pair known.
    std::size_t graph_gaps = 0;
    std::size_t tree_gaps = 0;
    {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 500; ++trial) {
            const RandomSystem sys = random_equation_system(rng);
            const TokenFlowGraph g = build_tfg(sys.equations, sys.initial, sys.reduced);
            RootRelation rel(g);
            std::bernoulli_distribution coin(0.5);
            std::vector<NodeIndex> places;
            for (NodeIndex a : g.roots())
                if (!g.is_constant(a)) places.push_back(a);
            for (NodeIndex a : places)
                rel.set(a, a, coin(rng) ? Cell::One : Cell::Zero);
            for (NodeIndex a : places)
                for (NodeIndex b : places)
                    if (a < b)
                        rel.set(a, b, rel.at(a, a) == Cell::One && rel.at(b, b) == Cell::One && coin(rng) ? Cell::One
                                                                                                        : Cell::Zero);
            rel.apply_constants();
            for (NodeIndex a : places)
                for (NodeIndex b : places)
                    if (a <= b && coin(rng)) rel.set(a, b, Cell::Unknown);
            const bool gap = accuracy_gaps(g, rel, matrix_partial(g, rel)) > 0;
            graph_gaps += gap ? 1 : 0;
            bool tree = true;
            for (NodeIndex v = 0; v < g.node_count(); ++v)
                tree &= g.parents(v).size() <= 1;
            tree_gaps += gap && tree ? 1 : 0;
        }
    }
    std::printf("note: accuracy contract gaps: %zu of %zu reduced nets, %zu of 500 random graphs (%zu of them "
                "without multi-parent nodes)\n",
                gap_instances, corpus.size(), graph_gaps, tree_gaps);

    std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
    return all ? 0 : 1;
}
