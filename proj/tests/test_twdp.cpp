#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dpres/exact.hpp"
#include "dpres/io.hpp"
#include "dpres/random.hpp"
#include "dpres/twdp.hpp"
#include "support.hpp"

using namespace dpres;
using namespace dpres::testing;

TEST_SUITE("twdp") {

TEST_CASE("dp examples") {
    Instance p5 = make_instance(5, path_graph(5).edges(), TerminalSet{{0, 4}});
    CHECK(dp_solve(p5).size == 4);
    Instance c4 = make_instance(4, cycle_graph(4).edges(), TerminalSet{{0, 2}});
    auto r = dp_solve(c4);
    CHECK(r.size == 2);
    CHECK(verify_preserver(c4, r.witness));
    Instance star = make_instance(4, star_graph(3).edges(), TerminalSet{{1, 2, 3}});
    CHECK(dp_solve(star).size == 3);
    Instance none = make_instance(4, cycle_graph(4).edges(), PairList{});
    CHECK(dp_solve(none).size == 0);
}

TEST_CASE("dp equals brute force on random instances") {
    auto corpus = sweep_corpus(150, 1717);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Instance& inst = corpus[i];
        INFO("instance " << i << "\n" << instance_text(inst));
        auto dp = dp_solve(inst);
        CHECK(dp.size == brute_force_min(inst).size);
        CHECK(dp.witness.size() == dp.size);
        CHECK(verify_preserver(inst, dp.witness));
    }
}

TEST_CASE("dp on denser graphs with wider decompositions") {
    std::mt19937_64 rng(18);
    for (int it = 0; it < 25; ++it) {
        RandomSpec spec;
        spec.n = 9;
        spec.m = 20;
        spec.connected = true;
        if (it % 2) spec.terminals = 4;
        else spec.pairs = 4;
        Instance inst = random_instance(spec, rng);
        CHECK(dp_solve(inst).size == bb_min(inst).size);
    }
}

TEST_CASE("stored tables are realized by their reconstructions") {
    std::mt19937_64 rng(19);
    for (int it = 0; it < 40; ++it) {
        RandomSpec spec;
        spec.n = 4 + it % 5; // n <= 8
        spec.m = spec.n + it % 6;
        if (it % 2) spec.terminals = 2 + it % 3;
        else spec.pairs = 1 + it % 3;
        Instance inst = random_instance(spec, rng);
        NiceTreeDecomposition ntd = make_nice(decompose(inst.graph), inst.graph);
        ConnectivityDp dp(inst, ntd);
        dp.run();
        std::string why;
        CHECK_MESSAGE(table_violations(dp, ntd, &why) == 0, why);
        CHECK(dp.max_join_overlap() == 0);
    }
}

TEST_CASE("at most one table per relation at each node") {
    for (const Instance& inst : sweep_corpus(40, 23)) {
        NiceTreeDecomposition ntd = make_nice(decompose(inst.graph), inst.graph);
        ConnectivityDp dp(inst, ntd);
        dp.run();
        for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
            std::set<Relation> seen;
            for (const auto& tab : dp.tables(t)) CHECK(seen.insert(tab.rows).second);
        }
    }
}

TEST_CASE("relations are symmetric with a full diagonal") {
    for (const Instance& inst : sweep_corpus(30, 29)) {
        NiceTreeDecomposition ntd = make_nice(decompose(inst.graph), inst.graph);
        ConnectivityDp dp(inst, ntd);
        dp.run();
        for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
            const std::size_t s = dp.scope(t).size();
            for (const auto& tab : dp.tables(t))
                for (std::size_t i = 0; i < s; ++i) {
                    CHECK((tab.rows[i] >> i & 1));
                    for (std::size_t j = 0; j < s; ++j) CHECK((tab.rows[i] >> j & 1) == (tab.rows[j] >> i & 1));
                }
        }
    }
}

TEST_CASE("edge closure is idempotent") {
    std::size_t checked = 0;
    for (const Instance& inst : sweep_corpus(40, 31)) {
        NiceTreeDecomposition ntd = make_nice(decompose(inst.graph), inst.graph);
        ConnectivityDp dp(inst, ntd);
        dp.run();
        for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
            const NiceNode& node = ntd.nodes[t];
            if (node.kind != NodeKind::introduce_edge) continue;
            const auto& scope = dp.scope(t);
            const std::size_t c = node.children[0];
            REQUIRE(dp.scope(c) == scope);
            auto iu = static_cast<std::size_t>(std::find(scope.begin(), scope.end(), node.edge.a) - scope.begin());
            auto iv = static_cast<std::size_t>(std::find(scope.begin(), scope.end(), node.edge.b) - scope.begin());
            for (const auto& tab : dp.tables(c)) {
                Relation once = edge_closure(tab.rows, scope, iu, iv, dp);
                CHECK(edge_closure(once, scope, iu, iv, dp) == once);
                ++checked;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("unreachable pairs") {
    Instance inst = make_instance(5, {{0, 1}, {1, 2}}, TerminalSet{{0, 2, 4}});
    CHECK(dp_solve(inst).size == 2);
    DpOptions strict;
    strict.unreachable_preserved = false;
    CHECK_THROWS_AS(dp_solve(inst, strict), PreconditionError);
}

TEST_CASE("dp accepts an external decomposition") {
    Instance c6 = make_instance(6, cycle_graph(6).edges(), TerminalSet{{0, 3}});
    TreeDecomposition td = from_elimination_order(c6.graph, {0, 1, 2, 3, 4, 5});
    auto ntd = make_nice(td, c6.graph);
    CHECK(dp_solve(c6, ntd).size == 3);
}

TEST_CASE("agreement-only joins never beat the exact optimum") {
    // the literal join rule may lose solutions but never produces an infeasible one
    DpOptions literal;
    literal.join_requires_agreement = true;
    for (const Instance& inst : sweep_corpus(60, 37)) {
        const std::size_t exact = bb_min(inst).size;
        try {
            auto r = dp_solve(inst, literal);
            CHECK(r.size >= exact);
            CHECK(verify_preserver(inst, r.witness));
        } catch (const std::logic_error&) {
            // no root table survived
        }
    }
}

} // TEST_SUITE
