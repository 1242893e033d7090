#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "dpres/exact.hpp"
#include "dpres/io.hpp"
#include "dpres/random.hpp"
#include "dpres/reductions.hpp"
#include "support.hpp"

using namespace dpres;
using namespace dpres::testing;

TEST_SUITE("exact") {

TEST_CASE("brute force examples") {
    Instance star = make_instance(4, star_graph(3).edges(), TerminalSet{{1, 2, 3}});
    CHECK(brute_force_min(star).size == 3);
    Instance c6 = make_instance(6, cycle_graph(6).edges(), TerminalSet{{0, 3}});
    auto r = brute_force_min(c6);
    CHECK(r.size == 3);
    // smallest canonical edge set among the two optimal paths
    CHECK(r.witness.edges == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    Instance empty = make_instance(3, path_graph(3).edges(), PairList{});
    CHECK(brute_force_min(empty).size == 0);
    CHECK(brute_force_min(empty).witness.edges.empty());
}

TEST_CASE("brute force on the reduced 3-colored triangle") {
    MccInstance src;
    src.graph = complete_graph(3);
    src.classes = {{0}, {1}, {2}};
    Reduction red = mcc_to_sdp(src);
    CHECK(brute_force_min(red.instance).size == 6);
}

TEST_CASE("brute force refuses above the cap") {
    Instance k8 = make_instance(8, complete_graph(8).edges(), TerminalSet{{0, 1, 2, 3, 4, 5, 6, 7}});
    BruteOptions small;
    small.candidate_cap = 10;
    CHECK_THROWS_AS(brute_force_min(k8, small), SizeCapError);
}

TEST_CASE("bb examples") {
    Instance c4 = make_instance(4, cycle_graph(4).edges(), TerminalSet{{0, 2}});
    auto r = bb_min(c4);
    CHECK(r.size == 2);
    CHECK(verify_preserver(c4, r.witness));
    Instance empty = make_instance(4, cycle_graph(4).edges(), PairList{});
    CHECK(bb_min(empty).size == 0);
    CHECK(bb_min(empty).witness.edges.empty());
    Instance p5 = make_instance(5, path_graph(5).edges(), TerminalSet{{0, 4}});
    CHECK(bb_min(p5).size == 4);
}

TEST_CASE("bb agrees with brute force on random instances") {
    auto corpus = sweep_corpus(120, 4242);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Instance& inst = corpus[i];
        INFO("instance " << i << "\n" << instance_text(inst));
        auto b = brute_force_min(inst);
        auto bb = bb_min(inst);
        CHECK(bb.size == b.size);
        CHECK(bb.witness.size() == bb.size);
        CHECK(verify_preserver(inst, bb.witness));
        CHECK(verify_preserver(inst, b.witness));
    }
}

TEST_CASE("restriction to the shortest-path union is sound") {
    std::mt19937_64 rng(77);
    BruteOptions all_edges;
    all_edges.restrict_to_union = false;
    for (int it = 0; it < 40; ++it) {
        RandomSpec spec;
        spec.n = 5 + it % 4; // n <= 8
        spec.m = std::min<std::size_t>(spec.n + 3 + it % 5, 14);
        if (it % 2) spec.terminals = 3;
        else spec.pairs = 2;
        Instance inst = random_instance(spec, rng);
        CHECK(brute_force_min(inst).size == brute_force_min(inst, all_edges).size);
    }
}

TEST_CASE("adding a pair never decreases the optimum") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 40; ++it) {
        RandomSpec spec;
        spec.n = 8;
        spec.m = 12;
        spec.pairs = 3;
        Instance inst = random_instance(spec, rng);
        auto before = bb_min(inst).size;
        auto pairs = pairs_of(inst.terminals);
        std::uniform_int_distribution<Vertex> pick(0, 7);
        Vertex u = pick(rng), v = pick(rng);
        if (u == v) continue;
        pairs.push_back(VertexPair::of(u, v));
        inst.terminals = PairList{pairs};
        CHECK(bb_min(inst).size >= before);
    }
}

TEST_CASE("greedy preserver is a minimal upper bound") {
    for (const Instance& inst : sweep_corpus(60, 8)) {
        Preserver g = greedy_preserver(inst);
        CHECK(verify_preserver(inst, g));
        CHECK(g.size() >= bb_min(inst).size);
        CHECK(prune_minimal(inst, g) == g);
    }
}

TEST_CASE("bb honours the time limit and reports progress") {
    std::mt19937_64 rng(5);
    RandomSpec spec;
    spec.grid = GridSpec{9, 9};
    spec.pairs = 14;
    Instance inst = random_instance(spec, rng);
    SearchLimits limits;
    limits.time_limit = std::chrono::milliseconds(1);
    std::uint64_t calls = 0;
    limits.progress = [&](const SolveStats&) { ++calls; };
    limits.progress_every = 1;
    try {
        bb_min(inst, limits);
    } catch (const TimeoutError&) {
    }
    CHECK(calls > 0);
}

} // TEST_SUITE
