#include <doctest.h>

#include <algorithm>
#include <random>

#include "dpres/exact.hpp"
#include "dpres/grid.hpp"
#include "dpres/io.hpp"
#include "support.hpp"

using namespace dpres;
using namespace dpres::testing;

namespace {

std::vector<VertexPair> random_pairs(const GridSpec& g, std::size_t count, std::mt19937_64& rng) {
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(g.size() - 1));
    std::vector<VertexPair> out;
    while (out.size() < count) {
        Vertex u = pick(rng), v = pick(rng);
        if (u != v) out.push_back(VertexPair::of(u, v));
    }
    return out;
}

// Applies one of the 8 square symmetries; odd codes transpose, so the spec changes shape.
Vertex transform(const GridSpec& g, Vertex v, int code, GridSpec& out) {
    std::size_t x = g.x_of(v), y = g.y_of(v);
    std::size_t w = g.width, h = g.height;
    if (code & 2) x = w - 1 - x;
    if (code & 4) y = h - 1 - y;
    if (code & 1) {
        std::swap(x, y);
        std::swap(w, h);
    }
    out = GridSpec{w, h};
    return out.id(x, y);
}

Instance grid_instance(const GridSpec& g, std::vector<VertexPair> pairs) {
    Instance inst;
    inst.grid = g;
    inst.graph = build_grid(g);
    inst.terminals = PairList{std::move(pairs)};
    return inst;
}

} // namespace

TEST_SUITE("grid") {

TEST_CASE("build_grid sizes") {
    CHECK(build_grid({2, 2}).n() == 4);
    CHECK(build_grid({2, 2}).m() == 4);
    CHECK(build_grid({1, 5}).m() == 4);
    CHECK(build_grid({3, 3}).m() == 12);
    CHECK(build_grid({7, 4}).m() == 4 * 6 + 7 * 3);
    CHECK_THROWS_AS(build_grid({0, 3}), PreconditionError);
}

TEST_CASE("hanan grid counts") {
    GridSpec g{5, 5};
    std::vector<Vertex> two{g.id(0, 0), g.id(4, 4)};
    auto h = hanan_grid(g, two);
    CHECK(h.intersections.size() == 4);
    CHECK(h.segments.size() == 4);
    std::vector<Vertex> three{g.id(0, 0), g.id(2, 4), g.id(4, 2)};
    h = hanan_grid(g, three);
    CHECK(h.intersections.size() == 9);
    CHECK(h.segments.size() == 12);
    std::size_t total = 0;
    for (const auto& s : h.segments) {
        CHECK(s.edges.size() == s.length);
        total += s.length;
    }
    CHECK(total == 3 * 4 + 3 * 4); // three full rows and three full columns of the trimmed box
    GridSpec wide{8, 3};
    std::vector<Vertex> row{wide.id(0, 1), wide.id(2, 1), wide.id(7, 1)};
    h = hanan_grid(wide, row);
    CHECK(h.segments.size() == 2);
    CHECK(h.segments[0].length + h.segments[1].length == 7);
    CHECK_THROWS_AS(hanan_grid(g, std::vector<Vertex>{}), PreconditionError);
}

TEST_CASE("hanan grid is trimmed to the terminal bounding box") {
    GridSpec g{6, 6};
    std::vector<Vertex> t{g.id(1, 2), g.id(4, 3)};
    auto h = hanan_grid(g, t);
    CHECK(h.xs == std::vector<std::size_t>{1, 4});
    CHECK(h.ys == std::vector<std::size_t>{2, 3});
    for (Vertex v : t) {
        Point p{g.x_of(v), g.y_of(v)};
        CHECK(std::find(h.intersections.begin(), h.intersections.end(), p) != h.intersections.end());
    }
    CHECK(h.segments.size() == 2 * 1 + 2 * 1);
}

TEST_CASE("grid solver examples") {
    GridSpec g{5, 5};
    std::vector<VertexPair> diag{VertexPair::of(g.id(0, 0), g.id(4, 4))};
    CHECK(solve_grid_pdp(g, diag).size == 8);
    std::vector<VertexPair> arms{VertexPair::of(g.id(0, 0), g.id(0, 4)), VertexPair::of(g.id(0, 0), g.id(4, 0))};
    auto r = solve_grid_pdp(g, arms);
    CHECK(r.size == 8);
    CHECK(verify_preserver(grid_instance(g, arms), r.witness));
}

TEST_CASE("grid solver equals branch and bound on small grids") {
    std::mt19937_64 rng(606);
    for (int it = 0; it < 40; ++it) {
        GridSpec g{2 + static_cast<std::size_t>(it % 5), 2 + static_cast<std::size_t>((it / 5) % 5)};
        auto pairs = random_pairs(g, 1 + it % 3, rng);
        Instance inst = grid_instance(g, pairs);
        auto grid = solve_grid_pdp(g, pairs);
        INFO(instance_text(inst));
        CHECK(grid.size == bb_min(inst).size);
        CHECK(grid.witness.size() == grid.size);
        CHECK(verify_preserver(inst, grid.witness));
    }
}

TEST_CASE("segment sweep agrees with the segment search") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 30; ++it) {
        GridSpec g{3 + static_cast<std::size_t>(it % 4), 3 + static_cast<std::size_t>(it % 3)};
        auto pairs = random_pairs(g, 1 + it % 3, rng);
        auto a = solve_grid_pdp(g, pairs);
        SolveResult b;
        try {
            b = solve_grid_pdp_sweep(g, pairs);
        } catch (const SizeCapError&) {
            continue;
        }
        CHECK(a.size == b.size);
        CHECK(verify_preserver(grid_instance(g, pairs), b.witness));
    }
}

TEST_CASE("witness takes Hanan segments whole") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 40; ++it) {
        GridSpec g{6, 6};
        auto pairs = random_pairs(g, 2 + it % 3, rng);
        auto r = solve_grid_pdp(g, pairs);
        std::vector<Vertex> terms;
        for (const auto& p : pairs) {
            terms.push_back(p.a);
            terms.push_back(p.b);
        }
        auto h = hanan_grid(g, terms);
        for (const auto& seg : h.segments) {
            std::size_t inside = 0;
            for (const Edge& e : seg.edges)
                inside += std::binary_search(r.witness.edges.begin(), r.witness.edges.end(), e);
            CHECK((inside == 0 || inside == seg.edges.size()));
        }
    }
}

TEST_CASE("optimum is invariant under the grid symmetries") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 25; ++it) {
        GridSpec g{4 + static_cast<std::size_t>(it % 3), 5};
        auto pairs = random_pairs(g, 3, rng);
        const auto base = solve_grid_pdp(g, pairs).size;
        for (int code = 1; code < 8; ++code) {
            GridSpec tg;
            std::vector<VertexPair> tp;
            for (const auto& p : pairs) {
                Vertex a = transform(g, p.a, code, tg);
                Vertex b = transform(g, p.b, code, tg);
                tp.push_back(VertexPair::of(a, b));
            }
            CHECK(solve_grid_pdp(tg, tp).size == base);
        }
    }
}

TEST_CASE("worker count does not change the result") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 15; ++it) {
        GridSpec g{10, 10};
        auto pairs = random_pairs(g, 3, rng);
        GridOptions one, four;
        four.workers = 4;
        auto a = solve_grid_pdp(g, pairs, one);
        auto b = solve_grid_pdp(g, pairs, one);
        auto c = solve_grid_pdp(g, pairs, four);
        CHECK(a.size == c.size);
        CHECK(a.witness == b.witness);
        CHECK(verify_preserver(grid_instance(g, pairs), c.witness));
    }
}

TEST_CASE("grid instance entry point rejects non-grids") {
    Instance plain = make_instance(4, cycle_graph(4).edges(), TerminalSet{{0, 2}});
    CHECK_THROWS_AS(solve_grid_instance(plain), PreconditionError);
    Instance sub = parse_instance_text("grid 3 3\ne 0 1\ne 1 2\nP (0,0) (2,0)\n");
    CHECK_THROWS_AS(solve_grid_instance(sub), PreconditionError);
    Instance full = parse_instance_text("grid 3 3\nS (0,0) (2,2) (2,0)\n");
    CHECK(solve_grid_instance(full).size == 4);
}

} // TEST_SUITE
