#include "dpres/random.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dpres/grid.hpp"

namespace dpres {

namespace {

std::vector<Vertex> sample_vertices(std::size_t n, std::size_t count, std::mt19937_64& rng) {
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(count, n));
    std::sort(all.begin(), all.end());
    return all;
}

TerminalSpec sample_terminals(std::size_t n, std::size_t terminals, std::size_t pairs, std::mt19937_64& rng) {
    if (terminals > 0 || pairs == 0) return TerminalSet{sample_vertices(n, terminals, rng)};
    std::vector<VertexPair> all;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) all.push_back(VertexPair{u, v});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(pairs, all.size()));
    std::sort(all.begin(), all.end());
    return PairList{all};
}

} // namespace

Instance random_instance(const RandomSpec& spec, std::mt19937_64& rng) {
    Instance inst;
    if (spec.grid) {
        if (spec.grid->width == 0 || spec.grid->height == 0) throw PreconditionError("grid dimension must be positive");
        inst.grid = spec.grid;
        inst.graph = build_grid(*spec.grid);
        inst.terminals = sample_terminals(spec.grid->size(), spec.terminals, spec.pairs, rng);
        return inst;
    }
    const std::size_t n = spec.n;
    const std::size_t max_m = n * (n - (n > 0)) / 2;
    const std::size_t m = std::min(spec.m, max_m);
    std::set<Edge> edges;
    if (spec.connected && n > 1) {
        if (m + 1 < n) throw PreconditionError("connected graph needs m >= n - 1");
        std::vector<Vertex> order(n);
        std::iota(order.begin(), order.end(), Vertex{0});
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i = 1; i < n; ++i) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            edges.insert(VertexPair::of(order[i], order[pick(rng)]));
        }
    }
    if (n > 1) {
        std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
        while (edges.size() < m) {
            Vertex u = pick(rng), v = pick(rng);
            if (u != v) edges.insert(VertexPair::of(u, v));
        }
    }
    std::vector<Edge> list(edges.begin(), edges.end());
    inst.graph = Graph(n, list);
    inst.terminals = sample_terminals(n, spec.terminals, spec.pairs, rng);
    return inst;
}

Instance random_instance(const RandomSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_instance(spec, rng);
}

Instance random_low_cover_instance(std::size_t n, std::size_t cover, double p_inner, double p_outer,
                                   std::size_t terminals, std::mt19937_64& rng) {
    cover = std::min(cover, n);
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<char> in(n, 0);
    for (std::size_t i = 0; i < cover; ++i) in[perm[i]] = 1;
    std::bernoulli_distribution inner(p_inner), outer(p_outer);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) {
            if (in[u] && in[v]) {
                if (inner(rng)) edges.push_back(Edge{u, v});
            } else if (in[u] || in[v]) {
                if (outer(rng)) edges.push_back(Edge{u, v});
            }
        }
    Instance inst;
    inst.graph = Graph(n, edges);
    inst.terminals = TerminalSet{sample_vertices(n, terminals, rng)};
    return inst;
}

} // namespace dpres
