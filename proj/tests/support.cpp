#include "support.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <functional>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "dpres/random.hpp"
#include "dpres/vc.hpp"

namespace dpres::testing {

Instance make_instance(std::size_t n, std::vector<Edge> edges, TerminalSpec terminals) {
    Instance inst;
    inst.graph = Graph(n, edges);
    inst.terminals = std::move(terminals);
    return inst;
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex v = 0; v + 1 < n; ++v) e.push_back(Edge{v, v + 1});
    return Graph(n, e);
}

Graph cycle_graph(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex v = 0; v < n; ++v) e.push_back(VertexPair::of(v, static_cast<Vertex>((v + 1) % n)));
    return Graph(n, e);
}

Graph star_graph(std::size_t leaves) {
    std::vector<Edge> e;
    for (Vertex v = 1; v <= leaves; ++v) e.push_back(Edge{0, v});
    return Graph(leaves + 1, e);
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) e.push_back(Edge{u, v});
    return Graph(n, e);
}

std::vector<Dist> naive_distances(std::size_t n, const std::vector<Edge>& edges, Vertex source) {
    std::vector<std::vector<Vertex>> adj(n);
    for (const Edge& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<Dist> d(n, kUnreachable);
    std::deque<Vertex> queue{source};
    d[source] = 0;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex v : adj[u])
            if (d[v] == kUnreachable) {
                d[v] = d[u] + 1;
                queue.push_back(v);
            }
    }
    return d;
}

std::vector<Edge> enumerate_shortest_path_edges(const Graph& g, const std::vector<VertexPair>& pairs) {
    std::set<Edge> out;
    for (const auto& p : pairs) {
        auto d = naive_distances(g.n(), g.edges(), p.a);
        if (d[p.b] == kUnreachable) continue;
        std::vector<Vertex> path{p.a};
        std::function<void(Vertex)> walk = [&](Vertex u) {
            if (u == p.b) {
                for (std::size_t i = 0; i + 1 < path.size(); ++i) out.insert(VertexPair::of(path[i], path[i + 1]));
                return;
            }
            if (path.size() - 1 >= d[p.b]) return;
            for (Vertex v : g.neighbors(u)) {
                if (d[v] != d[u] + 1) continue;
                path.push_back(v);
                walk(v);
                path.pop_back();
            }
        };
        walk(p.a);
    }
    return {out.begin(), out.end()};
}

std::vector<Instance> sweep_corpus(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Instance> out;
    for (std::size_t i = 0; i < count; ++i) {
        RandomSpec spec;
        spec.n = std::uniform_int_distribution<std::size_t>(3, 10)(rng);
        const std::size_t max_m = std::min<std::size_t>(20, spec.n * (spec.n - 1) / 2);
        spec.m = std::uniform_int_distribution<std::size_t>(spec.n - 1, max_m)(rng);
        spec.connected = (i % 5) != 4; // every fifth instance may be disconnected
        const std::size_t t = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(4, spec.n))(rng);
        if (i % 2 == 0) spec.terminals = t;
        else spec.pairs = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        out.push_back(random_instance(spec, rng));
    }
    return out;
}

bool class_structure_ok(const Instance& inst, const Preserver& h, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const Graph& g = inst.graph;
    auto cover = min_vertex_cover(g);
    auto cs = neighborhood_classes(g, cover, terminal_vertices(inst.terminals));
    std::vector<std::vector<Vertex>> nbr(g.n());
    for (const Edge& e : h.edges) {
        nbr[e.a].push_back(e.b);
        nbr[e.b].push_back(e.a);
    }
    for (auto& v : nbr) std::sort(v.begin(), v.end());
    for (std::size_t c = 0; c < cs.classes.size(); ++c) {
        const auto& cls = cs.classes[c];
        for (Vertex t : cls.terminals)
            if (nbr[t] != nbr[cls.terminals.front()])
                return fail("class " + std::to_string(c) + ": terminals " + std::to_string(t) + " and " +
                            std::to_string(cls.terminals.front()) + " differ in the witness");
        std::size_t active_nonterminals = 0;
        for (Vertex v : cls.members) {
            const bool terminal = std::binary_search(cls.terminals.begin(), cls.terminals.end(), v);
            if (!terminal && !nbr[v].empty()) ++active_nonterminals;
        }
        if (active_nonterminals > 1) return fail("class " + std::to_string(c) + ": several non-terminals used");
        if (!cls.terminals.empty() && active_nonterminals > 0)
            return fail("class " + std::to_string(c) + ": non-terminal used next to terminals");
    }
    return true;
}

std::size_t table_violations(const ConnectivityDp& dp, const NiceTreeDecomposition& ntd, std::string* first) {
    std::size_t bad = 0;
    auto report = [&](const std::string& msg) {
        if (!bad && first) *first = msg;
        ++bad;
    };
    std::size_t n = 0;
    for (const auto& node : ntd.nodes)
        for (Vertex v : node.bag) n = std::max<std::size_t>(n, v + 1);
    for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
        const auto& scope = dp.scope(t);
        for (std::size_t k = 0; k < dp.tables(t).size(); ++k) {
            const ConnTable& tab = dp.tables(t)[k];
            auto h = dp.reconstruct(t, k);
            std::size_t hn = n;
            for (const Edge& e : h) hn = std::max<std::size_t>(hn, e.b + 1);
            for (Vertex v : scope) hn = std::max<std::size_t>(hn, v + 1);
            if (h.size() != tab.weight)
                report("node " + std::to_string(t) + " table " + std::to_string(k) + ": weight mismatch");
            for (std::size_t i = 0; i < scope.size(); ++i) {
                auto d = naive_distances(hn, h, scope[i]);
                for (std::size_t j = 0; j < scope.size(); ++j) {
                    const Dist dg = dp.distance(scope[i], scope[j]);
                    const bool realized = dg != kUnreachable && d[scope[j]] == dg;
                    const bool sigma = tab.rows[i] >> j & 1;
                    if (sigma != realized)
                        report("node " + std::to_string(t) + " table " + std::to_string(k) + ": sigma(" +
                               std::to_string(scope[i]) + "," + std::to_string(scope[j]) + ")=" +
                               std::to_string(sigma) + " but realized=" + std::to_string(realized));
                }
            }
        }
    }
    return bad;
}

bool is_planar(const Graph& g) {
    using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    BGraph bg(g.n());
    for (const Edge& e : g.edges()) boost::add_edge(e.a, e.b, bg);
    return boost::boyer_myrvold_planarity_test(bg);
}

MccInstance random_mcc(std::mt19937_64& rng, std::size_t k, std::size_t n, double p) {
    MccInstance src;
    src.classes.resize(k);
    std::vector<std::size_t> cls(n);
    for (std::size_t v = 0; v < n; ++v) {
        // the first k vertices seed one class each so no class is empty
        cls[v] = v < k ? v : std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
        src.classes[cls[v]].push_back(static_cast<Vertex>(v));
    }
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (cls[u] != cls[v] && coin(rng)) edges.push_back(Edge{u, v});
    src.graph = Graph(n, edges);
    return src;
}

Mwc3Instance random_mwc3(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    RandomSpec spec;
    spec.n = n;
    spec.m = std::max(m, n - 1);
    spec.connected = true;
    Instance inst = random_instance(spec, rng);
    Mwc3Instance src;
    src.graph = inst.graph;
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    std::shuffle(all.begin(), all.end(), rng);
    src.terminals = {all[0], all[1], all[2]};
    return src;
}

} // namespace dpres::testing
