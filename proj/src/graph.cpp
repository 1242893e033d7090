#include "dpres/graph.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace dpres {

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adj_(n) {
    edges_.reserve(edges.size());
    for (Edge e : edges) {
        e = VertexPair::of(e.a, e.b);
        if (e.a == e.b) throw ParseError("self-loop at vertex " + std::to_string(e.a));
        if (e.b >= n) throw ParseError("edge endpoint " + std::to_string(e.b) + " out of range");
        edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const Edge& e : edges_) {
        adj_[e.a].push_back(e.b);
        adj_[e.b].push_back(e.a);
    }
    for (auto& row : adj_) std::sort(row.begin(), row.end());
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (u >= n() || v >= n()) return false;
    const auto& row = adj_[u];
    return std::binary_search(row.begin(), row.end(), v);
}

std::optional<std::size_t> Graph::edge_id(Edge e) const {
    e = VertexPair::of(e.a, e.b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

Preserver make_preserver(std::vector<Edge> edges) {
    for (auto& e : edges) e = VertexPair::of(e.a, e.b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Preserver{std::move(edges)};
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<Vertex> sources, std::vector<std::vector<Dist>> rows)
    : sources_(std::move(sources)), rows_(std::move(rows)), row_of_(n, -1) {
    for (std::size_t i = 0; i < sources_.size(); ++i) row_of_[sources_[i]] = static_cast<std::int32_t>(i);
}

std::span<const Dist> DistanceMatrix::row(Vertex s) const {
    if (!has_row(s)) throw std::out_of_range("no distance row for vertex " + std::to_string(s));
    return rows_[row_of_[s]];
}

std::vector<Dist> bfs_distances(const Graph& g, Vertex source) {
    if (source >= g.n()) throw std::out_of_range("source " + std::to_string(source) + " out of range");
    std::vector<Dist> dist(g.n(), kUnreachable);
    std::vector<Vertex> queue;
    queue.reserve(g.n());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex u = queue[head];
        for (Vertex w : g.neighbors(u)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

DistanceMatrix all_pairs_distances(const Graph& g, std::span<const Vertex> sources) {
    std::vector<Vertex> srcs(sources.begin(), sources.end());
    std::sort(srcs.begin(), srcs.end());
    srcs.erase(std::unique(srcs.begin(), srcs.end()), srcs.end());
    std::vector<std::vector<Dist>> rows;
    rows.reserve(srcs.size());
    for (Vertex s : srcs) rows.push_back(bfs_distances(g, s));
    return DistanceMatrix(g.n(), std::move(srcs), std::move(rows));
}

std::vector<VertexPair> pairs_of(const TerminalSpec& spec) {
    std::vector<VertexPair> out;
    if (const auto* s = std::get_if<TerminalSet>(&spec)) {
        std::vector<Vertex> v = s->vertices;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j) out.push_back({v[i], v[j]});
        return out;
    }
    for (const auto& p : std::get<PairList>(spec).pairs) out.push_back(VertexPair::of(p.a, p.b));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Vertex> terminal_vertices(const TerminalSpec& spec) {
    std::vector<Vertex> v;
    if (const auto* s = std::get_if<TerminalSet>(&spec)) {
        v = s->vertices;
    } else {
        for (const auto& p : std::get<PairList>(spec).pairs) {
            v.push_back(p.a);
            v.push_back(p.b);
        }
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void validate(const TerminalSpec& spec, std::size_t n) {
    if (const auto* s = std::get_if<TerminalSet>(&spec)) {
        for (Vertex v : s->vertices)
            if (v >= n) throw ParseError("terminal " + std::to_string(v) + " out of range");
        return;
    }
    for (const auto& p : std::get<PairList>(spec).pairs) {
        if (p.a >= n || p.b >= n) throw ParseError("pair endpoint out of range");
        if (p.a == p.b) throw ParseError("pair with identical endpoints " + std::to_string(p.a));
    }
}

void validate(const Instance& inst) {
    validate(inst.terminals, inst.graph.n());
    if (inst.budget && *inst.budget > inst.graph.m())
        throw ParseError("budget " + std::to_string(*inst.budget) + " exceeds edge count");
    if (inst.grid && inst.grid->size() != inst.graph.n()) throw ParseError("grid dimensions do not match vertex count");
}

std::vector<VertexPair> finite_pairs(const Graph&, std::span<const VertexPair> pairs, const DistanceMatrix& d) {
    std::vector<VertexPair> out;
    for (const auto& p : pairs)
        if (d.at(p.a, p.b) != kUnreachable) out.push_back(p);
    return out;
}

std::vector<Edge> shortest_path_edge_union(const Graph& g, std::span<const VertexPair> pairs) {
    std::vector<Vertex> sources;
    for (const auto& p : pairs) {
        sources.push_back(p.a);
        sources.push_back(p.b);
    }
    DistanceMatrix d = all_pairs_distances(g, sources);
    std::vector<char> keep(g.m(), 0);
    const auto& edges = g.edges();
    for (const auto& p : pairs) {
        auto dp = d.row(p.a);
        auto dq = d.row(p.b);
        Dist target = dp[p.b];
        if (target == kUnreachable) continue;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (keep[i]) continue;
            Vertex u = edges[i].a, v = edges[i].b;
            bool fwd = dp[u] != kUnreachable && dq[v] != kUnreachable && dp[u] + 1 + dq[v] == target;
            bool bwd = dp[v] != kUnreachable && dq[u] != kUnreachable && dp[v] + 1 + dq[u] == target;
            if (fwd || bwd) keep[i] = 1;
        }
    }
    std::vector<Edge> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (keep[i]) out.push_back(edges[i]);
    return out;
}

Graph subgraph(const Graph& g, std::span<const Edge> edges) {
    for (const Edge& e : edges)
        if (!g.has_edge(e.a, e.b))
            throw PreconditionError("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " not in host graph");
    return Graph(g.n(), edges);
}

namespace {

// Pairs grouped by their smaller endpoint, so one BFS per source serves all its pairs.
std::map<Vertex, std::vector<Vertex>> group_by_source(std::span<const VertexPair> pairs) {
    std::map<Vertex, std::vector<Vertex>> by_src;
    for (const auto& p : pairs) by_src[p.a].push_back(p.b);
    return by_src;
}

std::optional<Violation> violation_in(const Graph& host, const Graph& sub, std::span<const VertexPair> pairs) {
    for (const auto& [s, targets] : group_by_source(pairs)) {
        auto dg = bfs_distances(host, s);
        auto dh = bfs_distances(sub, s);
        for (Vertex t : targets)
            if (dg[t] != dh[t]) return Violation{{s, t}, dg[t], dh[t]};
    }
    return std::nullopt;
}

} // namespace

std::optional<Violation> first_violation(const Instance& inst, const Preserver& h) {
    Graph sub = subgraph(inst.graph, h.edges);
    auto pairs = pairs_of(inst.terminals);
    return violation_in(inst.graph, sub, pairs);
}

bool verify_preserver(const Instance& inst, const Preserver& h) { return !first_violation(inst, h).has_value(); }

Preserver prune_minimal(const Instance& inst, const Preserver& h) {
    auto pairs = pairs_of(inst.terminals);
    Graph current = subgraph(inst.graph, h.edges);
    if (violation_in(inst.graph, current, pairs)) throw PreconditionError("prune_minimal: input is not a preserver");

    std::vector<Vertex> sources;
    for (const auto& [s, t] : group_by_source(pairs)) sources.push_back(s);
    DistanceMatrix dg = all_pairs_distances(inst.graph, sources);
    auto by_src = group_by_source(pairs);

    std::vector<Edge> kept = make_preserver(h.edges).edges;
    for (std::size_t i = kept.size(); i-- > 0;) {
        std::vector<Edge> trial;
        trial.reserve(kept.size() - 1);
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) trial.push_back(kept[j]);
        Graph sub(inst.graph.n(), trial);
        bool ok = true;
        for (const auto& [s, targets] : by_src) {
            auto dh = bfs_distances(sub, s);
            auto row = dg.row(s);
            for (Vertex t : targets)
                if (row[t] != dh[t]) {
                    ok = false;
                    break;
                }
            if (!ok) break;
        }
        if (ok) kept = std::move(trial);
    }
    return Preserver{std::move(kept)};
}

} // namespace dpres
