#include "dpres/vc.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "dpres/checker.hpp"
#include "dpres/exact.hpp"

namespace dpres {

namespace {

class CoverSearch {
public:
    explicit CoverSearch(const Graph& g) : g_(g), in_(g.n(), 0) {}

    std::vector<Vertex> run() {
        // maximal matching endpoints give a valid starting cover
        std::vector<char> used(g_.n(), 0);
        for (const Edge& e : g_.edges())
            if (!used[e.a] && !used[e.b]) used[e.a] = used[e.b] = 1;
        for (Vertex v = 0; v < g_.n(); ++v)
            if (used[v]) best_.push_back(v);
        branch(0);
        std::sort(best_.begin(), best_.end());
        return best_;
    }

private:
    // size of a greedy matching among uncovered edges: each needs its own cover vertex
    std::size_t matching_bound() {
        std::vector<char> used(g_.n(), 0);
        std::size_t count = 0;
        for (const Edge& e : g_.edges())
            if (!in_[e.a] && !in_[e.b] && !used[e.a] && !used[e.b]) {
                used[e.a] = used[e.b] = 1;
                ++count;
            }
        return count;
    }

    void branch(std::size_t chosen) {
        const Edge* open = nullptr;
        for (const Edge& e : g_.edges())
            if (!in_[e.a] && !in_[e.b]) {
                open = &e;
                break;
            }
        if (!open) {
            if (chosen < best_.size()) {
                best_.clear();
                for (Vertex v = 0; v < g_.n(); ++v)
                    if (in_[v]) best_.push_back(v);
            }
            return;
        }
        if (chosen + matching_bound() >= best_.size()) return;
        for (Vertex v : {open->a, open->b}) {
            in_[v] = 1;
            branch(chosen + 1);
            in_[v] = 0;
        }
    }

    const Graph& g_;
    std::vector<char> in_;
    std::vector<Vertex> best_;
};

} // namespace

std::vector<Vertex> min_vertex_cover(const Graph& g) { return CoverSearch(g).run(); }

CoverStructure neighborhood_classes(const Graph& g, std::span<const Vertex> cover, std::span<const Vertex> terminals) {
    CoverStructure cs;
    cs.cover.assign(cover.begin(), cover.end());
    std::sort(cs.cover.begin(), cs.cover.end());
    cs.cover.erase(std::unique(cs.cover.begin(), cs.cover.end()), cs.cover.end());
    std::vector<char> in(g.n(), 0), term(g.n(), 0);
    for (Vertex v : cs.cover) {
        if (v >= g.n()) throw PreconditionError("cover vertex out of range");
        in[v] = 1;
    }
    for (Vertex t : terminals) {
        if (t >= g.n()) throw PreconditionError("terminal out of range");
        term[t] = 1;
    }
    for (const Edge& e : g.edges())
        if (!in[e.a] && !in[e.b])
            throw PreconditionError("not a vertex cover: edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                                    " uncovered");
    std::map<std::vector<Vertex>, std::size_t> by_signature;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (in[v]) continue;
        cs.independent.push_back(v);
        std::vector<Vertex> sig(g.neighbors(v).begin(), g.neighbors(v).end());
        auto [it, fresh] = by_signature.try_emplace(sig, cs.classes.size());
        if (fresh) cs.classes.push_back(CoverClass{{}, sig, {}, {}});
        CoverClass& c = cs.classes[it->second];
        c.members.push_back(v);
        if (term[v]) c.terminals.push_back(v);
    }
    for (auto& c : cs.classes) {
        if (!c.terminals.empty()) c.retained = c.terminals;
        else if (!c.neighborhood.empty()) c.retained = {c.members.front()};
    }
    return cs;
}

namespace {

struct Candidate {
    std::uint64_t cost = 0;
    std::vector<Edge> edges;
    bool found = false;
};

bool better(std::uint64_t cost, const std::vector<Edge>& edges, const Candidate& cur) {
    if (!cur.found || cost < cur.cost) return true;
    return cost == cur.cost && edges < cur.edges;
}

} // namespace

SolveResult vc_solve(const Instance& inst, const VcOptions& options) {
    const auto* subset = std::get_if<TerminalSet>(&inst.terminals);
    if (!subset) throw PreconditionError("vertex-cover solver requires a terminal subset (S line), not pairs");
    const Graph& g = inst.graph;
    SolveResult result;

    auto all_pairs = pairs_of(inst.terminals);
    std::vector<Vertex> ends;
    for (const auto& p : all_pairs) ends.push_back(p.a);
    DistanceMatrix d = all_pairs_distances(g, ends);
    auto pairs = finite_pairs(g, all_pairs, d);
    if (pairs.empty()) return result;

    std::vector<Vertex> cover = options.cover ? *options.cover : min_vertex_cover(g);
    CoverStructure cs = neighborhood_classes(g, cover, terminal_vertices(inst.terminals));
    std::vector<Edge> inner;
    {
        std::vector<char> in(g.n(), 0);
        for (Vertex v : cs.cover) in[v] = 1;
        for (const Edge& e : g.edges())
            if (in[e.a] && in[e.b]) inner.push_back(e);
    }
    if (inner.size() > options.cover_edge_cap || inner.size() >= 63)
        throw SizeCapError("vertex-cover solver: " + std::to_string(inner.size()) + " edges inside the cover exceed cap " +
                           std::to_string(options.cover_edge_cap));
    std::vector<const CoverClass*> active;
    for (const auto& c : cs.classes)
        if (!c.retained.empty()) {
            if (c.neighborhood.size() >= 63) throw SizeCapError("vertex-cover solver: class neighborhood too large");
            active.push_back(&c);
        }

    PreserverChecker checker(g, pairs);
    std::atomic<std::uint64_t> incumbent{greedy_preserver(inst).size()};
    std::atomic<std::uint64_t> next_mask{0};
    const std::uint64_t masks = std::uint64_t{1} << inner.size();
    std::mutex mu;
    Candidate overall;

    auto worker = [&] {
        Candidate mine;
        SolveStats stats;
        std::vector<Edge> edges;
        std::vector<std::uint64_t> choice(active.size(), 0);

        std::function<void(std::size_t, std::uint64_t)> classes = [&](std::size_t i, std::uint64_t cost) {
            ++stats.nodes;
            if (cost > incumbent.load(std::memory_order_relaxed)) return;
            if (i == active.size()) {
                std::size_t base = edges.size();
                for (std::size_t k = 0; k < active.size(); ++k) {
                    const CoverClass& c = *active[k];
                    for (Vertex v : c.retained)
                        for (std::size_t b = 0; b < c.neighborhood.size(); ++b)
                            if (choice[k] >> b & 1) edges.push_back(VertexPair::of(v, c.neighborhood[b]));
                }
                ++stats.candidates;
                if (checker.check(edges)) {
                    std::vector<Edge> sorted = edges;
                    std::sort(sorted.begin(), sorted.end());
                    if (better(cost, sorted, mine)) mine = Candidate{cost, std::move(sorted), true};
                    std::uint64_t cur = incumbent.load();
                    while (cost < cur && !incumbent.compare_exchange_weak(cur, cost)) {}
                }
                edges.resize(base);
                return;
            }
            const CoverClass& c = *active[i];
            const std::uint64_t r = c.retained.size();
            const std::uint64_t subsets = std::uint64_t{1} << c.neighborhood.size();
            for (std::uint64_t x = 0; x < subsets; ++x) {
                choice[i] = x;
                classes(i + 1, cost + r * static_cast<std::uint64_t>(__builtin_popcountll(x)));
            }
        };

        for (std::uint64_t m; (m = next_mask.fetch_add(1)) < masks;) {
            edges.clear();
            for (std::size_t b = 0; b < inner.size(); ++b)
                if (m >> b & 1) edges.push_back(inner[b]);
            classes(0, edges.size());
        }
        std::lock_guard lock(mu);
        result.stats.nodes += stats.nodes;
        result.stats.candidates += stats.candidates;
        if (mine.found && better(mine.cost, mine.edges, overall)) overall = std::move(mine);
    };
    if (options.workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < options.workers; ++t) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }
    if (!overall.found) throw Error("vertex-cover solver found no preserver (class structure assumption violated)");
    result.witness = Preserver{std::move(overall.edges)};
    result.size = result.witness.size();
    return result;
}

} // namespace dpres
