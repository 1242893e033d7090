#include "dpres/exact.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <numeric>

#include "dpres/checker.hpp"

namespace dpres {

namespace {

std::vector<VertexPair> required_pairs(const Instance& inst, DistanceMatrix& d) {
    auto pairs = pairs_of(inst.terminals);
    std::vector<Vertex> ends;
    for (const auto& p : pairs) {
        ends.push_back(p.a);
        ends.push_back(p.b);
    }
    d = all_pairs_distances(inst.graph, ends);
    return finite_pairs(inst.graph, pairs, d);
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t r = idx.size();
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

} // namespace

SolveResult brute_force_min(const Instance& inst, const BruteOptions& options) {
    DistanceMatrix d;
    auto pairs = required_pairs(inst, d);
    SolveResult result;
    if (pairs.empty()) return result;

    std::vector<Edge> cand = options.restrict_to_union ? shortest_path_edge_union(inst.graph, pairs) : inst.graph.edges();
    if (cand.size() > options.candidate_cap)
        throw SizeCapError("brute force: " + std::to_string(cand.size()) + " candidate edges exceed cap " +
                           std::to_string(options.candidate_cap));

    PreserverChecker checker(inst.graph, pairs);
    Dist longest = 0;
    for (const auto& p : pairs) longest = std::max(longest, d.at(p.a, p.b));

    std::array<std::vector<Edge>, kernels::kLanes> batch;
    for (std::size_t r = longest; r <= cand.size(); ++r) {
        std::vector<std::size_t> idx(r);
        std::iota(idx.begin(), idx.end(), 0);
        bool more = true;
        while (more) {
            std::size_t filled = 0;
            for (; filled < kernels::kLanes && more; ++filled) {
                batch[filled].clear();
                for (std::size_t i : idx) batch[filled].push_back(cand[i]);
                more = next_combination(idx, cand.size());
            }
            result.stats.candidates += filled;
            unsigned ok = checker.check_batch(std::span<const std::vector<Edge>>(batch.data(), filled));
            if (ok != 0) {
                result.witness = Preserver{batch[__builtin_ctz(ok)]};
                result.size = r;
                return result;
            }
        }
    }
    throw Error("brute force: no preserver among candidates (shortest-path edge union is inconsistent)");
}

Preserver greedy_preserver(const Instance& inst) {
    DistanceMatrix d;
    auto pairs = required_pairs(inst, d);
    std::vector<Edge> edges;
    for (const auto& p : pairs) {
        // walk back from b along smallest-id neighbors one step closer to a
        auto da = d.row(p.a);
        Vertex cur = p.b;
        while (cur != p.a) {
            for (Vertex w : inst.graph.neighbors(cur)) {
                if (da[w] != kUnreachable && da[w] + 1 == da[cur]) {
                    edges.push_back(VertexPair::of(cur, w));
                    cur = w;
                    break;
                }
            }
        }
    }
    return prune_minimal(inst, make_preserver(std::move(edges)));
}

namespace {

constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

struct Unit {
    Vertex x = 0, z = 0;
    std::uint32_t weight = 0;
    std::vector<Edge> edges;
};

struct Arc {
    std::uint32_t unit;
    std::uint32_t from, to; // pair-local vertex ids
};

struct PairDag {
    std::vector<Arc> arcs; // sorted by host distance of `from` from the pair source
    std::uint32_t local_count = 0;
    std::uint32_t target = 0;
    std::vector<std::uint64_t> tight; // unit mask
};

enum : std::uint8_t { kUndecided = 0, kChosen = 1, kExcluded = 2 };

class BranchAndBound {
public:
    BranchAndBound(const Instance& inst, const SearchLimits& limits) : inst_(inst), limits_(limits) {}

    SolveResult run() {
        DistanceMatrix d;
        auto pairs = required_pairs(inst_, d);
        SolveResult result;
        if (pairs.empty()) return result;
        start_ = std::chrono::steady_clock::now();

        Preserver greedy = greedy_preserver(inst_);
        best_ = greedy.size();
        best_units_.reset();
        build_units(pairs);
        build_dags(pairs, d);
        order_units();

        status_.assign(units_.size(), kUndecided);
        words_ = (units_.size() + 63) / 64;
        search(0);

        result.stats = stats_;
        if (!best_units_) {
            result.size = greedy.size();
            result.witness = std::move(greedy);
            return result;
        }
        std::vector<Edge> edges;
        for (std::size_t u = 0; u < units_.size(); ++u)
            if ((*best_units_)[u]) edges.insert(edges.end(), units_[u].edges.begin(), units_[u].edges.end());
        result.witness = make_preserver(std::move(edges));
        result.size = result.witness.size();
        return result;
    }

private:
    void build_units(const std::vector<VertexPair>& pairs) {
        auto cand = shortest_path_edge_union(inst_.graph, pairs);
        Graph gc(inst_.graph.n(), cand);
        std::vector<char> terminal(gc.n(), 0);
        for (const auto& p : pairs) terminal[p.a] = terminal[p.b] = 1;
        auto interior = [&](Vertex v) { return !terminal[v] && gc.degree(v) == 2; };

        std::vector<char> used(gc.m(), 0);
        for (Vertex x = 0; x < gc.n(); ++x) {
            if (interior(x)) continue;
            for (Vertex y : gc.neighbors(x)) {
                std::size_t first = *gc.edge_id(VertexPair::of(x, y));
                if (used[first]) continue;
                Unit unit;
                unit.x = x;
                Vertex prev = x, cur = y;
                unit.edges.push_back(VertexPair::of(x, y));
                used[first] = 1;
                while (interior(cur)) {
                    auto nb = gc.neighbors(cur);
                    Vertex nxt = nb[0] == prev ? nb[1] : nb[0];
                    std::size_t id = *gc.edge_id(VertexPair::of(cur, nxt));
                    used[id] = 1;
                    unit.edges.push_back(VertexPair::of(cur, nxt));
                    prev = cur;
                    cur = nxt;
                }
                unit.z = cur;
                unit.weight = static_cast<std::uint32_t>(unit.edges.size());
                units_.push_back(std::move(unit));
            }
        }
        // edges on cycles made only of interior vertices cannot lie on terminal shortest paths,
        // but keep them as single-edge units so the search stays exact regardless
        for (std::size_t i = 0; i < gc.m(); ++i) {
            if (used[i]) continue;
            Edge e = gc.edges()[i];
            units_.push_back(Unit{e.a, e.b, 1, {e}});
        }
    }

    void build_dags(const std::vector<VertexPair>& pairs, const DistanceMatrix& d) {
        const std::size_t words = (units_.size() + 63) / 64;
        for (const auto& p : pairs) {
            auto ds = d.row(p.a);
            auto dt = d.row(p.b);
            const Dist total = ds[p.b];
            PairDag dag;
            dag.tight.assign(words, 0);
            std::vector<std::pair<Dist, Arc>> arcs;
            std::vector<std::uint32_t> local(inst_.graph.n(), kInf);
            std::uint32_t next_local = 0;
            auto id = [&](Vertex v) {
                if (local[v] == kInf) local[v] = next_local++;
                return local[v];
            };
            id(p.a);
            for (std::uint32_t u = 0; u < units_.size(); ++u) {
                const Unit& unit = units_[u];
                auto fits = [&](Vertex from, Vertex to) {
                    return ds[from] != kUnreachable && dt[to] != kUnreachable && ds[from] + unit.weight + dt[to] == total;
                };
                Vertex from, to;
                if (fits(unit.x, unit.z)) {
                    from = unit.x;
                    to = unit.z;
                } else if (fits(unit.z, unit.x)) {
                    from = unit.z;
                    to = unit.x;
                } else {
                    continue;
                }
                dag.tight[u / 64] |= std::uint64_t{1} << (u % 64);
                arcs.push_back({ds[from], Arc{u, id(from), id(to)}});
            }
            std::stable_sort(arcs.begin(), arcs.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
            for (auto& [dist, arc] : arcs) dag.arcs.push_back(arc);
            dag.target = id(p.b);
            dag.local_count = next_local;
            dags_.push_back(std::move(dag));
        }
        residual_.assign(dags_.size(), 0);
    }

    void order_units() {
        std::vector<std::uint32_t> count(units_.size(), 0);
        for (const auto& dag : dags_)
            for (const auto& arc : dag.arcs) ++count[arc.unit];
        order_.resize(units_.size());
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) { return count[a] > count[b]; });
    }

    // Min weight of undecided units still needed for the pair; chosen units are free.
    std::uint32_t residual(const PairDag& dag) {
        cost_.assign(dag.local_count, kInf);
        cost_[0] = 0;
        for (const Arc& arc : dag.arcs) {
            std::uint8_t s = status_[arc.unit];
            if (s == kExcluded || cost_[arc.from] == kInf) continue;
            std::uint32_t c = cost_[arc.from] + (s == kChosen ? 0 : units_[arc.unit].weight);
            if (c < cost_[arc.to]) cost_[arc.to] = c;
        }
        return cost_[dag.target];
    }

    // Returns kInf if some pair can no longer be preserved.
    std::uint64_t lower_bound() {
        std::uint32_t worst = 0;
        for (std::size_t p = 0; p < dags_.size(); ++p) {
            residual_[p] = residual(dags_[p]);
            if (residual_[p] == kInf) return kInf;
            worst = std::max(worst, residual_[p]);
        }
        if (worst == 0) return chosen_weight_;

        // disjoint packing: pairs whose undecided tight units do not overlap need separate additions
        pack_order_.resize(dags_.size());
        std::iota(pack_order_.begin(), pack_order_.end(), 0);
        std::stable_sort(pack_order_.begin(), pack_order_.end(),
                         [&](std::size_t a, std::size_t b) { return residual_[a] > residual_[b]; });
        taken_.assign(words_, 0);
        undecided_.resize(words_);
        for (std::size_t w = 0; w < words_; ++w) undecided_[w] = undecided_word(w);
        std::uint64_t packed = 0;
        for (std::size_t p : pack_order_) {
            if (residual_[p] == 0) break;
            const auto& tight = dags_[p].tight;
            bool disjoint = true;
            for (std::size_t w = 0; w < words_ && disjoint; ++w)
                if (tight[w] & undecided_[w] & taken_[w]) disjoint = false;
            if (!disjoint) continue;
            for (std::size_t w = 0; w < words_; ++w) taken_[w] |= tight[w] & undecided_[w];
            packed += residual_[p];
        }
        return chosen_weight_ + std::max<std::uint64_t>(worst, packed);
    }

    std::uint64_t undecided_word(std::size_t w) const {
        std::uint64_t bits = 0;
        const std::size_t base = w * 64;
        const std::size_t end = std::min(units_.size(), base + 64);
        for (std::size_t u = base; u < end; ++u)
            if (status_[u] == kUndecided) bits |= std::uint64_t{1} << (u - base);
        return bits;
    }

    void tick() {
        ++stats_.nodes;
        if ((stats_.nodes & 1023) == 0 && limits_.time_limit &&
            std::chrono::steady_clock::now() - start_ > *limits_.time_limit)
            throw TimeoutError("bb_min: time limit exceeded after " + std::to_string(stats_.nodes) + " nodes");
        if (limits_.progress && stats_.nodes % limits_.progress_every == 0) limits_.progress(stats_);
    }

    void search(std::size_t depth) {
        tick();
        std::uint64_t lb = lower_bound();
        if (lb == kInf || lb >= best_) return;
        bool satisfied = std::all_of(residual_.begin(), residual_.end(), [](std::uint32_t r) { return r == 0; });
        if (satisfied) {
            best_ = chosen_weight_;
            best_units_.emplace(units_.size());
            for (std::size_t u = 0; u < units_.size(); ++u) (*best_units_)[u] = status_[u] == kChosen;
            ++stats_.candidates;
            return;
        }
        // branch on the first undecided unit that some unsatisfied pair could still use
        std::uint32_t pick = kInf;
        for (std::size_t i = depth; i < order_.size() && pick == kInf; ++i) {
            std::uint32_t u = order_[i];
            if (status_[u] != kUndecided) continue;
            for (std::size_t p = 0; p < dags_.size(); ++p)
                if (residual_[p] > 0 && (dags_[p].tight[u / 64] >> (u % 64) & 1)) {
                    pick = u;
                    break;
                }
        }
        if (pick == kInf) return;
        std::size_t pos = std::find(order_.begin(), order_.end(), pick) - order_.begin();
        // units skipped before pick are useless here; keep them undecided (they never get chosen)
        std::swap(order_[depth], order_[pos]);

        status_[pick] = kChosen;
        chosen_weight_ += units_[pick].weight;
        search(depth + 1);
        chosen_weight_ -= units_[pick].weight;

        status_[pick] = kExcluded;
        search(depth + 1);
        status_[pick] = kUndecided;

        std::swap(order_[depth], order_[pos]);
    }

    const Instance& inst_;
    const SearchLimits& limits_;
    std::chrono::steady_clock::time_point start_;
    std::vector<Unit> units_;
    std::vector<PairDag> dags_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint8_t> status_;
    std::vector<std::uint32_t> residual_;
    std::vector<std::uint32_t> cost_;
    std::vector<std::size_t> pack_order_;
    std::vector<std::uint64_t> taken_;
    std::vector<std::uint64_t> undecided_;
    std::size_t words_ = 0;
    std::uint64_t chosen_weight_ = 0;
    std::uint64_t best_ = 0;
    std::optional<std::vector<bool>> best_units_;
    SolveStats stats_;
};

} // namespace

SolveResult bb_min(const Instance& inst, const SearchLimits& limits) { return BranchAndBound(inst, limits).run(); }

} // namespace dpres
