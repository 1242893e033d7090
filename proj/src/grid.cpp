#include "dpres/grid.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "dpres/checker.hpp"

namespace dpres {

Graph build_grid(const GridSpec& spec) {
    if (spec.width == 0 || spec.height == 0) throw PreconditionError("grid dimensions must be positive");
    std::vector<Edge> edges;
    edges.reserve(spec.height * (spec.width - 1) + spec.width * (spec.height - 1));
    for (std::size_t y = 0; y < spec.height; ++y)
        for (std::size_t x = 0; x < spec.width; ++x) {
            if (x + 1 < spec.width) edges.push_back({spec.id(x, y), spec.id(x + 1, y)});
            if (y + 1 < spec.height) edges.push_back({spec.id(x, y), spec.id(x, y + 1)});
        }
    return Graph(spec.size(), edges);
}

HananGrid hanan_grid(const GridSpec& spec, std::span<const Vertex> terminals) {
    if (terminals.empty()) throw PreconditionError("hanan grid needs at least one terminal");
    HananGrid h;
    for (Vertex t : terminals) {
        if (t >= spec.size()) throw PreconditionError("terminal outside grid");
        h.xs.push_back(spec.x_of(t));
        h.ys.push_back(spec.y_of(t));
    }
    for (auto* v : {&h.xs, &h.ys}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    const std::size_t nx = h.xs.size(), ny = h.ys.size();
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) h.intersections.push_back({h.xs[ix], h.ys[iy]});
    h.right.assign(nx * ny, -1);
    h.up.assign(nx * ny, -1);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
            HananSegment s{h.intersection(ix, iy), h.intersection(ix + 1, iy), true,
                           static_cast<std::uint32_t>(h.xs[ix + 1] - h.xs[ix]), {}};
            for (std::size_t x = h.xs[ix]; x < h.xs[ix + 1]; ++x)
                s.edges.push_back({spec.id(x, h.ys[iy]), spec.id(x + 1, h.ys[iy])});
            h.right[s.from] = static_cast<std::int32_t>(h.segments.size());
            h.segments.push_back(std::move(s));
        }
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
            HananSegment s{h.intersection(ix, iy), h.intersection(ix, iy + 1), false,
                           static_cast<std::uint32_t>(h.ys[iy + 1] - h.ys[iy]), {}};
            for (std::size_t y = h.ys[iy]; y < h.ys[iy + 1]; ++y)
                s.edges.push_back({spec.id(h.xs[ix], y), spec.id(h.xs[ix], y + 1)});
            h.up[s.from] = static_cast<std::int32_t>(h.segments.size());
            h.segments.push_back(std::move(s));
        }
    return h;
}

namespace {

constexpr std::size_t kMaskWords = 4;
constexpr std::size_t kMaxSegments = kMaskWords * 64;
constexpr std::uint64_t kInfCost = std::numeric_limits<std::uint64_t>::max() / 4;

struct SegSet {
    std::array<std::uint64_t, kMaskWords> w{};

    bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    friend bool operator==(const SegSet&, const SegSet&) = default;
};

struct SegSetHash {
    std::size_t operator()(const SegSet& s) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto x : s.w) h = (h ^ x) * 0xff51afd7ed558ccdULL, h ^= h >> 32;
        return static_cast<std::size_t>(h);
    }
};

struct LatticePair {
    std::uint32_t p = 0, q = 0; // intersection ids
    int dx = 0, dy = 0;         // step direction in lattice indices
};

// Search over unions of monotone lattice paths on a Hanan grid.
class HananSearch {
public:
    HananSearch(const HananGrid& h, std::vector<LatticePair> pairs, const GridOptions& options)
        : h_(h), pairs_(std::move(pairs)), options_(options), nx_(h.xs.size()) {}

    std::size_t nx() const { return nx_; }

    struct Step {
        std::uint32_t next;
        std::int32_t seg;
    };

    // Up to two lattice moves from node toward the pair's target.
    int moves(const LatticePair& lp, std::uint32_t node, Step out[2]) const {
        int count = 0;
        const std::size_t ix = node % nx_, iy = node / nx_;
        const std::size_t qx = lp.q % nx_, qy = lp.q / nx_;
        if (ix != qx) {
            if (lp.dx > 0) out[count++] = {node + 1, h_.right[node]};
            else out[count++] = {node - 1, h_.right[node - 1]};
        }
        if (iy != qy) {
            if (lp.dy > 0) out[count++] = {static_cast<std::uint32_t>(node + nx_), h_.up[node]};
            else out[count++] = {static_cast<std::uint32_t>(node - nx_), h_.up[node - nx_]};
        }
        return count;
    }

    std::uint64_t step_cost(const SegSet& u, std::int32_t seg) const { return u.test(seg) ? 0 : h_.segments[seg].length; }

    // h[node] = min added length from node to q using monotone moves; nodes outside the box stay infinite.
    void min_add(const LatticePair& lp, const SegSet& u, std::vector<std::uint64_t>& h) const {
        h.assign(h_.intersections.size(), kInfCost);
        const std::size_t px = lp.p % nx_, py = lp.p / nx_, qx = lp.q % nx_, qy = lp.q / nx_;
        const std::size_t x0 = std::min(px, qx), x1 = std::max(px, qx), y0 = std::min(py, qy), y1 = std::max(py, qy);
        h[lp.q] = 0;
        // visit nodes in decreasing lattice distance to q is equivalent to increasing distance from q
        const std::size_t wdist = x1 - x0, hdist = y1 - y0;
        for (std::size_t d = 1; d <= wdist + hdist; ++d)
            for (std::size_t ax = 0; ax <= std::min(d, wdist); ++ax) {
                std::size_t ay = d - ax;
                if (ay > hdist) continue;
                std::size_t ix = lp.dx > 0 ? qx - ax : qx + ax;
                std::size_t iy = lp.dy > 0 ? qy - ay : qy + ay;
                if (ix < x0 || ix > x1 || iy < y0 || iy > y1) continue;
                std::uint32_t node = static_cast<std::uint32_t>(iy * nx_ + ix);
                Step s[2];
                int c = moves(lp, node, s);
                std::uint64_t best = kInfCost;
                for (int i = 0; i < c; ++i) best = std::min(best, step_cost(u, s[i].seg) + h[s[i].next]);
                h[node] = best;
            }
    }

    std::uint64_t pair_need(const LatticePair& lp, const SegSet& u) const {
        thread_local std::vector<std::uint64_t> h;
        min_add(lp, u, h);
        return h[lp.p];
    }

    // Greedy union: each pair adds its cheapest completion given earlier pairs.
    std::pair<std::uint64_t, SegSet> greedy(const std::vector<std::size_t>& order) const {
        SegSet u;
        std::uint64_t cost = 0;
        std::vector<std::uint64_t> h;
        for (std::size_t j : order) {
            const auto& lp = pairs_[j];
            min_add(lp, u, h);
            std::uint32_t node = lp.p;
            while (node != lp.q) {
                Step s[2];
                int c = moves(lp, node, s);
                int pick = 0;
                for (int i = 1; i < c; ++i)
                    if (step_cost(u, s[i].seg) + h[s[i].next] < step_cost(u, s[pick].seg) + h[s[pick].next]) pick = i;
                cost += step_cost(u, s[pick].seg);
                u.set(s[pick].seg);
                node = s[pick].next;
            }
        }
        return {cost, u};
    }

    struct Outcome {
        std::uint64_t cost = kInfCost;
        SegSet set;
        bool found = false;
    };

    // Depth-first search. With stop_at_first, returns the first union of cost < bound in search order.
    Outcome search(std::uint64_t bound, bool stop_at_first, SolveStats& stats,
                   std::atomic<std::uint64_t>* shared_best = nullptr, const std::vector<SegSet>* roots = nullptr) const {
        Worker w{*this, bound, stop_at_first, stats, shared_best, {}, false, {}, {}};
        if (roots) {
            for (const auto& r : *roots) {
                w.solve(r, cost_of(r));
                if (w.done) break;
            }
        } else {
            w.solve(SegSet{}, 0);
        }
        return w.out;
    }

    // Union after extending the empty set by each monotone path of the first pair.
    std::vector<SegSet> first_level() const {
        std::vector<SegSet> roots;
        SegSet path;
        std::function<void(std::uint32_t)> rec = [&](std::uint32_t node) {
            const auto& lp = pairs_[0];
            if (node == lp.q) {
                roots.push_back(path);
                return;
            }
            Step s[2];
            int c = moves(lp, node, s);
            for (int i = 0; i < c; ++i) {
                path.set(s[i].seg);
                rec(s[i].next);
                path.reset(s[i].seg);
            }
        };
        rec(pairs_[0].p);
        return roots;
    }

    std::uint64_t cost_of(const SegSet& u) const {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < h_.segments.size(); ++i)
            if (u.test(i)) c += h_.segments[i].length;
        return c;
    }

    const std::vector<LatticePair>& pairs() const { return pairs_; }

private:
    struct Worker {
        const HananSearch& s;
        std::uint64_t bound;
        bool stop_at_first;
        SolveStats& stats;
        std::atomic<std::uint64_t>* shared_best;
        Outcome out;
        bool done = false;
        std::unordered_set<SegSet, SegSetHash> memo;
        std::vector<std::vector<std::uint64_t>> hbuf;

        std::uint64_t limit() const {
            std::uint64_t b = bound;
            if (shared_best) b = std::min(b, shared_best->load(std::memory_order_relaxed));
            return b;
        }

        void record(const SegSet& u, std::uint64_t cost) {
            if (cost >= limit()) return;
            bound = cost;
            out = Outcome{cost, u, true};
            ++stats.candidates;
            if (shared_best) {
                std::uint64_t cur = shared_best->load();
                while (cost < cur && !shared_best->compare_exchange_weak(cur, cost)) {}
            }
            if (stop_at_first) done = true;
        }

        void solve(const SegSet& u, std::uint64_t cost) {
            if (done) return;
            ++stats.nodes;
            const auto& pairs = s.pairs_;
            if (hbuf.size() < pairs.size() + 1) hbuf.resize(pairs.size() + 1);
            // first unsatisfied pair and the bound from all unsatisfied ones
            std::size_t first = pairs.size();
            std::uint64_t worst = 0;
            for (std::size_t j = 0; j < pairs.size(); ++j) {
                std::uint64_t need = s.pair_need(pairs[j], u);
                if (need > 0 && first == pairs.size()) first = j;
                worst = std::max(worst, need);
            }
            if (first == pairs.size()) {
                record(u, cost);
                return;
            }
            if (cost + worst >= limit()) return;
            if (s.options_.memo_limit > 0) {
                if (memo.count(u)) return;
                if (memo.size() < s.options_.memo_limit) memo.insert(u);
            }
            const auto& lp = pairs[first];
            auto& h = hbuf[first];
            s.min_add(lp, u, h);
            SegSet next = u;
            extend(lp, h, lp.p, next, cost);
        }

        void extend(const LatticePair& lp, const std::vector<std::uint64_t>& h, std::uint32_t node, SegSet& cur,
                    std::uint64_t cost) {
            if (done) return;
            if (node == lp.q) {
                SegSet copy = cur;
                solve(copy, cost);
                return;
            }
            if (cost + h[node] >= limit()) return;
            Step st[2];
            int c = s.moves(lp, node, st);
            // cheaper continuation first
            if (c == 2) {
                std::uint64_t c0 = s.step_cost(cur, st[0].seg) + h[st[0].next];
                std::uint64_t c1 = s.step_cost(cur, st[1].seg) + h[st[1].next];
                if (c1 < c0) std::swap(st[0], st[1]);
            }
            for (int i = 0; i < c; ++i) {
                const std::int32_t seg = st[i].seg;
                const bool had = cur.test(seg);
                const std::uint64_t add = had ? 0 : s.h_.segments[seg].length;
                cur.set(seg);
                extend(lp, h, st[i].next, cur, cost + add);
                if (!had) cur.reset(seg);
                if (done) return;
            }
        }
    };

    const HananGrid& h_;
    std::vector<LatticePair> pairs_;
    const GridOptions& options_;
    std::size_t nx_;
};

struct Prepared {
    HananGrid hanan;
    std::vector<LatticePair> pairs;
};

Prepared prepare(const GridSpec& spec, std::span<const VertexPair> pairs) {
    Prepared p;
    std::vector<Vertex> terms;
    for (const auto& pr : pairs) {
        if (pr.a >= spec.size() || pr.b >= spec.size()) throw PreconditionError("pair outside grid");
        terms.push_back(pr.a);
        terms.push_back(pr.b);
    }
    p.hanan = hanan_grid(spec, terms);
    if (p.hanan.segments.size() > kMaxSegments)
        throw SizeCapError("grid solver: " + std::to_string(p.hanan.segments.size()) + " Hanan segments exceed cap " +
                           std::to_string(kMaxSegments));
    auto index_of = [&](Vertex v) {
        std::size_t ix = std::lower_bound(p.hanan.xs.begin(), p.hanan.xs.end(), spec.x_of(v)) - p.hanan.xs.begin();
        std::size_t iy = std::lower_bound(p.hanan.ys.begin(), p.hanan.ys.end(), spec.y_of(v)) - p.hanan.ys.begin();
        return p.hanan.intersection(ix, iy);
    };
    std::vector<std::pair<std::size_t, LatticePair>> order;
    for (const auto& pr : pairs) {
        if (pr.a == pr.b) continue;
        LatticePair lp;
        lp.p = index_of(pr.a);
        lp.q = index_of(pr.b);
        const std::size_t nx = p.hanan.xs.size();
        lp.dx = (lp.q % nx > lp.p % nx) - (lp.q % nx < lp.p % nx);
        lp.dy = (lp.q / nx > lp.p / nx) - (lp.q / nx < lp.p / nx);
        std::size_t manhattan = (spec.x_of(pr.a) > spec.x_of(pr.b) ? spec.x_of(pr.a) - spec.x_of(pr.b)
                                                                     : spec.x_of(pr.b) - spec.x_of(pr.a)) +
                                (spec.y_of(pr.a) > spec.y_of(pr.b) ? spec.y_of(pr.a) - spec.y_of(pr.b)
                                                                     : spec.y_of(pr.b) - spec.y_of(pr.a));
        order.push_back({manhattan, lp});
    }
    // longest pairs first: they fix the most length early
    std::stable_sort(order.begin(), order.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    for (auto& [d, lp] : order) p.pairs.push_back(lp);
    return p;
}

Preserver to_preserver(const HananGrid& h, const SegSet& u) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < h.segments.size(); ++i)
        if (u.test(i)) edges.insert(edges.end(), h.segments[i].edges.begin(), h.segments[i].edges.end());
    return make_preserver(std::move(edges));
}

void check_witness(const GridSpec& spec, std::span<const VertexPair> pairs, const Preserver& w) {
    Instance inst;
    inst.graph = build_grid(spec);
    inst.terminals = PairList{{pairs.begin(), pairs.end()}};
    if (auto v = first_violation(inst, w))
        throw Error("grid solver produced a non-preserver at pair " + std::to_string(v->pair.a) + "-" +
                    std::to_string(v->pair.b));
}

} // namespace

SolveResult solve_grid_pdp(const GridSpec& spec, std::span<const VertexPair> pairs, const GridOptions& options) {
    build_grid(spec); // validates dimensions
    SolveResult result;
    Prepared prep = prepare(spec, pairs);
    if (prep.pairs.empty()) return result;
    HananSearch search(prep.hanan, prep.pairs, options);

    // upper bound from greedy unions over rotated pair orders
    std::vector<std::size_t> order(prep.pairs.size());
    std::iota(order.begin(), order.end(), 0);
    auto [ub, ub_set] = search.greedy(order);
    for (std::size_t r = 1; r < order.size(); ++r) {
        std::rotate(order.begin(), order.begin() + 1, order.end());
        auto [c, s] = search.greedy(order);
        if (c < ub) ub = c, ub_set = s;
    }

    // phase 1: optimum value (parallel over first-pair paths when workers > 1)
    std::uint64_t value = ub;
    if (options.workers <= 1) {
        auto out = search.search(ub, false, result.stats);
        if (out.found) value = out.cost;
    } else {
        auto roots = search.first_level();
        std::atomic<std::uint64_t> shared{ub};
        std::atomic<std::size_t> next{0};
        std::mutex mu;
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < options.workers; ++t)
            threads.emplace_back([&] {
                SolveStats local;
                for (std::size_t i; (i = next.fetch_add(1)) < roots.size();) {
                    std::vector<SegSet> one{roots[i]};
                    search.search(kInfCost, false, local, &shared, &one);
                }
                std::lock_guard lock(mu);
                result.stats.nodes += local.nodes;
                result.stats.candidates += local.candidates;
            });
        for (auto& th : threads) th.join();
        value = shared.load();
    }

    // phase 2: first witness of that value in the fixed search order
    SegSet best = ub_set;
    SolveStats phase2;
    auto out = search.search(value + 1, true, phase2);
    if (out.found) best = out.set;
    result.stats.nodes += phase2.nodes;
    result.witness = to_preserver(prep.hanan, best);
    result.size = result.witness.size();
    check_witness(spec, pairs, result.witness);
    return result;
}

SolveResult solve_grid_pdp_sweep(const GridSpec& spec, std::span<const VertexPair> pairs, const GridOptions& options) {
    build_grid(spec);
    SolveResult result;
    Prepared prep = prepare(spec, pairs);
    if (prep.pairs.empty()) return result;
    const auto& segs = prep.hanan.segments;
    if (segs.size() > options.sweep_segment_cap)
        throw SizeCapError("segment sweep: " + std::to_string(segs.size()) + " segments exceed cap " +
                           std::to_string(options.sweep_segment_cap));

    Graph grid = build_grid(spec);
    std::vector<VertexPair> canon(pairs.begin(), pairs.end());
    PreserverChecker checker(grid, canon);

    // incumbent from a greedy union keeps most bands short
    HananSearch search(prep.hanan, prep.pairs, options);
    std::vector<std::size_t> order(prep.pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::atomic<std::uint64_t> incumbent{search.greedy(order).first};

    const std::size_t s = segs.size();
    struct Band {
        std::uint64_t cost = kInfCost;
        std::uint64_t mask = 0;
        std::uint64_t checked = 0;
    };
    std::vector<Band> bands(s + 1);
    auto run_band = [&](std::size_t r) {
        Band& band = bands[r];
        std::vector<std::size_t> idx(r);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<Edge> edges;
        while (true) {
            std::uint64_t cost = 0, mask = 0;
            for (std::size_t i : idx) cost += segs[i].length, mask |= std::uint64_t{1} << i;
            if (cost <= incumbent.load(std::memory_order_relaxed) && cost < band.cost) {
                edges.clear();
                for (std::size_t i : idx) edges.insert(edges.end(), segs[i].edges.begin(), segs[i].edges.end());
                ++band.checked;
                if (checker.check(edges)) {
                    band.cost = cost;
                    band.mask = mask;
                    std::uint64_t cur = incumbent.load();
                    while (cost < cur && !incumbent.compare_exchange_weak(cur, cost)) {}
                }
            }
            // next combination
            std::size_t i = r;
            while (i > 0 && idx[i - 1] == s - r + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
        }
    };
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r; (r = next.fetch_add(1)) <= s;) run_band(r);
    };
    if (options.workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < options.workers; ++t) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    const Band* best = nullptr;
    for (const auto& b : bands) {
        result.stats.candidates += b.checked;
        if (b.cost != kInfCost && (!best || b.cost < best->cost)) best = &b;
    }
    if (!best) throw Error("segment sweep found no preserver");
    SegSet u;
    for (std::size_t i = 0; i < s; ++i)
        if (best->mask >> i & 1) u.set(i);
    result.witness = to_preserver(prep.hanan, u);
    result.size = result.witness.size();
    return result;
}

SolveResult solve_grid_instance(const Instance& inst, const GridOptions& options) {
    if (!inst.grid) throw PreconditionError("grid solver needs a 'grid' header");
    if (!(inst.graph == build_grid(*inst.grid)))
        throw PreconditionError("grid solver is only valid on the full grid, not on grid subgraphs");
    auto pairs = pairs_of(inst.terminals);
    return solve_grid_pdp(*inst.grid, pairs, options);
}

} // namespace dpres
