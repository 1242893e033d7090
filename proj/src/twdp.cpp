#include "dpres/twdp.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace dpres {

namespace {

constexpr std::size_t kMaxDpVertices = 4096;

std::uint64_t low_mask(std::size_t p) { return p >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p) - 1; }

std::uint64_t insert_bit(std::uint64_t row, std::size_t p) {
    std::uint64_t high = p >= 64 ? 0 : row >> p;
    return (row & low_mask(p)) | (p + 1 >= 64 ? 0 : high << (p + 1));
}

std::uint64_t remove_bit(std::uint64_t row, std::size_t p) {
    std::uint64_t high = p + 1 >= 64 ? 0 : row >> (p + 1);
    return (row & low_mask(p)) | (high << p);
}

bool bit(std::uint64_t row, std::size_t j) { return (row >> j) & 1; }

std::string key_of(const Relation& rows) {
    std::string k(rows.size() * sizeof(std::uint64_t), '\0');
    if (!rows.empty()) std::memcpy(k.data(), rows.data(), k.size());
    return k;
}

std::size_t position(const std::vector<Vertex>& scope, Vertex v) {
    return static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), v) - scope.begin());
}

bool additive(Dist a, Dist b, Dist total) {
    return a != kUnreachable && b != kUnreachable && total != kUnreachable &&
           std::uint64_t{a} + b == std::uint64_t{total};
}

} // namespace

Relation edge_closure(const Relation& sigma, std::span<const Vertex> scope, std::size_t iu, std::size_t iv,
                      const ConnectivityDp& dp) {
    Relation out = sigma;
    auto through = [&](std::size_t a, std::size_t b) {
        // p reaches a at true distance, b reaches q at true distance, and p..a-b..q is shortest
        const Vertex va = scope[a], vb = scope[b];
        for (std::uint64_t ps = sigma[a]; ps; ps &= ps - 1) {
            std::size_t p = __builtin_ctzll(ps);
            Dist dpa = dp.distance(scope[p], va);
            for (std::uint64_t qs = sigma[b]; qs; qs &= qs - 1) {
                std::size_t q = __builtin_ctzll(qs);
                Dist dbq = dp.distance(vb, scope[q]);
                Dist dpq = dp.distance(scope[p], scope[q]);
                if (dpa != kUnreachable && dbq != kUnreachable && dpq != kUnreachable &&
                    std::uint64_t{dpa} + 1 + dbq == dpq) {
                    out[p] |= std::uint64_t{1} << q;
                    out[q] |= std::uint64_t{1} << p;
                }
            }
        }
    };
    out[iu] |= std::uint64_t{1} << iv;
    out[iv] |= std::uint64_t{1} << iu;
    through(iu, iv);
    through(iv, iu);
    return out;
}

ConnectivityDp::ConnectivityDp(const Instance& inst, const NiceTreeDecomposition& ntd, const DpOptions& options)
    : inst_(inst), ntd_(ntd), options_(options), n_(inst.graph.n()) {
    validate(ntd, inst.graph);
    if (n_ > kMaxDpVertices)
        throw SizeCapError("tree-decomposition DP keeps all-pairs distances; at most " +
                           std::to_string(kMaxDpVertices) + " vertices");
    dist_.resize(n_ * n_);
    for (Vertex s = 0; s < n_; ++s) {
        auto row = bfs_distances(inst.graph, s);
        std::copy(row.begin(), row.end(), dist_.begin() + static_cast<std::ptrdiff_t>(s * n_));
    }
    for (const auto& p : pairs_of(inst.terminals)) {
        if (distance(p.a, p.b) == kUnreachable) {
            if (!options_.unreachable_preserved)
                throw PreconditionError("pair " + std::to_string(p.a) + "-" + std::to_string(p.b) + " is unreachable");
            continue;
        }
        pairs_.push_back(p);
        terminals_.push_back(p.a);
        terminals_.push_back(p.b);
    }
    std::sort(terminals_.begin(), terminals_.end());
    terminals_.erase(std::unique(terminals_.begin(), terminals_.end()), terminals_.end());
    if (terminals_.size() > 64) throw SizeCapError("tree-decomposition DP supports at most 64 terminals");
    term_index_.assign(n_, -1);
    for (std::size_t i = 0; i < terminals_.size(); ++i) term_index_[terminals_[i]] = static_cast<std::int32_t>(i);
    mates_.assign(terminals_.size(), 0);
    for (const auto& p : pairs_) {
        mates_[term_index_[p.a]] |= std::uint64_t{1} << term_index_[p.b];
        mates_[term_index_[p.b]] |= std::uint64_t{1} << term_index_[p.a];
    }
}

void ConnectivityDp::store(std::size_t t, ConnTable table) {
    auto key = key_of(table.rows);
    auto [it, fresh] = index_[t].try_emplace(std::move(key), static_cast<std::uint32_t>(tables_[t].size()));
    if (fresh) {
        tables_[t].push_back(std::move(table));
        return;
    }
    ConnTable& old = tables_[t][it->second];
    if (table.weight < old.weight) old = std::move(table);
}

void ConnectivityDp::run() {
    if (done_) return;
    const std::size_t count = ntd_.nodes.size();
    scope_.assign(count, {});
    tables_.assign(count, {});
    index_.assign(count, {});
    below_.assign(count, 0);
    for (std::size_t t = 0; t < count; ++t) {
        const NiceNode& nd = ntd_.nodes[t];
        std::uint64_t below = 0;
        for (std::size_t c : nd.children) below |= below_[c];
        for (Vertex v : nd.bag)
            if (term_index_[v] >= 0) below |= std::uint64_t{1} << term_index_[v];
        below_[t] = below;
        std::vector<Vertex> scope = nd.bag;
        for (std::uint64_t b = below; b; b &= b - 1) scope.push_back(terminals_[__builtin_ctzll(b)]);
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
        if (scope.size() > options_.max_scope || scope.size() > 64)
            throw SizeCapError("DP scope of " + std::to_string(scope.size()) + " vertices exceeds cap");
        scope_[t] = std::move(scope);

        switch (nd.kind) {
        case NodeKind::leaf: leaf(t); break;
        case NodeKind::introduce_vertex: introduce_vertex(t); break;
        case NodeKind::introduce_edge: introduce_edge(t); break;
        case NodeKind::forget: forget(t); break;
        case NodeKind::join: join(t); break;
        }
        index_[t].clear();
    }
    done_ = true;
}

void ConnectivityDp::leaf(std::size_t t) { store(t, ConnTable{}); }

void ConnectivityDp::introduce_vertex(std::size_t t) {
    const NiceNode& nd = ntd_.nodes[t];
    const std::size_t c = nd.children[0];
    const std::size_t p = position(scope_[t], nd.vertex);
    if (scope_[t].size() != scope_[c].size() + 1) throw std::logic_error("introduced vertex already in scope");
    for (std::uint32_t i = 0; i < tables_[c].size(); ++i) {
        const ConnTable& in = tables_[c][i];
        ConnTable out;
        out.rows.reserve(in.rows.size() + 1);
        for (std::uint64_t row : in.rows) out.rows.push_back(insert_bit(row, p));
        out.rows.insert(out.rows.begin() + static_cast<std::ptrdiff_t>(p), std::uint64_t{1} << p);
        out.weight = in.weight;
        out.left = i;
        store(t, std::move(out));
    }
}

void ConnectivityDp::introduce_edge(std::size_t t) {
    const NiceNode& nd = ntd_.nodes[t];
    const std::size_t c = nd.children[0];
    const auto& scope = scope_[t];
    const std::size_t iu = position(scope, nd.edge.a), iv = position(scope, nd.edge.b);
    for (std::uint32_t i = 0; i < tables_[c].size(); ++i) {
        const ConnTable& in = tables_[c][i];
        ConnTable skip{in.rows, in.weight, i, 0, false};
        ConnTable take{edge_closure(in.rows, scope, iu, iv, *this), in.weight + 1, i, 0, true};
        store(t, std::move(skip));
        store(t, std::move(take));
    }
}

void ConnectivityDp::forget(std::size_t t) {
    const NiceNode& nd = ntd_.nodes[t];
    const std::size_t c = nd.children[0];
    const Vertex v = nd.vertex;
    const auto& child_scope = scope_[c];
    const std::size_t p = position(child_scope, v);
    const std::int32_t ti = term_index_[v];

    if (ti >= 0) {
        const bool future_mate = (mates_[ti] & ~below_[t]) != 0;
        std::uint64_t bag_bits = 0;
        for (Vertex x : nd.bag) bag_bits |= std::uint64_t{1} << position(child_scope, x);
        for (std::uint32_t i = 0; i < tables_[c].size(); ++i) {
            const ConnTable& in = tables_[c][i];
            // a mate outside the subtree is reached through the bag, so v must already reach it
            if (future_mate && (in.rows[p] & bag_bits) == 0) continue;
            store(t, ConnTable{in.rows, in.weight, i, 0, false});
        }
        return;
    }
    for (std::uint32_t i = 0; i < tables_[c].size(); ++i) {
        const ConnTable& in = tables_[c][i];
        ConnTable out;
        out.rows.reserve(in.rows.size() - 1);
        for (std::size_t r = 0; r < in.rows.size(); ++r)
            if (r != p) out.rows.push_back(remove_bit(in.rows[r], p));
        out.weight = in.weight;
        out.left = i;
        store(t, std::move(out));
    }
}

void ConnectivityDp::join(std::size_t t) {
    const NiceNode& nd = ntd_.nodes[t];
    const std::size_t a = nd.children[0], b = nd.children[1];
    const auto& scope = scope_[t];
    const std::size_t k = scope.size();
    auto mapping = [&](std::size_t child) {
        std::vector<std::size_t> m;
        for (Vertex v : scope_[child]) m.push_back(position(scope, v));
        return m;
    };
    const auto ma = mapping(a), mb = mapping(b);
    auto lift = [](const Relation& rows, const std::vector<std::size_t>& m, Relation& out) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::uint64_t lifted = 0;
            for (std::uint64_t s = rows[r]; s; s &= s - 1) lifted |= std::uint64_t{1} << m[__builtin_ctzll(s)];
            out[m[r]] |= lifted;
        }
    };
    std::vector<std::size_t> bag_pos;
    for (Vertex x : nd.bag) bag_pos.push_back(position(scope, x));
    std::vector<std::pair<std::size_t, std::size_t>> bag_edges;
    for (std::size_t i = 0; i < bag_pos.size(); ++i)
        for (std::size_t j = i + 1; j < bag_pos.size(); ++j)
            if (inst_.graph.has_edge(nd.bag[i], nd.bag[j])) bag_edges.push_back({bag_pos[i], bag_pos[j]});

    Relation ra(k), rb(k);
    for (std::uint32_t i = 0; i < tables_[a].size(); ++i) {
        const ConnTable& ta = tables_[a][i];
        std::fill(ra.begin(), ra.end(), 0);
        lift(ta.rows, ma, ra);
        for (std::uint32_t j = 0; j < tables_[b].size(); ++j) {
            const ConnTable& tb = tables_[b][j];
            std::fill(rb.begin(), rb.end(), 0);
            lift(tb.rows, mb, rb);
            if (options_.join_requires_agreement) {
                bool agree = true;
                for (std::size_t x : bag_pos)
                    for (std::size_t y : bag_pos)
                        if (bit(ra[x], y) != bit(rb[x], y)) agree = false;
                if (!agree) continue;
            }
            // edges realized on both sides would be counted twice
            std::uint64_t overlap = 0;
            for (auto [x, y] : bag_edges)
                if (bit(ra[x], y) && bit(rb[x], y)) ++overlap;
            max_overlap_ = std::max(max_overlap_, overlap);
            if (overlap != 0 && !options_.join_requires_agreement)
                throw std::logic_error("join: an edge is realized in both subtrees");

            Relation rows(k);
            for (std::size_t r = 0; r < k; ++r) rows[r] = ra[r] | rb[r];
            // compose through bag vertices until stable
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t x : bag_pos) {
                    const std::uint64_t rx = rows[x];
                    for (std::uint64_t is = rx; is; is &= is - 1) {
                        std::size_t i2 = __builtin_ctzll(is);
                        Dist dix = distance(scope[i2], scope[x]);
                        for (std::uint64_t js = rx & ~rows[i2]; js; js &= js - 1) {
                            std::size_t j2 = __builtin_ctzll(js);
                            if (additive(dix, distance(scope[x], scope[j2]), distance(scope[i2], scope[j2]))) {
                                rows[i2] |= std::uint64_t{1} << j2;
                                rows[j2] |= std::uint64_t{1} << i2;
                                changed = true;
                            }
                        }
                    }
                }
            }
            store(t, ConnTable{std::move(rows), ta.weight + tb.weight - overlap, i, j, false});
        }
    }
}

std::vector<Edge> ConnectivityDp::reconstruct(std::size_t node, std::size_t table) const {
    std::vector<Edge> edges;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{node, table}};
    while (!stack.empty()) {
        auto [t, i] = stack.back();
        stack.pop_back();
        const NiceNode& nd = ntd_.nodes[t];
        const ConnTable& tab = tables_[t][i];
        if (nd.kind == NodeKind::introduce_edge && tab.took_edge) edges.push_back(nd.edge);
        if (nd.kind == NodeKind::join) {
            stack.push_back({nd.children[0], tab.left});
            stack.push_back({nd.children[1], tab.right});
        } else if (!nd.children.empty()) {
            stack.push_back({nd.children[0], tab.left});
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

SolveResult ConnectivityDp::result() const {
    if (!done_) throw std::logic_error("ConnectivityDp::result before run");
    SolveResult res;
    const std::size_t r = ntd_.root;
    const auto& scope = scope_[r];
    std::size_t best = tables_[r].size();
    for (std::size_t i = 0; i < tables_[r].size(); ++i) {
        const auto& tab = tables_[r][i];
        bool all = true;
        for (const auto& p : pairs_)
            if (!bit(tab.rows[position(scope, p.a)], position(scope, p.b))) {
                all = false;
                break;
            }
        if (all && (best == tables_[r].size() || tab.weight < tables_[r][best].weight)) best = i;
    }
    if (best == tables_[r].size()) throw std::logic_error("DP root has no table connecting all pairs");
    for (const auto& ts : tables_) res.stats.tables += ts.size();
    res.stats.nodes = ntd_.nodes.size();
    res.witness = Preserver{reconstruct(r, best)};
    res.size = res.witness.size();
    if (res.size != tables_[r][best].weight) throw std::logic_error("DP witness size differs from table weight");
    return res;
}

SolveResult dp_solve(const Instance& inst, const NiceTreeDecomposition& ntd, const DpOptions& options) {
    ConnectivityDp dp(inst, ntd, options);
    dp.run();
    return dp.result();
}

SolveResult dp_solve(const Instance& inst, const DpOptions& options) {
    auto ntd = make_nice(decompose(inst.graph), inst.graph);
    return dp_solve(inst, ntd, options);
}

} // namespace dpres
