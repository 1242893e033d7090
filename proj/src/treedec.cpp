#include "dpres/treedec.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "dpres/io.hpp"

namespace dpres {

int TreeDecomposition::width() const {
    int w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
}

int NiceTreeDecomposition::width() const {
    int w = -1;
    for (const auto& n : nodes) w = std::max(w, static_cast<int>(n.bag.size()) - 1);
    return w;
}

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::leaf: return "leaf";
    case NodeKind::introduce_vertex: return "introduce_vertex";
    case NodeKind::introduce_edge: return "introduce_edge";
    case NodeKind::forget: return "forget";
    case NodeKind::join: return "join";
    }
    return "?";
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw PreconditionError("invalid tree decomposition: " + what); }

bool contains(const std::vector<Vertex>& bag, Vertex v) { return std::binary_search(bag.begin(), bag.end(), v); }

} // namespace

void validate(const TreeDecomposition& td, const Graph& g) {
    const std::size_t k = td.bags.size();
    if (k == 0) invalid("no bags");
    if (td.tree_edges.size() != k - 1) invalid("tree must have exactly one edge fewer than bags");
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [a, b] : td.tree_edges) {
        if (a >= k || b >= k) invalid("tree edge endpoint out of range");
        std::size_t ra = find(a), rb = find(b);
        if (ra == rb) invalid("tree contains a cycle");
        parent[ra] = rb;
    }
    std::vector<std::vector<std::size_t>> occurs(g.n());
    for (std::size_t i = 0; i < k; ++i) {
        const auto& bag = td.bags[i];
        if (!std::is_sorted(bag.begin(), bag.end()) || std::adjacent_find(bag.begin(), bag.end()) != bag.end())
            invalid("bag " + std::to_string(i) + " not sorted and unique");
        for (Vertex v : bag) {
            if (v >= g.n()) invalid("bag vertex out of range");
            occurs[v].push_back(i);
        }
    }
    for (Vertex v = 0; v < g.n(); ++v)
        if (occurs[v].empty()) invalid("vertex " + std::to_string(v) + " in no bag");
    for (const Edge& e : g.edges()) {
        const auto& a = occurs[e.a];
        bool covered = std::any_of(a.begin(), a.end(), [&](std::size_t i) { return contains(td.bags[i], e.b); });
        if (!covered) invalid("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " not covered");
    }
    // occurrences of v form a subtree iff the tree edges inside them number one less than the nodes
    std::vector<std::size_t> inner(g.n(), 0);
    for (auto [a, b] : td.tree_edges) {
        const auto& x = td.bags[a];
        const auto& y = td.bags[b];
        std::vector<Vertex> both;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
        for (Vertex v : both) ++inner[v];
    }
    for (Vertex v = 0; v < g.n(); ++v)
        if (inner[v] + 1 != occurs[v].size()) invalid("bags of vertex " + std::to_string(v) + " are not connected");
}

TreeDecomposition from_elimination_order(const Graph& g, const std::vector<Vertex>& order) {
    const std::size_t n = g.n();
    TreeDecomposition td;
    if (n == 0) {
        td.bags.push_back({});
        return td;
    }
    if (order.size() != n) throw PreconditionError("elimination order must list every vertex once");
    std::vector<std::size_t> pos(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (order[i] >= n || pos[order[i]] != n) throw PreconditionError("elimination order must list every vertex once");
        pos[order[i]] = i;
    }
    std::vector<std::set<Vertex>> adj(n);
    for (const Edge& e : g.edges()) {
        adj[e.a].insert(e.b);
        adj[e.b].insert(e.a);
    }
    td.bags.resize(n);
    std::vector<std::size_t> parent(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Vertex v = order[i];
        std::vector<Vertex> later(adj[v].begin(), adj[v].end());
        for (Vertex a : later) {
            adj[a].erase(v);
            for (Vertex b : later)
                if (a != b) adj[a].insert(b);
        }
        adj[v].clear();
        td.bags[i] = later;
        td.bags[i].push_back(v);
        std::sort(td.bags[i].begin(), td.bags[i].end());
        if (!later.empty()) {
            Vertex first = *std::min_element(later.begin(), later.end(), [&](Vertex a, Vertex b) { return pos[a] < pos[b]; });
            parent[i] = pos[first];
        }
    }
    std::size_t last_root = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (parent[i] != n) {
            td.tree_edges.push_back({i, parent[i]});
        } else {
            if (last_root != n) td.tree_edges.push_back({last_root, i});
            last_root = i;
        }
    }
    return td;
}

std::vector<Vertex> min_fill_order(const Graph& g) {
    const std::size_t n = g.n();
    std::vector<std::set<Vertex>> adj(n);
    for (const Edge& e : g.edges()) {
        adj[e.a].insert(e.b);
        adj[e.b].insert(e.a);
    }
    std::vector<char> gone(n, 0);
    std::vector<Vertex> order;
    auto fill = [&](Vertex v) {
        std::size_t missing = 0;
        for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
            for (auto b = std::next(a); b != adj[v].end(); ++b)
                if (!adj[*a].count(*b)) ++missing;
        return missing;
    };
    for (std::size_t step = 0; step < n; ++step) {
        Vertex best = 0;
        std::size_t best_fill = std::numeric_limits<std::size_t>::max(), best_deg = 0;
        for (Vertex v = 0; v < n; ++v) {
            if (gone[v]) continue;
            std::size_t f = fill(v);
            if (f < best_fill || (f == best_fill && adj[v].size() < best_deg)) {
                best = v;
                best_fill = f;
                best_deg = adj[v].size();
            }
            if (best_fill == 0 && best_deg <= 1) break;
        }
        std::vector<Vertex> nb(adj[best].begin(), adj[best].end());
        for (Vertex a : nb) {
            adj[a].erase(best);
            for (Vertex b : nb)
                if (a != b) adj[a].insert(b);
        }
        adj[best].clear();
        gone[best] = 1;
        order.push_back(best);
    }
    return order;
}

std::vector<Vertex> exact_elimination_order(const Graph& g) {
    const std::size_t n = g.n();
    if (n > 20) throw SizeCapError("exact treewidth supports at most 20 vertices");
    if (n == 0) return {};
    std::vector<std::uint32_t> nb(n, 0);
    for (const Edge& e : g.edges()) {
        nb[e.a] |= 1u << e.b;
        nb[e.b] |= 1u << e.a;
    }
    // q(s, v): vertices outside s + v reachable from v through s
    auto q = [&](std::uint32_t s, Vertex v) {
        std::uint32_t seen = 1u << v, frontier = 1u << v, reach = 0;
        while (frontier) {
            std::uint32_t next = 0;
            for (std::uint32_t f = frontier; f; f &= f - 1) next |= nb[__builtin_ctz(f)];
            next &= ~seen;
            seen |= next;
            reach |= next & ~s;
            frontier = next & s;
        }
        return __builtin_popcount(reach);
    };
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    std::vector<int> tw(std::size_t{1} << n, std::numeric_limits<int>::max());
    std::vector<std::int8_t> last(std::size_t{1} << n, -1);
    tw[0] = -1;
    for (std::uint32_t s = 1; s <= full; ++s) {
        for (std::uint32_t b = s; b; b &= b - 1) {
            Vertex v = __builtin_ctz(b);
            std::uint32_t rest = s & ~(1u << v);
            int cand = std::max(tw[rest], q(rest, v));
            if (cand < tw[s]) {
                tw[s] = cand;
                last[s] = static_cast<std::int8_t>(v);
            }
        }
    }
    std::vector<Vertex> order(n);
    std::uint32_t s = full;
    for (std::size_t i = n; i-- > 0;) {
        order[i] = static_cast<Vertex>(last[s]);
        s &= ~(1u << last[s]);
    }
    return order;
}

TreeDecomposition decompose(const Graph& g, const DecomposeOptions& options) {
    auto order = g.n() <= options.exact_limit ? exact_elimination_order(g) : min_fill_order(g);
    return from_elimination_order(g, order);
}

TreeDecomposition parse_tree_decomposition(std::istream& in) {
    LineReader reader(in);
    std::vector<std::string> t;
    TreeDecomposition td;
    bool header = false;
    while (reader.next(t)) {
        const std::size_t ln = reader.line_no();
        if (!header) {
            if (t[0] != "td") throw ParseError("line " + std::to_string(ln) + ": expected 'td' header");
            header = true;
            continue;
        }
        if (t[0] == "b" && t.size() >= 2) {
            std::size_t id = parse_count(t[1], ln);
            if (id >= td.bags.size()) td.bags.resize(id + 1);
            for (std::size_t i = 2; i < t.size(); ++i) td.bags[id].push_back(static_cast<Vertex>(parse_count(t[i], ln)));
            std::sort(td.bags[id].begin(), td.bags[id].end());
            td.bags[id].erase(std::unique(td.bags[id].begin(), td.bags[id].end()), td.bags[id].end());
        } else if (t[0] == "t" && t.size() == 3) {
            td.tree_edges.push_back({parse_count(t[1], ln), parse_count(t[2], ln)});
        } else {
            throw ParseError("line " + std::to_string(ln) + ": unexpected record '" + t[0] + "'");
        }
    }
    if (!header) throw ParseError("missing 'td' header");
    return td;
}

TreeDecomposition read_tree_decomposition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_tree_decomposition(in);
}

void write_tree_decomposition(std::ostream& out, const TreeDecomposition& td) {
    out << "td\n";
    for (std::size_t i = 0; i < td.bags.size(); ++i) {
        out << "b " << i;
        for (Vertex v : td.bags[i]) out << ' ' << v;
        out << '\n';
    }
    for (auto [a, b] : td.tree_edges) out << "t " << a << ' ' << b << '\n';
}

namespace {

struct Builder {
    std::vector<NiceNode> nodes;

    std::size_t add(NiceNode node) {
        nodes.push_back(std::move(node));
        return nodes.size() - 1;
    }

    std::size_t leaf() { return add(NiceNode{NodeKind::leaf, {}, 0, {}, {}}); }

    std::size_t introduce(std::size_t child, Vertex v) {
        auto bag = nodes[child].bag;
        bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
        return add(NiceNode{NodeKind::introduce_vertex, std::move(bag), v, {}, {child}});
    }

    std::size_t forget(std::size_t child, Vertex v) {
        auto bag = nodes[child].bag;
        bag.erase(std::find(bag.begin(), bag.end(), v));
        return add(NiceNode{NodeKind::forget, std::move(bag), v, {}, {child}});
    }

    std::size_t join(std::size_t a, std::size_t b) {
        return add(NiceNode{NodeKind::join, nodes[a].bag, 0, {}, {a, b}});
    }

    // forget what the target lacks, then introduce what it adds
    std::size_t morph(std::size_t child, const std::vector<Vertex>& target) {
        std::vector<Vertex> drop, gain;
        const auto& bag = nodes[child].bag;
        std::set_difference(bag.begin(), bag.end(), target.begin(), target.end(), std::back_inserter(drop));
        std::set_difference(target.begin(), target.end(), bag.begin(), bag.end(), std::back_inserter(gain));
        std::size_t cur = child;
        for (Vertex v : drop) cur = forget(cur, v);
        for (Vertex v : gain) cur = introduce(cur, v);
        return cur;
    }
};

} // namespace

NiceTreeDecomposition make_nice(const TreeDecomposition& td, const Graph& g) {
    validate(td, g);
    const std::size_t k = td.bags.size();
    std::vector<std::vector<std::size_t>> tree(k);
    for (auto [a, b] : td.tree_edges) {
        tree[a].push_back(b);
        tree[b].push_back(a);
    }
    // post-order of the decomposition rooted at bag 0
    std::vector<std::size_t> order, parent(k, k), stack{0};
    std::vector<char> seen(k, 0);
    seen[0] = 1;
    while (!stack.empty()) {
        std::size_t t = stack.back();
        stack.pop_back();
        order.push_back(t);
        for (std::size_t c : tree[t])
            if (!seen[c]) {
                seen[c] = 1;
                parent[c] = t;
                stack.push_back(c);
            }
    }
    std::reverse(order.begin(), order.end());

    Builder b;
    std::vector<std::size_t> top(k);
    std::vector<std::vector<std::size_t>> kids(k);
    for (std::size_t t : order) {
        if (parent[t] != k) kids[parent[t]].push_back(t);
    }
    for (std::size_t t : order) {
        auto& ch = kids[t];
        std::sort(ch.begin(), ch.end());
        std::size_t cur;
        if (ch.empty()) {
            cur = b.morph(b.leaf(), td.bags[t]);
        } else {
            cur = b.morph(top[ch[0]], td.bags[t]);
            for (std::size_t i = 1; i < ch.size(); ++i) cur = b.join(cur, b.morph(top[ch[i]], td.bags[t]));
        }
        top[t] = cur;
    }
    std::size_t root = b.morph(top[0], {});

    // place each edge just below the Forget of whichever endpoint is forgotten deeper
    std::vector<std::size_t> depth(b.nodes.size(), 0), forget_at(g.n(), b.nodes.size());
    for (std::size_t i = b.nodes.size(); i-- > 0;)
        for (std::size_t c : b.nodes[i].children) depth[c] = depth[i] + 1;
    for (std::size_t i = 0; i < b.nodes.size(); ++i)
        if (b.nodes[i].kind == NodeKind::forget) forget_at[b.nodes[i].vertex] = i;
    std::vector<std::vector<Edge>> below(b.nodes.size());
    for (const Edge& e : g.edges()) {
        std::size_t fu = forget_at[e.a], fv = forget_at[e.b];
        below[depth[fu] >= depth[fv] ? fu : fv].push_back(e);
    }
    for (std::size_t f = 0; f < below.size(); ++f) {
        if (below[f].empty()) continue;
        std::size_t cur = b.nodes[f].children[0];
        for (const Edge& e : below[f])
            cur = b.add(NiceNode{NodeKind::introduce_edge, b.nodes[cur].bag, 0, e, {cur}});
        b.nodes[f].children[0] = cur;
    }

    // renumber so that children precede parents
    NiceTreeDecomposition ntd;
    std::vector<std::size_t> post, id(b.nodes.size());
    std::vector<std::pair<std::size_t, bool>> st{{root, false}};
    while (!st.empty()) {
        auto [x, expanded] = st.back();
        st.pop_back();
        if (expanded) {
            post.push_back(x);
            continue;
        }
        st.push_back({x, true});
        const auto& ch = b.nodes[x].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) st.push_back({*it, false});
    }
    for (std::size_t i = 0; i < post.size(); ++i) id[post[i]] = i;
    for (std::size_t x : post) {
        NiceNode node = b.nodes[x];
        for (auto& c : node.children) c = id[c];
        ntd.nodes.push_back(std::move(node));
    }
    ntd.root = ntd.nodes.size() - 1;
    return ntd;
}

void validate(const NiceTreeDecomposition& ntd, const Graph& g) {
    auto bad = [](const std::string& what) { throw PreconditionError("invalid nice tree decomposition: " + what); };
    if (ntd.nodes.empty() || ntd.root != ntd.nodes.size() - 1) bad("root must be the last node");
    if (!ntd.nodes[ntd.root].bag.empty()) bad("root bag must be empty");
    std::vector<std::size_t> edge_count(g.m(), 0), forget_count(g.n(), 0), parents(ntd.nodes.size(), 0);
    for (std::size_t i = 0; i < ntd.nodes.size(); ++i) {
        const auto& nd = ntd.nodes[i];
        for (std::size_t c : nd.children) {
            if (c >= i) bad("child after parent");
            ++parents[c];
        }
        auto child_bag = [&](std::size_t j) -> const std::vector<Vertex>& { return ntd.nodes[nd.children[j]].bag; };
        switch (nd.kind) {
        case NodeKind::leaf:
            if (!nd.children.empty() || !nd.bag.empty()) bad("leaf must be childless with empty bag");
            break;
        case NodeKind::introduce_vertex: {
            if (nd.children.size() != 1) bad("introduce node needs one child");
            auto bag = child_bag(0);
            if (contains(bag, nd.vertex)) bad("introduced vertex already present");
            bag.insert(std::upper_bound(bag.begin(), bag.end(), nd.vertex), nd.vertex);
            if (bag != nd.bag) bad("introduce bag mismatch");
            break;
        }
        case NodeKind::forget: {
            if (nd.children.size() != 1) bad("forget node needs one child");
            auto bag = child_bag(0);
            if (!contains(bag, nd.vertex)) bad("forgotten vertex absent");
            bag.erase(std::find(bag.begin(), bag.end(), nd.vertex));
            if (bag != nd.bag) bad("forget bag mismatch");
            ++forget_count[nd.vertex];
            break;
        }
        case NodeKind::introduce_edge: {
            if (nd.children.size() != 1 || child_bag(0) != nd.bag) bad("introduce-edge bag mismatch");
            if (!contains(nd.bag, nd.edge.a) || !contains(nd.bag, nd.edge.b)) bad("edge endpoints not in bag");
            auto id = g.edge_id(nd.edge);
            if (!id) bad("introduced edge not in graph");
            ++edge_count[*id];
            break;
        }
        case NodeKind::join:
            if (nd.children.size() != 2 || child_bag(0) != nd.bag || child_bag(1) != nd.bag) bad("join bag mismatch");
            break;
        }
    }
    for (std::size_t i = 0; i + 1 < ntd.nodes.size(); ++i)
        if (parents[i] != 1) bad("node without exactly one parent");
    for (auto c : edge_count)
        if (c != 1) bad("edge not introduced exactly once");
    for (auto c : forget_count)
        if (c != 1) bad("vertex not forgotten exactly once");
}

} // namespace dpres
