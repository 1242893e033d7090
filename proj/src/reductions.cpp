#include "dpres/reductions.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "dpres/io.hpp"

namespace dpres {

namespace {

class SourceReader {
public:
    SourceReader(std::string_view text, const char* kind) : in_(std::string(text)), reader_(in_) {
        if (!reader_.next(t) || t.size() != 1 || t[0] != kind)
            throw ParseError(std::string("expected '") + kind + "' header line");
    }

    bool next() { return reader_.next(t); }
    std::size_t line() const { return reader_.line_no(); }
    std::size_t count(std::size_t i) const { return parse_count(t[i], line()); }
    Vertex vertex(std::size_t i) const { return static_cast<Vertex>(count(i)); }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(line()) + ": " + msg);
    }
    void need(std::size_t n) const {
        if (t.size() != n) fail("wrong token count for '" + t[0] + "'");
    }
    std::vector<Vertex> vertices_from(std::size_t first) const {
        std::vector<Vertex> out;
        for (std::size_t i = first; i < t.size(); ++i) out.push_back(vertex(i));
        return out;
    }

    std::vector<std::string> t;

private:
    std::istringstream in_;
    LineReader reader_;
};

struct GraphRecords {
    std::optional<std::size_t> n;
    std::vector<Edge> edges;

    bool take(const SourceReader& r) {
        if (r.t[0] == "g") {
            r.need(2);
            if (n) r.fail("duplicate 'g' line");
            n = r.count(1);
            return true;
        }
        if (r.t[0] == "e") {
            r.need(3);
            edges.push_back(Edge{r.vertex(1), r.vertex(2)});
            return true;
        }
        return false;
    }

    Graph build() const {
        if (!n) throw ParseError("missing 'g <n>' line");
        return Graph(*n, edges);
    }
};

template <class F>
auto checked(F&& f) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        throw ParseError(e.what());
    }
}

void write_graph(std::ostream& out, const Graph& g) {
    out << "g " << g.n() << '\n';
    for (const Edge& e : g.edges()) out << "e " << e.a << ' ' << e.b << '\n';
}

void write_list(std::ostream& out, const char* kw, const std::vector<Vertex>& vs) {
    out << kw;
    for (Vertex v : vs) out << ' ' << v;
    out << '\n';
}

// Each vertex in exactly one of the given classes.
void check_partition(std::size_t n, const std::vector<const std::vector<Vertex>*>& classes) {
    std::vector<int> seen(n, 0);
    for (const auto* c : classes)
        for (Vertex v : *c) {
            if (v >= n) throw PreconditionError("class vertex " + std::to_string(v) + " out of range");
            if (seen[v]++) throw PreconditionError("vertex " + std::to_string(v) + " in two classes");
        }
    for (std::size_t v = 0; v < n; ++v)
        if (!seen[v]) throw PreconditionError("vertex " + std::to_string(v) + " in no class");
}

bool connected(const Graph& g) {
    if (g.n() == 0) return true;
    auto d = bfs_distances(g, 0);
    return std::none_of(d.begin(), d.end(), [](Dist x) { return x == kUnreachable; });
}

std::vector<std::string> provenance(const char* kind, const std::string& source_text) {
    return {std::string("generated from ") + kind + " source " + digest_hex(source_text)};
}

// Stores k' in the instance unless it exceeds the edge count, where every
// subgraph is within budget and the instance format has no room for it.
void attach_budget(Reduction& red) {
    if (red.budget <= red.instance.graph.m()) {
        red.instance.budget = red.budget;
    } else {
        red.instance.budget.reset();
        red.instance.comments.push_back("budget " + std::to_string(red.budget) + " exceeds the edge count");
    }
}

} // namespace

std::string source_kind(std::string_view text) {
    std::istringstream in{std::string(text)};
    LineReader reader(in);
    std::vector<std::string> t;
    if (!reader.next(t) || t.size() != 1) return {};
    for (const char* kind : {"mcc", "bmcc", "mwc3", "alc", "rsa"})
        if (t[0] == kind) return t[0];
    return {};
}

// ---- validation ----

void validate(const MccInstance& src) {
    if (src.classes.empty()) throw PreconditionError("mcc: no color classes");
    std::vector<const std::vector<Vertex>*> cs;
    for (const auto& c : src.classes) cs.push_back(&c);
    check_partition(src.graph.n(), cs);
    std::vector<std::size_t> cls(src.graph.n());
    for (std::size_t i = 0; i < src.classes.size(); ++i)
        for (Vertex v : src.classes[i]) cls[v] = i;
    for (const Edge& e : src.graph.edges())
        if (cls[e.a] == cls[e.b])
            throw PreconditionError("mcc: class " + std::to_string(cls[e.a]) + " is not independent");
}

void validate(const BmccInstance& src) {
    if (src.left.empty() || src.left.size() != src.right.size())
        throw PreconditionError("bmcc: need k >= 1 left and k right classes");
    std::vector<const std::vector<Vertex>*> cs;
    for (const auto& c : src.left) cs.push_back(&c);
    for (const auto& c : src.right) cs.push_back(&c);
    check_partition(src.graph.n(), cs);
    std::vector<char> is_left(src.graph.n(), 0);
    for (const auto& c : src.left)
        for (Vertex v : c) is_left[v] = 1;
    for (const Edge& e : src.graph.edges())
        if (is_left[e.a] == is_left[e.b]) throw PreconditionError("bmcc: edge inside one side");
}

void validate(const Mwc3Instance& src) {
    const auto& s = src.terminals;
    if (src.graph.n() < 3) throw PreconditionError("mwc3: fewer than 3 vertices");
    for (Vertex v : s)
        if (v >= src.graph.n()) throw PreconditionError("mwc3: terminal out of range");
    if (s[0] == s[1] || s[0] == s[2] || s[1] == s[2]) throw PreconditionError("mwc3: terminals not distinct");
    if (!connected(src.graph)) throw PreconditionError("mwc3: graph is disconnected");
}

void validate(const AlcInstance& src) {
    if (src.lists.size() != src.graph.n()) throw PreconditionError("alc: one list per vertex required");
    for (std::size_t v = 0; v < src.lists.size(); ++v)
        if (src.lists[v] == 0 || src.lists[v] > 7)
            throw PreconditionError("alc: list of vertex " + std::to_string(v) + " empty or outside {1,2,3}");
}

void validate(const RsaInstance& src) {
    auto pts = src.points;
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) throw PreconditionError("rsa: duplicate point");
    for (const auto& p : pts)
        if (p.x == 0 && p.y == 0) throw PreconditionError("rsa: point at the origin");
}

// ---- parsing and writing ----

MccInstance parse_mcc(std::string_view text) {
    SourceReader r(text, "mcc");
    GraphRecords gr;
    MccInstance src;
    while (r.next()) {
        if (gr.take(r)) continue;
        if (r.t[0] != "class") r.fail("unknown record '" + r.t[0] + "'");
        src.classes.push_back(r.vertices_from(1));
    }
    src.graph = gr.build();
    checked([&] { validate(src); return 0; });
    return src;
}

BmccInstance parse_bmcc(std::string_view text) {
    SourceReader r(text, "bmcc");
    GraphRecords gr;
    BmccInstance src;
    while (r.next()) {
        if (gr.take(r)) continue;
        if (r.t[0] == "L") src.left.push_back(r.vertices_from(1));
        else if (r.t[0] == "R") src.right.push_back(r.vertices_from(1));
        else r.fail("unknown record '" + r.t[0] + "'");
    }
    src.graph = gr.build();
    checked([&] { validate(src); return 0; });
    return src;
}

Mwc3Instance parse_mwc3(std::string_view text) {
    SourceReader r(text, "mwc3");
    GraphRecords gr;
    Mwc3Instance src;
    bool have_terminals = false;
    while (r.next()) {
        if (gr.take(r)) continue;
        if (r.t[0] == "terminals") {
            r.need(4);
            for (int i = 0; i < 3; ++i) src.terminals[i] = r.vertex(i + 1);
            have_terminals = true;
        } else if (r.t[0] == "k") {
            r.need(2);
            src.k = r.count(1);
        } else {
            r.fail("unknown record '" + r.t[0] + "'");
        }
    }
    if (!have_terminals) throw ParseError("mwc3: missing 'terminals' line");
    src.graph = gr.build();
    checked([&] { validate(src); return 0; });
    return src;
}

AlcInstance parse_alc(std::string_view text) {
    SourceReader r(text, "alc");
    GraphRecords gr;
    AlcInstance src;
    std::map<Vertex, std::uint8_t> lists;
    while (r.next()) {
        if (gr.take(r)) continue;
        if (r.t[0] == "list") {
            if (r.t.size() < 3) r.fail("list needs a vertex and at least one color");
            std::uint8_t mask = 0;
            for (std::size_t i = 2; i < r.t.size(); ++i) {
                std::size_t c = r.count(i);
                if (c < 1 || c > 3) r.fail("color must be 1, 2 or 3");
                mask |= static_cast<std::uint8_t>(1u << (c - 1));
            }
            if (!lists.emplace(r.vertex(1), mask).second) r.fail("duplicate list");
        } else if (r.t[0] == "k") {
            r.need(2);
            src.k = r.count(1);
        } else {
            r.fail("unknown record '" + r.t[0] + "'");
        }
    }
    src.graph = gr.build();
    src.lists.assign(src.graph.n(), 0);
    for (auto [v, mask] : lists) {
        if (v >= src.graph.n()) throw ParseError("alc: list for vertex out of range");
        src.lists[v] = mask;
    }
    checked([&] { validate(src); return 0; });
    return src;
}

RsaInstance parse_rsa(std::string_view text) {
    SourceReader r(text, "rsa");
    RsaInstance src;
    while (r.next()) {
        if (r.t[0] == "p") {
            r.need(3);
            src.points.push_back(Point{r.count(1), r.count(2)});
        } else if (r.t[0] == "k") {
            r.need(2);
            src.k = r.count(1);
        } else {
            r.fail("unknown record '" + r.t[0] + "'");
        }
    }
    checked([&] { validate(src); return 0; });
    return src;
}

std::string mcc_text(const MccInstance& src) {
    std::ostringstream out;
    out << "mcc\n";
    write_graph(out, src.graph);
    for (const auto& c : src.classes) write_list(out, "class", c);
    return out.str();
}

std::string bmcc_text(const BmccInstance& src) {
    std::ostringstream out;
    out << "bmcc\n";
    write_graph(out, src.graph);
    for (const auto& c : src.left) write_list(out, "L", c);
    for (const auto& c : src.right) write_list(out, "R", c);
    return out.str();
}

std::string mwc3_text(const Mwc3Instance& src) {
    std::ostringstream out;
    out << "mwc3\n";
    write_graph(out, src.graph);
    out << "terminals " << src.terminals[0] << ' ' << src.terminals[1] << ' ' << src.terminals[2] << '\n';
    out << "k " << src.k << '\n';
    return out.str();
}

std::string alc_text(const AlcInstance& src) {
    std::ostringstream out;
    out << "alc\n";
    write_graph(out, src.graph);
    for (std::size_t v = 0; v < src.lists.size(); ++v) {
        out << "list " << v;
        for (int c = 0; c < 3; ++c)
            if (src.lists[v] >> c & 1) out << ' ' << c + 1;
        out << '\n';
    }
    out << "k " << src.k << '\n';
    return out.str();
}

std::string rsa_text(const RsaInstance& src) {
    std::ostringstream out;
    out << "rsa\n";
    for (const auto& p : src.points) out << "p " << p.x << ' ' << p.y << '\n';
    out << "k " << src.k << '\n';
    return out.str();
}

// ---- reductions ----

Reduction mcc_to_sdp(const MccInstance& src, const MccOptions& options) {
    validate(src);
    const std::size_t n = src.graph.n(), k = src.classes.size();
    const std::size_t budget = k + k * (k - 1) / 2;
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < k; ++i)
        for (Vertex v : src.classes[i]) cls[v] = i;

    Reduction red;
    red.budget = budget;
    red.instance.comments = provenance("mcc", mcc_text(src));
    red.instance.comments.push_back("k=" + std::to_string(k) + " budget=" + std::to_string(budget));

    bool missing = std::any_of(src.classes.begin(), src.classes.end(), [](const auto& c) { return c.empty(); });
    std::vector<char> linked(k * k, 0);
    for (const Edge& e : src.graph.edges()) linked[cls[e.a] * k + cls[e.b]] = linked[cls[e.b] * k + cls[e.a]] = 1;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (!linked[i * k + j]) missing = true;

    if (missing && options.trivial_no_on_missing_class_edge) {
        // two terminals joined by a single path one edge longer than the budget
        std::vector<Edge> edges;
        for (Vertex v = 0; v <= budget; ++v) edges.push_back(Edge{v, v + 1});
        red.instance.graph = Graph(budget + 2, edges);
        red.instance.terminals = TerminalSet{{0, static_cast<Vertex>(budget + 1)}};
        attach_budget(red);
        red.instance.comments.push_back("no edge between two color classes: fixed No-instance");
        red.certified_no = true;
        return red;
    }

    // copies keep their ids; terminal t_i is vertex n + i
    std::vector<Edge> edges(src.graph.edges());
    TerminalSet s;
    for (std::size_t i = 0; i < k; ++i) {
        const Vertex t = static_cast<Vertex>(n + i);
        s.vertices.push_back(t);
        for (Vertex v : src.classes[i]) edges.push_back(VertexPair::of(t, v));
    }
    red.instance.graph = Graph(n + k, edges);
    red.instance.terminals = std::move(s);
    attach_budget(red);
    red.certified_no = missing;
    return red;
}

Reduction rsa_to_pdp(const RsaInstance& src) {
    validate(src);
    GridSpec spec{1, 1};
    for (const auto& p : src.points) {
        spec.width = std::max(spec.width, p.x + 1);
        spec.height = std::max(spec.height, p.y + 1);
    }
    Reduction red;
    red.budget = src.k;
    red.instance.grid = spec;
    red.instance.graph = build_grid(spec);
    PairList pairs;
    for (const auto& p : src.points) pairs.pairs.push_back(VertexPair::of(spec.id(0, 0), spec.id(p.x, p.y)));
    red.instance.terminals = std::move(pairs);
    red.instance.comments = provenance("rsa", rsa_text(src));
    attach_budget(red);
    return red;
}

AlcReduction mwc3_to_alc(const Mwc3Instance& src) {
    validate(src);
    const Graph& g = src.graph;
    const std::size_t n = g.n(), m = g.m();
    AlcReduction red;
    red.budget = (n + 1) * m + src.k;
    std::vector<Edge> edges;
    auto clique = [m](Vertex v, std::size_t j) { return static_cast<Vertex>(v * m + j); };
    for (Vertex v = 0; v < n; ++v)
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) edges.push_back(Edge{clique(v, a), clique(v, b)});
    for (std::size_t i = 0; i < m; ++i) {
        const Vertex w = static_cast<Vertex>(n * m + i);
        const Edge& e = g.edges()[i];
        for (std::size_t j = 0; j < m; ++j) {
            edges.push_back(VertexPair::of(w, clique(e.a, j)));
            edges.push_back(VertexPair::of(w, clique(e.b, j)));
        }
    }
    red.instance.graph = Graph((n + 1) * m, edges);
    red.instance.lists.assign((n + 1) * m, 7);
    for (int i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < m; ++j)
            red.instance.lists[clique(src.terminals[i], j)] = static_cast<std::uint8_t>(1u << i);
    red.instance.k = red.budget;
    return red;
}

Reduction alc_to_vc3bipdp(const AlcInstance& src) {
    validate(src);
    const Graph& g = src.graph;
    Reduction red;
    red.budget = src.k;
    std::vector<Edge> edges;
    for (Vertex v = 0; v < g.n(); ++v)
        for (Vertex c = 0; c < 3; ++c)
            if (src.lists[v] >> c & 1) edges.push_back(Edge{c, v + 3});
    PairList pairs;
    for (const Edge& e : g.edges()) {
        pairs.pairs.push_back(Edge{e.a + 3, e.b + 3});
        if ((src.lists[e.a] & src.lists[e.b]) == 0) red.certified_no = true;
    }
    red.instance.graph = Graph(g.n() + 3, edges);
    red.instance.terminals = std::move(pairs);
    red.instance.comments = provenance("alc", alc_text(src));
    red.instance.comments.push_back("colors are vertices 0 1 2; source vertex v is v+3");
    attach_budget(red);
    if (red.certified_no) red.instance.comments.push_back("an edge has disjoint lists: No-instance");
    return red;
}

// ---- bipartite multicolored clique core ----

namespace {

struct PathBuilder {
    std::size_t n = 0;
    std::vector<Edge> edges;

    Vertex add() { return static_cast<Vertex>(n++); }
    void link(Vertex a, Vertex b) { edges.push_back(VertexPair::of(a, b)); }
    // Appends `count` fresh vertices to seq, each linked to its predecessor.
    void extend(std::vector<Vertex>& seq, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) step(seq, add());
    }
    void step(std::vector<Vertex>& seq, Vertex v) {
        link(seq.back(), v);
        seq.push_back(v);
    }
    // Path of `len` edges between existing vertices; returns all vertices a..b.
    std::vector<Vertex> path(Vertex a, Vertex b, std::size_t len) {
        std::vector<Vertex> seq{a};
        extend(seq, len - 1);
        step(seq, b);
        return seq;
    }
};

std::size_t padded_size(const BmccInstance& src) {
    std::size_t p = 1;
    for (const auto& c : src.left) p = std::max(p, c.size());
    for (const auto& c : src.right) p = std::max(p, c.size());
    return p;
}

} // namespace

GadgetParams default_gadget_params(const BmccInstance& src) {
    const std::size_t k = src.left.size(), p = padded_size(src);
    const std::size_t n = 2 * k * p;
    return GadgetParams{8, 6 * (n + k) + 8, 12 * (n + k) + 16};
}

BmccCore bmcc_to_sdp_core(const BmccInstance& src) { return bmcc_to_sdp_core(src, default_gadget_params(src)); }

BmccCore bmcc_to_sdp_core(const BmccInstance& src, const GadgetParams& params) {
    validate(src);
    const std::size_t k = src.left.size(), p = padded_size(src), slots = k * p;
    const std::size_t alpha = params.alpha, ell = params.ell, delta = params.delta;
    if (!(alpha > 5 && ell > alpha && delta > ell))
        throw PreconditionError("gadget parameters must satisfy 5 < alpha < ell < delta");
    const std::size_t column_len = 2 * slots + (slots + 1) * alpha;
    const std::size_t row_len = 5 * slots + 2 * alpha;
    if (ell < std::max(column_len, row_len))
        throw PreconditionError("ell=" + std::to_string(ell) + " shorter than the gadget paths need (" +
                                std::to_string(std::max(column_len, row_len)) + ")");

    // slot s of side X is class s / p, member s % p (absent members are padding dummies)
    auto member = [p](const std::vector<std::vector<Vertex>>& side, std::size_t s) -> std::optional<Vertex> {
        const auto& c = side[s / p];
        if (s % p < c.size()) return c[s % p];
        return std::nullopt;
    };

    BmccCore core;
    core.params = params;
    core.p = p;
    PathBuilder b;
    for (auto& c : core.connectors) c = b.add();
    for (std::size_t i = 0; i < k; ++i) {
        core.l_top.push_back(b.add());
        core.l_bot.push_back(b.add());
        core.r_left.push_back(b.add());
        core.r_right.push_back(b.add());
        b.link(core.connectors[0], core.l_top[i]);
        b.link(core.connectors[2], core.l_bot[i]);
        b.link(core.connectors[1], core.r_left[i]);
        b.link(core.connectors[3], core.r_right[i]);
    }
    for (int c = 0; c < 4; ++c) b.path(core.connectors[c], core.connectors[(c + 1) % 4], 2 * delta);

    // columns: z[col][row] = {z1, z2, z3}, z1 lowest
    std::vector<std::vector<std::array<Vertex, 3>>> z(slots, std::vector<std::array<Vertex, 3>>(slots));
    for (std::size_t col = 0; col < slots; ++col) {
        std::vector<Vertex> seq{b.add()}; // w_top
        for (std::size_t row = 0; row < slots; ++row) {
            b.extend(seq, alpha - 1);
            for (int j = 2; j >= 0; --j) {
                z[col][row][j] = b.add();
                b.step(seq, z[col][row][j]);
            }
        }
        b.extend(seq, alpha + (ell - column_len));
        const std::size_t cls = col / p;
        auto top = b.path(core.l_top[cls], seq.front(), delta);
        auto bot = b.path(seq.back(), core.l_bot[cls], delta);
        std::vector<Vertex> full(top.begin(), top.end() - 1);
        full.insert(full.end(), seq.begin(), seq.end());
        full.insert(full.end(), bot.begin() + 1, bot.end());
        core.column_paths.push_back(std::move(full));
    }

    // rows advance five edges per column: shared z1-z2-z3 for an edge, only z2 otherwise
    for (std::size_t row = 0; row < slots; ++row) {
        std::vector<Vertex> seq{b.add()}; // w_left
        b.extend(seq, alpha);
        const auto u = member(src.right, row);
        for (std::size_t col = 0; col < slots; ++col) {
            const auto v = member(src.left, col);
            const auto& t = z[col][row];
            if (u && v && src.graph.has_edge(*u, *v)) {
                b.step(seq, t[0]);
                b.step(seq, t[1]);
                b.step(seq, t[2]);
                b.extend(seq, 2);
            } else {
                b.extend(seq, 1);
                b.step(seq, t[1]);
                b.extend(seq, 3);
            }
        }
        b.extend(seq, alpha + (ell - row_len));
        const std::size_t cls = row / p;
        auto left = b.path(core.r_left[cls], seq.front(), delta);
        auto right = b.path(seq.back(), core.r_right[cls], delta);
        std::vector<Vertex> full(left.begin(), left.end() - 1);
        full.insert(full.end(), seq.begin(), seq.end());
        full.insert(full.end(), right.begin() + 1, right.end());
        core.row_paths.push_back(std::move(full));
    }

    Reduction& red = core.reduction;
    red.budget = 8 * delta + 4 * k + 4 * k * delta + 2 * k * ell - 2 * k * k;
    red.instance.graph = Graph(b.n, b.edges);
    TerminalSet s;
    for (std::size_t i = 0; i < k; ++i)
        for (Vertex t : {core.l_top[i], core.l_bot[i], core.r_left[i], core.r_right[i]}) s.vertices.push_back(t);
    red.instance.terminals = std::move(s);
    red.instance.comments = provenance("bmcc", bmcc_text(src));
    red.instance.comments.push_back("alpha=" + std::to_string(alpha) + " ell=" + std::to_string(ell) +
                                    " delta=" + std::to_string(delta) + " p=" + std::to_string(p));
    attach_budget(red);
    return core;
}

// ---- source oracles ----

bool mcc_brute(const MccInstance& src) {
    validate(src);
    double combos = 1;
    for (const auto& c : src.classes) combos *= static_cast<double>(c.size());
    if (combos > 5e7) throw SizeCapError("mcc_brute: too many combinations");
    const std::size_t k = src.classes.size();
    std::vector<Vertex> pick(k);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        if (i == k) return true;
        for (Vertex v : src.classes[i]) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = src.graph.has_edge(pick[j], v);
            if (!ok) continue;
            pick[i] = v;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

bool bmcc_brute(const BmccInstance& src) {
    validate(src);
    std::vector<std::vector<Vertex>> classes = src.left;
    classes.insert(classes.end(), src.right.begin(), src.right.end());
    double combos = 1;
    for (const auto& c : classes) combos *= static_cast<double>(c.size());
    if (combos > 5e7) throw SizeCapError("bmcc_brute: too many combinations");
    const std::size_t k = src.left.size();
    std::vector<Vertex> pick(2 * k);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        if (i == 2 * k) return true;
        for (Vertex v : classes[i]) {
            bool ok = true;
            if (i >= k)
                for (std::size_t j = 0; j < k && ok; ++j) ok = src.graph.has_edge(pick[j], v);
            if (!ok) continue;
            pick[i] = v;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

std::size_t mwc3_brute(const Mwc3Instance& src) {
    validate(src);
    const Graph& g = src.graph;
    const std::size_t m = g.m();
    if (m > 26) throw SizeCapError("mwc3_brute: more than 26 edges");
    auto separated = [&](std::uint32_t cut) {
        std::vector<Vertex> parent(g.n());
        std::iota(parent.begin(), parent.end(), Vertex{0});
        std::function<Vertex(Vertex)> find = [&](Vertex x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        for (std::size_t i = 0; i < m; ++i)
            if (!(cut >> i & 1)) parent[find(g.edges()[i].a)] = find(g.edges()[i].b);
        Vertex a = find(src.terminals[0]), b = find(src.terminals[1]), c = find(src.terminals[2]);
        return a != b && a != c && b != c;
    };
    for (std::size_t size = 0; size <= m; ++size) {
        if (size == 0) {
            if (separated(0)) return 0;
            continue;
        }
        // Gosper's hack over m-bit masks of this popcount
        std::uint64_t mask = (std::uint64_t{1} << size) - 1;
        while (mask < (std::uint64_t{1} << m)) {
            if (separated(static_cast<std::uint32_t>(mask))) return size;
            std::uint64_t c = mask & -mask, r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    return m;
}

std::optional<std::size_t> alc_brute(const AlcInstance& src) {
    validate(src);
    const Graph& g = src.graph;
    if (g.n() > 20) throw SizeCapError("alc_brute: more than 20 vertices");
    const std::size_t n = g.n();
    std::vector<std::uint8_t> pick(n, 0);
    std::size_t best = 3 * n + 1;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t cost) {
        if (cost + (n - v) >= best) return;
        if (v == n) {
            best = cost;
            return;
        }
        const std::uint8_t list = src.lists[v];
        for (std::uint8_t x = 1; x < 8; ++x) {
            if ((x & list) != x) continue;
            bool ok = true;
            for (Vertex u : g.neighbors(static_cast<Vertex>(v)))
                if (u < v && !(pick[u] & x)) ok = false;
            if (!ok) continue;
            pick[v] = x;
            rec(v + 1, cost + static_cast<std::size_t>(std::popcount(x)));
        }
        pick[v] = 0;
    };
    rec(0, 0);
    if (best > 3 * n) return std::nullopt;
    return best;
}

std::size_t rsa_brute(const RsaInstance& src) {
    validate(src);
    const std::size_t q = src.points.size();
    if (q > 10) throw SizeCapError("rsa_brute: more than 10 points");
    std::size_t w = 1, h = 1;
    for (const auto& p : src.points) {
        w = std::max(w, p.x + 1);
        h = std::max(h, p.y + 1);
    }
    if (w * h > 4096) throw SizeCapError("rsa_brute: bounding box too large");
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> memo(w * h << q, kUnset);

    // cost(r, mask): shortest monotone arborescence from r reaching the points in mask,
    // all of which dominate r. Either r branches (mask splits), or a single monotone
    // path leads to the next branching point or terminal s.
    std::function<std::size_t(std::size_t, std::size_t, std::uint32_t)> cost = [&](std::size_t rx, std::size_t ry,
                                                                                   std::uint32_t mask) {
        for (std::size_t i = 0; i < q; ++i)
            if ((mask >> i & 1) && src.points[i].x == rx && src.points[i].y == ry) mask &= ~(1u << i);
        if (mask == 0) return std::size_t{0};
        std::size_t& slot = memo[((ry * w + rx) << q) | mask];
        if (slot != kUnset) return slot;
        std::size_t best = kUnset;
        const std::uint32_t low = mask & -mask;
        for (std::uint32_t a = (mask - 1) & mask; a; a = (a - 1) & mask)
            if (a & low) best = std::min(best, cost(rx, ry, a) + cost(rx, ry, mask & ~a));
        std::size_t mx = w, my = h;
        for (std::size_t i = 0; i < q; ++i)
            if (mask >> i & 1) {
                mx = std::min(mx, src.points[i].x);
                my = std::min(my, src.points[i].y);
            }
        for (std::size_t sy = ry; sy <= my; ++sy)
            for (std::size_t sx = rx; sx <= mx; ++sx)
                if (sx != rx || sy != ry) best = std::min(best, (sx - rx) + (sy - ry) + cost(sx, sy, mask));
        slot = best;
        return best;
    };
    return cost(0, 0, (q == 32 ? ~0u : (1u << q) - 1));
}

} // namespace dpres
