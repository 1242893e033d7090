#include "dpres/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dpres/grid.hpp"

namespace dpres {

bool LineReader::next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            auto first = line.find_first_not_of(" \t\r");
            if (first == hash) {
                auto body = line.substr(hash + 1);
                if (!body.empty() && body[0] == ' ') body.erase(0, 1);
                if (!body.empty() && body.back() == '\r') body.pop_back();
                comments.push_back(body);
            }
            line.erase(hash);
        }
        tokens.clear();
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        if (!tokens.empty()) return true;
    }
    return false;
}

std::size_t parse_count(const std::string& token, std::size_t line) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError("line " + std::to_string(line) + ": expected nonnegative integer, got '" + token + "'");
    return value;
}

namespace {

Vertex parse_vertex(const std::string& tok, const std::optional<GridSpec>& grid, std::size_t line) {
    if (!tok.empty() && tok.front() == '(') {
        if (!grid) throw ParseError("line " + std::to_string(line) + ": coordinate token without grid header");
        auto comma = tok.find(',');
        if (tok.back() != ')' || comma == std::string::npos)
            throw ParseError("line " + std::to_string(line) + ": bad coordinate '" + tok + "'");
        std::size_t x = parse_count(tok.substr(1, comma - 1), line);
        std::size_t y = parse_count(tok.substr(comma + 1, tok.size() - comma - 2), line);
        if (x >= grid->width || y >= grid->height)
            throw ParseError("line " + std::to_string(line) + ": coordinate outside grid");
        return grid->id(x, y);
    }
    return static_cast<Vertex>(parse_count(tok, line));
}

} // namespace

Instance parse_instance(std::istream& in) {
    LineReader reader(in);
    std::vector<std::string> t;
    std::optional<std::size_t> n;
    std::optional<GridSpec> grid;
    std::vector<Edge> edges;
    std::optional<TerminalSet> subset;
    std::optional<PairList> pairs;
    std::optional<std::size_t> budget;

    auto need = [&](std::size_t count) {
        if (t.size() != count)
            throw ParseError("line " + std::to_string(reader.line_no()) + ": wrong token count for '" + t[0] + "'");
    };

    while (reader.next(t)) {
        const std::size_t ln = reader.line_no();
        const std::string& kw = t[0];
        if (kw == "g") {
            need(2);
            if (n) throw ParseError("line " + std::to_string(ln) + ": duplicate 'g' line");
            n = parse_count(t[1], ln);
        } else if (kw == "grid") {
            need(3);
            if (grid) throw ParseError("line " + std::to_string(ln) + ": duplicate 'grid' line");
            grid = GridSpec{parse_count(t[1], ln), parse_count(t[2], ln)};
            if (grid->width == 0 || grid->height == 0) throw ParseError("grid dimension must be positive");
        } else if (kw == "e") {
            need(3);
            edges.push_back(Edge{parse_vertex(t[1], grid, ln), parse_vertex(t[2], grid, ln)});
        } else if (kw == "S") {
            if (pairs) throw ParseError("line " + std::to_string(ln) + ": mixing S and P terminals");
            if (!subset) subset.emplace();
            for (std::size_t i = 1; i < t.size(); ++i) subset->vertices.push_back(parse_vertex(t[i], grid, ln));
        } else if (kw == "P") {
            need(3);
            if (subset) throw ParseError("line " + std::to_string(ln) + ": mixing S and P terminals");
            if (!pairs) pairs.emplace();
            Vertex u = parse_vertex(t[1], grid, ln), v = parse_vertex(t[2], grid, ln);
            pairs->pairs.push_back(VertexPair::of(u, v));
        } else if (kw == "k") {
            need(2);
            budget = parse_count(t[1], ln);
        } else {
            throw ParseError("line " + std::to_string(ln) + ": unknown record '" + kw + "'");
        }
    }

    Instance inst;
    inst.comments = std::move(reader.comments);
    if (grid) {
        if (n && *n != grid->size()) throw ParseError("'g' count disagrees with grid dimensions");
        inst.grid = grid;
        if (edges.empty()) {
            inst.graph = build_grid(*grid);
        } else {
            inst.graph = Graph(grid->size(), edges);
        }
    } else {
        if (!n) throw ParseError("missing 'g <n>' line");
        inst.graph = Graph(*n, edges);
    }
    if (pairs) {
        inst.terminals = std::move(*pairs);
    } else if (subset) {
        inst.terminals = std::move(*subset);
    }
    inst.budget = budget;
    validate(inst);
    return inst;
}

Instance parse_instance_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_instance(in);
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_instance(in);
}

namespace {

std::string vertex_token(Vertex v, const std::optional<GridSpec>& grid) {
    if (!grid) return std::to_string(v);
    return "(" + std::to_string(grid->x_of(v)) + "," + std::to_string(grid->y_of(v)) + ")";
}

} // namespace

void write_instance(std::ostream& out, const Instance& inst) {
    for (const auto& c : inst.comments) out << "# " << c << '\n';
    bool full_grid = inst.grid && inst.graph == build_grid(*inst.grid);
    if (inst.grid) {
        out << "grid " << inst.grid->width << ' ' << inst.grid->height << '\n';
    } else {
        out << "g " << inst.graph.n() << '\n';
    }
    if (!full_grid)
        for (const Edge& e : inst.graph.edges()) out << "e " << e.a << ' ' << e.b << '\n';
    std::optional<GridSpec> coords = full_grid ? inst.grid : std::nullopt;
    if (const auto* s = std::get_if<TerminalSet>(&inst.terminals)) {
        if (!s->vertices.empty()) {
            out << 'S';
            for (Vertex v : terminal_vertices(inst.terminals)) out << ' ' << vertex_token(v, coords);
            out << '\n';
        }
    } else {
        for (const auto& p : pairs_of(inst.terminals))
            out << "P " << vertex_token(p.a, coords) << ' ' << vertex_token(p.b, coords) << '\n';
    }
    if (inst.budget) out << "k " << *inst.budget << '\n';
}

std::string instance_text(const Instance& inst) {
    std::ostringstream out;
    write_instance(out, inst);
    return out.str();
}

Preserver parse_preserver(std::istream& in) {
    LineReader reader(in);
    std::vector<std::string> t;
    std::vector<Edge> edges;
    std::optional<std::size_t> declared;
    while (reader.next(t)) {
        const std::size_t ln = reader.line_no();
        if (t[0] == "size" && t.size() == 2) {
            declared = parse_count(t[1], ln);
        } else if (t[0] == "e" && t.size() == 3) {
            Vertex u = static_cast<Vertex>(parse_count(t[1], ln));
            Vertex v = static_cast<Vertex>(parse_count(t[2], ln));
            if (u == v) throw ParseError("line " + std::to_string(ln) + ": self-loop in preserver");
            edges.push_back(VertexPair::of(u, v));
        } else {
            throw ParseError("line " + std::to_string(ln) + ": unexpected preserver record '" + t[0] + "'");
        }
    }
    Preserver h = make_preserver(std::move(edges));
    if (declared && *declared != h.size())
        throw ParseError("preserver declares size " + std::to_string(*declared) + " but lists " +
                         std::to_string(h.size()) + " edges");
    return h;
}

Preserver read_preserver_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_preserver(in);
}

void write_preserver(std::ostream& out, const Preserver& h) {
    out << "size " << h.size() << '\n';
    for (const Edge& e : h.edges) out << "e " << e.a << ' ' << e.b << '\n';
}

std::string digest_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string instance_digest(const Instance& inst) {
    Instance bare = inst;
    bare.comments.clear();
    return digest_hex(instance_text(bare));
}

} // namespace dpres
