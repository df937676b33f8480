#include "dendro/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace dendro {

std::vector<int> bits_of(std::uint64_t x) {
    std::vector<int> out;
    while (x) {
        out.push_back(__builtin_ctzll(x));
        x &= x - 1;
    }
    return out;
}

namespace {

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' ||
            c == ';' || c == '"')
            return false;
    }
    return true;
}

}  // namespace

Tree::Tree() : Tree(std::vector<std::string>{"0"}, {}) {}

Tree Tree::eta(std::string name) { return Tree(std::vector<std::string>{std::move(name)}, {}); }

Tree::Tree(std::vector<std::string> edge_names, std::vector<Vertex> vertices)
    : names_(std::move(edge_names)), vertices_(std::move(vertices)) {
    const auto n = names_.size();
    if (n == 0) throw DendroError("tree needs at least one edge");
    if (n > kMaxEdges || vertices_.size() > kMaxEdges)
        throw DendroError("tree exceeds 64 edges or vertices");
    {
        std::set<std::string> seen;
        for (const auto& s : names_) {
            if (!valid_name(s)) throw DendroError("invalid edge name '" + s + "'");
            if (!seen.insert(s).second) throw DendroError("duplicate edge name '" + s + "'");
        }
    }
    producer_.assign(n, kNone);
    consumer_.assign(n, kNone);
    for (VertexId v = 0; v < static_cast<VertexId>(vertices_.size()); ++v) {
        const auto& vx = vertices_[v];
        if (vx.output < 0 || vx.output >= static_cast<EdgeId>(n))
            throw DendroError("vertex output out of range");
        if (producer_[vx.output] != kNone) throw DendroError("edge is the output of two vertices");
        producer_[vx.output] = v;
        for (EdgeId e : vx.inputs) {
            if (e < 0 || e >= static_cast<EdgeId>(n)) throw DendroError("vertex input out of range");
            if (consumer_[e] != kNone) throw DendroError("edge is an input of two vertices");
            consumer_[e] = v;
        }
    }
    root_ = kNone;
    for (EdgeId e = 0; e < static_cast<EdgeId>(n); ++e) {
        if (consumer_[e] == kNone) {
            if (root_ != kNone) throw DendroError("tree has more than one root");
            root_ = e;
        }
    }
    if (root_ == kNone) throw DendroError("tree has no root");
    // every edge must be reachable from the root
    std::vector<char> seen(n, 0);
    std::vector<EdgeId> stack{root_};
    std::size_t count = 0;
    while (!stack.empty()) {
        EdgeId e = stack.back();
        stack.pop_back();
        if (seen[e]) throw DendroError("tree contains a cycle");
        seen[e] = 1;
        ++count;
        if (producer_[e] != kNone)
            for (EdgeId c : vertices_[producer_[e]].inputs) stack.push_back(c);
    }
    if (count != n) throw DendroError("tree is not connected");
}

bool Tree::is_top_vertex(VertexId v) const {
    for (EdgeId e : vertex(v).inputs)
        if (!is_leaf(e)) return false;
    return true;
}

std::vector<EdgeId> Tree::leaves() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < static_cast<EdgeId>(edge_count()); ++e)
        if (is_leaf(e)) out.push_back(e);
    return out;
}

std::vector<EdgeId> Tree::inner_edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < static_cast<EdgeId>(edge_count()); ++e)
        if (is_inner(e)) out.push_back(e);
    return out;
}

EdgeSet Tree::all_edges() const {
    return edge_count() == 64 ? ~EdgeSet{0} : (EdgeSet{1} << edge_count()) - 1;
}

VertexSet Tree::all_vertices() const {
    return vertex_count() == 64 ? ~VertexSet{0} : (VertexSet{1} << vertex_count()) - 1;
}

std::optional<EdgeId> Tree::find_edge(std::string_view nm) const {
    for (EdgeId e = 0; e < static_cast<EdgeId>(names_.size()); ++e)
        if (names_[e] == nm) return e;
    return std::nullopt;
}

EdgeId Tree::edge(std::string_view nm) const {
    auto e = find_edge(nm);
    if (!e) throw DendroError("no edge named '" + std::string(nm) + "'");
    return *e;
}

EdgeSet Tree::edges_above(EdgeId e) const {
    EdgeSet out = 0;
    std::vector<EdgeId> stack{e};
    while (!stack.empty()) {
        EdgeId f = stack.back();
        stack.pop_back();
        if (producer_[f] == kNone) continue;
        for (EdgeId c : vertices_[producer_[f]].inputs) {
            out |= bit(c);
            stack.push_back(c);
        }
    }
    return out;
}

VertexSet Tree::vertices_above(EdgeId e) const {
    VertexSet out = 0;
    std::vector<EdgeId> stack{e};
    while (!stack.empty()) {
        EdgeId f = stack.back();
        stack.pop_back();
        if (producer_[f] == kNone) continue;
        out |= bit(producer_[f]);
        for (EdgeId c : vertices_[producer_[f]].inputs) stack.push_back(c);
    }
    return out;
}

Tree linear_tree(int n) {
    if (n < 0) throw DendroError("linear_tree needs n >= 0");
    std::vector<std::string> names;
    std::vector<Vertex> vs;
    for (int i = 0; i <= n; ++i) names.push_back(std::to_string(i));
    for (int i = 1; i <= n; ++i) vs.push_back(Vertex{i, {i - 1}});
    return Tree(std::move(names), std::move(vs));
}

Tree corolla(int n) {
    if (n < 0) throw DendroError("corolla needs n >= 0");
    std::vector<std::string> names{"r"};
    Vertex v{0, {}};
    for (int i = 1; i <= n; ++i) {
        names.push_back("a" + std::to_string(i));
        v.inputs.push_back(i);
    }
    return Tree(std::move(names), {v});
}

Grafted graft(const Tree& base, EdgeId leaf, const Tree& top) {
    if (leaf < 0 || leaf >= static_cast<EdgeId>(base.edge_count()) || !base.is_leaf(leaf))
        throw DendroError("graft: edge is not a leaf of the base tree");
    Grafted g;
    std::vector<std::string> names = base.names();
    std::set<std::string> used(names.begin(), names.end());
    g.base_map.resize(base.edge_count());
    std::iota(g.base_map.begin(), g.base_map.end(), 0);
    g.top_map.assign(top.edge_count(), kNone);
    for (EdgeId e = 0; e < static_cast<EdgeId>(top.edge_count()); ++e) {
        if (e == top.root()) {
            g.top_map[e] = leaf;
            continue;
        }
        std::string nm = top.name(e);
        while (used.count(nm)) nm += "'";
        used.insert(nm);
        g.top_map[e] = static_cast<EdgeId>(names.size());
        names.push_back(nm);
    }
    std::vector<Vertex> vs = base.vertices();
    for (const auto& v : top.vertices()) {
        Vertex w{g.top_map[v.output], {}};
        for (EdgeId c : v.inputs) w.inputs.push_back(g.top_map[c]);
        vs.push_back(std::move(w));
    }
    g.tree = Tree(std::move(names), std::move(vs));
    return g;
}

namespace {

struct Parser {
    std::string_view s;
    std::size_t pos = 0;
    std::vector<std::string> names;
    std::vector<Vertex> vs;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw DendroError("tree parse error at offset " + std::to_string(pos) + ": " + msg);
    }
    std::string name() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
               s[pos] != ')')
            ++pos;
        if (pos == start) fail("expected an edge name");
        return std::string(s.substr(start, pos - start));
    }
    EdgeId expr() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        if (s[pos] == '(') {
            ++pos;
            EdgeId out = static_cast<EdgeId>(names.size());
            names.push_back(name());
            std::size_t slot = vs.size();
            vs.push_back(Vertex{out, {}});
            std::vector<EdgeId> ins;
            for (;;) {
                skip();
                if (pos >= s.size()) fail("missing ')'");
                if (s[pos] == ')') {
                    ++pos;
                    break;
                }
                ins.push_back(expr());
            }
            vs[slot].inputs = std::move(ins);
            return out;
        }
        if (s[pos] == ')') fail("unexpected ')'");
        names.push_back(name());
        return static_cast<EdgeId>(names.size() - 1);
    }
};

void format_edge(const Tree& t, EdgeId e, std::string& out) {
    VertexId v = t.producer(e);
    if (v == kNone) {
        out += t.name(e);
        return;
    }
    out += '(';
    out += t.name(e);
    for (EdgeId c : t.vertex(v).inputs) {
        out += ' ';
        format_edge(t, c, out);
    }
    out += ')';
}

}  // namespace

Tree parse_tree(std::string_view text) {
    Parser p;
    p.s = text;
    p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing characters");
    return Tree(std::move(p.names), std::move(p.vs));
}

std::string format_tree(const Tree& t) {
    std::string out;
    format_edge(t, t.root(), out);
    return out;
}

std::string to_dot(const Tree& t, std::string_view graph_name) {
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n  rankdir=BT;\n";
    for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e)
        os << "  e" << e << " [shape=plaintext,label=\"" << t.name(e) << "\"];\n";
    for (VertexId v = 0; v < static_cast<VertexId>(t.vertex_count()); ++v)
        os << "  v" << v << " [shape=circle,style=filled,fillcolor=black,label=\"\",width=0.15];\n";
    for (VertexId v = 0; v < static_cast<VertexId>(t.vertex_count()); ++v) {
        os << "  v" << v << " -> e" << t.vertex(v).output << ";\n";
        for (EdgeId c : t.vertex(v).inputs) os << "  e" << c << " -> v" << v << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string canonical_code_at(const Tree& t, EdgeId e) {
    VertexId v = t.producer(e);
    if (v == kNone) return "|";
    std::vector<std::string> kids;
    for (EdgeId c : t.vertex(v).inputs) kids.push_back(canonical_code_at(t, c));
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (auto& k : kids) out += k;
    out += ')';
    return out;
}

std::string canonical_code(const Tree& t) { return canonical_code_at(t, t.root()); }

Tree tree_from_code(std::string_view code) {
    std::vector<std::string> names;
    std::vector<Vertex> vs;
    std::size_t pos = 0;
    std::function<EdgeId()> rec = [&]() -> EdgeId {
        if (pos >= code.size()) throw DendroError("bad tree code");
        EdgeId me = static_cast<EdgeId>(names.size());
        names.push_back("e" + std::to_string(me));
        if (code[pos] == '|') {
            ++pos;
            return me;
        }
        if (code[pos] != '(') throw DendroError("bad tree code");
        ++pos;
        std::size_t slot = vs.size();
        vs.push_back(Vertex{me, {}});
        std::vector<EdgeId> ins;
        while (pos < code.size() && code[pos] != ')') ins.push_back(rec());
        if (pos >= code.size()) throw DendroError("bad tree code");
        ++pos;
        vs[slot].inputs = std::move(ins);
        return me;
    };
    rec();
    if (pos != code.size()) throw DendroError("bad tree code");
    return Tree(std::move(names), std::move(vs));
}

namespace {

// All bijections between the subtrees at e (in a) and f (in b), appended to maps.
void match_all(const Tree& a, EdgeId e, const Tree& b, EdgeId f,
               std::vector<std::vector<std::pair<EdgeId, EdgeId>>>& out) {
    VertexId va = a.producer(e), vb = b.producer(f);
    if (va == kNone) {
        out.push_back({{e, f}});
        return;
    }
    const auto& ia = a.vertex(va).inputs;
    const auto& ib = b.vertex(vb).inputs;
    std::vector<std::string> ca, cb;
    for (EdgeId c : ia) ca.push_back(canonical_code_at(a, c));
    for (EdgeId c : ib) cb.push_back(canonical_code_at(b, c));
    const std::size_t k = ia.size();
    // for each child of a, the candidate children of b with equal code
    std::vector<char> used(k, 0);
    std::function<void(std::size_t, std::vector<std::pair<EdgeId, EdgeId>>&)> rec;
    std::vector<std::vector<std::pair<EdgeId, EdgeId>>> results;
    rec = [&](std::size_t i, std::vector<std::pair<EdgeId, EdgeId>>& acc) {
        if (i == k) {
            results.push_back(acc);
            return;
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (used[j] || cb[j] != ca[i]) continue;
            used[j] = 1;
            std::vector<std::vector<std::pair<EdgeId, EdgeId>>> sub;
            match_all(a, ia[i], b, ib[j], sub);
            for (auto& s : sub) {
                auto before = acc.size();
                acc.insert(acc.end(), s.begin(), s.end());
                rec(i + 1, acc);
                acc.resize(before);
            }
            used[j] = 0;
        }
    };
    std::vector<std::pair<EdgeId, EdgeId>> acc{{e, f}};
    rec(0, acc);
    for (auto& r : results) out.push_back(std::move(r));
}

bool match_one(const Tree& a, EdgeId e, const Tree& b, EdgeId f, std::vector<EdgeId>& map) {
    map[e] = f;
    VertexId va = a.producer(e), vb = b.producer(f);
    if (va == kNone) return vb == kNone;
    if (vb == kNone) return false;
    const auto& ia = a.vertex(va).inputs;
    const auto& ib = b.vertex(vb).inputs;
    if (ia.size() != ib.size()) return false;
    std::vector<std::pair<std::string, EdgeId>> ca, cb;
    for (EdgeId c : ia) ca.emplace_back(canonical_code_at(a, c), c);
    for (EdgeId c : ib) cb.emplace_back(canonical_code_at(b, c), c);
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].first != cb[i].first) return false;
        if (!match_one(a, ca[i].second, b, cb[i].second, map)) return false;
    }
    return true;
}

}  // namespace

std::optional<TreeIso> find_isomorphism(const Tree& source, const Tree& target) {
    if (source.edge_count() != target.edge_count() || source.vertex_count() != target.vertex_count())
        return std::nullopt;
    if (canonical_code(source) != canonical_code(target)) return std::nullopt;
    TreeIso iso{std::vector<EdgeId>(source.edge_count(), kNone)};
    if (!match_one(source, source.root(), target, target.root(), iso.edge_map)) return std::nullopt;
    return iso;
}

std::vector<VertexId> vertex_map(const Tree& source, const Tree& target, const TreeIso& iso) {
    std::vector<VertexId> out(source.vertex_count(), kNone);
    for (VertexId v = 0; v < static_cast<VertexId>(source.vertex_count()); ++v)
        out[v] = target.producer(iso.edge_map.at(source.vertex(v).output));
    return out;
}

bool is_isomorphism(const Tree& source, const Tree& target, const TreeIso& iso) {
    if (source.edge_count() != target.edge_count() || source.vertex_count() != target.vertex_count())
        return false;
    if (iso.edge_map.size() != source.edge_count()) return false;
    std::vector<char> hit(target.edge_count(), 0);
    for (EdgeId f : iso.edge_map) {
        if (f < 0 || f >= static_cast<EdgeId>(target.edge_count()) || hit[f]) return false;
        hit[f] = 1;
    }
    for (const auto& v : source.vertices()) {
        VertexId w = target.producer(iso.edge_map[v.output]);
        if (w == kNone) return false;
        std::vector<EdgeId> a, b = target.vertex(w).inputs;
        for (EdgeId c : v.inputs) a.push_back(iso.edge_map[c]);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return false;
    }
    return true;
}

std::vector<TreeIso> automorphisms(const Tree& t) {
    std::vector<std::vector<std::pair<EdgeId, EdgeId>>> maps;
    match_all(t, t.root(), t, t.root(), maps);
    std::vector<TreeIso> out;
    for (auto& m : maps) {
        TreeIso iso{std::vector<EdgeId>(t.edge_count(), kNone)};
        for (auto [a, b] : m) iso.edge_map[a] = b;
        out.push_back(std::move(iso));
    }
    std::sort(out.begin(), out.end(),
              [](const TreeIso& x, const TreeIso& y) { return x.edge_map < y.edge_map; });
    return out;
}

TreeIso compose(const TreeIso& second, const TreeIso& first) {
    TreeIso out{std::vector<EdgeId>(first.edge_map.size())};
    for (std::size_t i = 0; i < first.edge_map.size(); ++i)
        out.edge_map[i] = second.edge_map.at(first.edge_map[i]);
    return out;
}

TreeIso inverse(const TreeIso& iso) {
    TreeIso out{std::vector<EdgeId>(iso.edge_map.size())};
    for (std::size_t i = 0; i < iso.edge_map.size(); ++i) out.edge_map.at(iso.edge_map[i]) = static_cast<EdgeId>(i);
    return out;
}

TreeIso identity_iso(const Tree& t) {
    TreeIso out{std::vector<EdgeId>(t.edge_count())};
    std::iota(out.edge_map.begin(), out.edge_map.end(), 0);
    return out;
}

std::vector<Tree> enumerate_trees(int max_vertices, int max_edges) {
    // codes[v][e] = codes of trees rooted at an edge with exactly v vertices and e edges
    std::vector<std::vector<std::vector<std::string>>> codes(
        max_vertices + 1, std::vector<std::vector<std::string>>(max_edges + 1));
    if (max_edges >= 1) codes[0][1].push_back("|");
    struct Item {
        std::string code;
        int v, e;
    };
    for (int v = 1; v <= max_vertices; ++v) {
        for (int e = 1; e <= max_edges; ++e) {
            // a vertex plus a multiset of children totalling (v-1, e-1)
            std::vector<Item> pool;
            for (int cv = 0; cv < v; ++cv)
                for (int ce = 1; ce < e; ++ce)
                    for (auto& c : codes[cv][ce]) pool.push_back({c, cv, ce});
            std::sort(pool.begin(), pool.end(), [](const Item& a, const Item& b) { return a.code < b.code; });
            std::set<std::string> found;
            std::vector<std::string> chosen;
            std::function<void(std::size_t, int, int)> rec = [&](std::size_t from, int rv, int re) {
                if (rv == 0 && re == 0) {
                    std::string code = "(";
                    for (auto& c : chosen) code += c;
                    code += ')';
                    found.insert(code);
                    return;
                }
                for (std::size_t i = from; i < pool.size(); ++i) {
                    if (pool[i].v > rv || pool[i].e > re) continue;
                    chosen.push_back(pool[i].code);
                    rec(i, rv - pool[i].v, re - pool[i].e);
                    chosen.pop_back();
                }
            };
            rec(0, v - 1, e - 1);
            codes[v][e].assign(found.begin(), found.end());
        }
    }
    std::vector<Tree> out;
    for (int e = 1; e <= max_edges; ++e)
        for (int v = 0; v <= max_vertices; ++v)
            for (auto& c : codes[v][e]) out.push_back(tree_from_code(c));
    return out;
}

Tree tree_literal(std::string_view text) {
    auto starts = [&](std::string_view p) { return text.substr(0, p.size()) == p; };
    auto number = [&](std::size_t off) {
        std::string digits(text.substr(off));
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
            throw DendroError("bad tree literal '" + std::string(text) + "'");
        return std::stoi(digits);
    };
    if (starts("linear:")) return linear_tree(number(7));
    if (starts("corolla:")) return corolla(number(8));
    if (text == "eta") return Tree::eta("e");
    return parse_tree(text);
}

}  // namespace dendro
