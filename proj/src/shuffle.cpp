#include "dendro/shuffle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace dendro {

namespace {

// Nested form used while moving vertices around.
struct PNode {
    EdgeId s = kNone;
    EdgeId t = kNone;
    int kind = 0;  // 0 leaf, 1 white, 2 black
    VertexId gen = kNone;
    std::vector<PNode> kids;
};

PNode build_black(const Tree& T, EdgeId s, EdgeId t) {
    PNode n{s, t, 0, kNone, {}};
    VertexId u = T.producer(t);
    if (u == kNone) return n;
    n.kind = 2;
    n.gen = u;
    for (EdgeId c : T.vertex(u).inputs) n.kids.push_back(build_black(T, s, c));
    return n;
}

PNode build_white(const Tree& S, const Tree& T, EdgeId s, EdgeId t) {
    VertexId v = S.producer(s);
    if (v == kNone) return build_black(T, s, t);
    PNode n{s, t, 1, v, {}};
    for (EdgeId c : S.vertex(v).inputs) n.kids.push_back(build_white(S, T, c, t));
    return n;
}

Scheme to_scheme(const Tree& S, const Tree& T, const PNode& root) {
    Scheme out;
    std::vector<std::string> names;
    std::vector<Vertex> vs;
    std::function<EdgeId(const PNode&)> walk = [&](const PNode& n) -> EdgeId {
        auto e = static_cast<EdgeId>(names.size());
        names.push_back(colour_name(S, T, n.s, n.t));
        out.label.emplace_back(n.s, n.t);
        if (n.kind == 0) return e;
        std::vector<EdgeId> ins;
        for (const auto& k : n.kids) ins.push_back(walk(k));
        vs.push_back(Vertex{e, ins});
        out.black.push_back(n.kind == 2 ? 1 : 0);
        out.origin.push_back(n.gen);
        return e;
    };
    walk(root);
    // vertices were pushed in post order; keep that order
    out.tree = Tree(names, vs);
    return out;
}

// All schemes reachable by one move from n, rebuilt by path copying.
void moves_at(const Tree& S, const Tree& T, const PNode& n, std::vector<std::pair<PNode, SchemeMove>>& out,
              const std::function<PNode(PNode)>& wrap) {
    if (n.kind == 1) {
        VertexId u = T.producer(n.t);
        bool ok = u != kNone;
        for (const auto& k : n.kids)
            if (k.kind != 2 || k.gen != u) ok = false;
        if (ok) {
            const auto& tin = T.vertex(u).inputs;
            PNode b{n.s, n.t, 2, u, {}};
            for (std::size_t j = 0; j < tin.size(); ++j) {
                PNode w{n.s, tin[j], 1, n.gen, {}};
                for (const auto& k : n.kids) w.kids.push_back(k.kids[j]);
                b.kids.push_back(std::move(w));
            }
            SchemeMove m;
            m.white = n.gen;
            m.black = u;
            m.s = n.s;
            m.t = n.t;
            out.emplace_back(wrap(std::move(b)), m);
        }
    }
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
        auto sub = [&, i](PNode repl) {
            PNode copy = n;
            copy.kids[i] = std::move(repl);
            return wrap(std::move(copy));
        };
        moves_at(S, T, n.kids[i], out, sub);
    }
}

}  // namespace

std::string colour_name(const Tree& S, const Tree& T, EdgeId s, EdgeId t) { return S.name(s) + "|" + T.name(t); }

std::vector<Scheme> shuffles(const Tree& S, const Tree& T, std::vector<SchemeMove>* moves) {
    LabelTable table;
    std::unordered_map<LabelKey, int, LabelKeyHash> seen;
    std::vector<PNode> nodes;
    std::vector<Scheme> out;
    std::deque<int> queue;

    auto add = [&](PNode n) -> int {
        Scheme sc = to_scheme(S, T, n);
        auto key = tree_key(sc.tree, table);
        auto it = seen.find(key);
        if (it != seen.end()) return it->second;
        int id = static_cast<int>(out.size());
        seen.emplace(std::move(key), id);
        out.push_back(std::move(sc));
        nodes.push_back(std::move(n));
        queue.push_back(id);
        return id;
    };
    add(build_white(S, T, S.root(), T.root()));
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        std::vector<std::pair<PNode, SchemeMove>> next;
        PNode base = nodes[cur];
        moves_at(S, T, base, next, [](PNode p) { return p; });
        for (auto& [n, m] : next) {
            int id = add(std::move(n));
            // a nullary white turning into a nullary black is the same labeled tree
            if (id == cur) continue;
            if (moves) {
                m.from = cur;
                m.to = id;
                moves->push_back(m);
            }
        }
    }
    return out;
}

EdgeId Tensor::edge_of(int i, EdgeId s, EdgeId t) const {
    const auto& lab = schemes.at(i).label;
    for (EdgeId e = 0; e < static_cast<EdgeId>(lab.size()); ++e)
        if (lab[e].first == s && lab[e].second == t) return e;
    return kNone;
}

std::string Tensor::colour(EdgeId s, EdgeId t) const { return colour_name(S, T, s, t); }

Tensor tensor(const Tree& S, const Tree& T) {
    Tensor x;
    x.S = S;
    x.T = T;
    std::vector<SchemeMove> raw;
    auto found = shuffles(S, T, &raw);
    const int n = static_cast<int>(found.size());

    // linear extension: repeatedly take the earliest discovered scheme whose
    // predecessors are all placed
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> succ(n);
    for (const auto& m : raw) {
        if (m.from == m.to) throw DendroError("a move returned to its own scheme");
        succ[m.from].push_back(m.to);
        ++indeg[m.to];
    }
    std::vector<int> order;
    std::vector<int> pos(n, -1);
    std::vector<char> ready(n, 0);
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) ready[i] = 1;
    while (static_cast<int>(order.size()) < n) {
        int pick = -1;
        for (int i = 0; i < n; ++i)
            if (ready[i] && pos[i] < 0) {
                pick = i;
                break;
            }
        if (pick < 0) throw DendroError("moves between schemes form a cycle");
        pos[pick] = static_cast<int>(order.size());
        order.push_back(pick);
        for (int j : succ[pick])
            if (--indeg[j] == 0) ready[j] = 1;
    }
    for (int i : order) x.schemes.push_back(std::move(found[i]));
    for (auto m : raw) {
        m.from = pos[m.from];
        m.to = pos[m.to];
        x.moves.push_back(m);
    }
    std::sort(x.moves.begin(), x.moves.end(),
              [](const SchemeMove& a, const SchemeMove& b) { return std::tie(a.to, a.from) < std::tie(b.to, b.from); });

    x.le.assign(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) x.le[i][i] = 1;
    // schemes are topologically sorted, so one backward sweep closes the relation
    std::vector<std::vector<int>> out(n);
    for (const auto& m : x.moves) out[m.from].push_back(m.to);
    for (int i = n - 1; i >= 0; --i)
        for (int j : out[i])
            for (int k = 0; k < n; ++k)
                if (x.le[j][k]) x.le[i][k] = 1;

    std::vector<Tree> trees;
    for (const auto& s : x.schemes) trees.push_back(s.tree);
    x.world = CellWorld(std::move(trees));
    return x;
}

CellSet tensor_image(const Tensor& x, const Tree& s_part, const Tree& t_part) {
    std::vector<CellId> gens;
    for (const auto& sc : shuffles(s_part, t_part)) {
        auto c = x.world.find_tree(sc.tree);
        if (!c) throw DendroError("scheme of a face tensor is not a cell: " + format_tree(sc.tree));
        gens.push_back(*c);
    }
    return close_cells(x.world, gens);
}

CellSet boundary_left(const Tensor& x) {
    CellSet out(x.world.size());
    for (const auto& ef : elementary_faces(x.S))
        out = out.unite(tensor_image(x, face_shape(x.S, ef.face).tree, x.T));
    return out;
}

CellSet boundary_right(const Tensor& x) {
    CellSet out(x.world.size());
    for (const auto& ef : elementary_faces(x.T))
        out = out.unite(tensor_image(x, x.S, face_shape(x.T, ef.face).tree));
    return out;
}

CellSet a0_left(const Tensor& x) {
    return boundary_left(x).unite(tensor_image(x, x.S, Tree::eta(x.T.name(x.T.root()))));
}

CellSet b0_right(const Tensor& x) {
    auto leaves = x.S.leaves();
    if (leaves.size() != 1) throw DendroError("left factor must have a single leaf");
    return boundary_right(x).unite(tensor_image(x, Tree::eta(x.S.name(leaves[0])), x.T));
}

CellSet whole(const Tensor& x) { return all_cells(x.world); }

CellSet scheme_closure(const Tensor& x, int i) { return close_cells(x.world, {x.cell(i)}); }

CellSet cumulative(const Tensor& x, const CellSet& base, int k) {
    CellSet out = base;
    for (int i = 0; i < k; ++i) out = out.unite(scheme_closure(x, i));
    return out;
}

namespace {

std::vector<std::pair<EdgeId, EdgeId>> cell_labels(const Tensor& x, CellId c) {
    const auto& cell = x.world.cell(c);
    const auto& lab = x.schemes[cell.scheme].label;
    std::vector<std::pair<EdgeId, EdgeId>> out;
    for (EdgeId e : bits_of(cell.face.edges)) out.push_back(lab[e]);
    return out;
}

}  // namespace

bool misses_left_colour_or_slice(const Tensor& x, CellId c, EdgeId t) {
    auto labs = cell_labels(x, c);
    EdgeSet seen = 0;
    bool slice = true;
    for (auto [s, u] : labs) {
        seen |= bit(s);
        if (u != t) slice = false;
    }
    return seen != x.S.all_edges() || slice;
}

bool misses_right_colour_or_slice(const Tensor& x, CellId c, EdgeId s) {
    auto labs = cell_labels(x, c);
    EdgeSet seen = 0;
    bool slice = true;
    for (auto [a, u] : labs) {
        seen |= bit(u);
        if (a != s) slice = false;
    }
    return seen != x.T.all_edges() || slice;
}

bool common_face_bound(const Tensor& x, int i, int j) {
    CellSet common = scheme_closure(x, i).intersect(scheme_closure(x, j));
    CellSet below(x.world.size());
    for (int k = 0; k < x.size(); ++k)
        if (x.leq(k, i) && x.leq(k, j)) below = below.unite(scheme_closure(x, k));
    return common.subset_of(below);
}

std::vector<Face> spines(const Tensor& x, int k) {
    if (k < 0 || k + 1 >= x.size()) throw DendroError("spines are defined for non-maximal schemes only");
    const auto& sc = x.schemes[k];
    const Tree& t = sc.tree;
    std::vector<Face> out;
    for (VertexId b = 0; b < static_cast<VertexId>(t.vertex_count()); ++b) {
        if (!sc.black[b]) continue;
        Face f{bit(t.root()), 0};
        VertexId v = b;
        while (v != kNone) {
            f.vertices |= bit(v);
            f.edges |= bit(t.vertex(v).output);
            for (EdgeId c : t.vertex(v).inputs) f.edges |= bit(c);
            VertexId below = t.consumer(t.vertex(v).output);
            v = below;
        }
        out.push_back(f);
    }
    return out;
}

std::vector<Face> initial_segments(const Tree& t) {
    std::vector<Face> out;
    // choices per edge: stop there, or take its producer and recurse
    std::function<void(std::vector<EdgeId>, Face)> rec = [&](std::vector<EdgeId> frontier, Face f) {
        if (frontier.empty()) {
            out.push_back(f);
            return;
        }
        EdgeId e = frontier.back();
        frontier.pop_back();
        rec(frontier, f);
        VertexId v = t.producer(e);
        if (v == kNone) return;
        Face g = f;
        g.vertices |= bit(v);
        for (EdgeId c : t.vertex(v).inputs) {
            g.edges |= bit(c);
            frontier.push_back(c);
        }
        rec(frontier, g);
    };
    rec({t.root()}, Face{bit(t.root()), 0});
    std::sort(out.begin(), out.end(), face_less);
    return out;
}

std::string scheme_dot(const Scheme& s) {
    const Tree& t = s.tree;
    std::ostringstream os;
    os << "digraph scheme {\n  rankdir=BT;\n";
    for (VertexId v = 0; v < static_cast<VertexId>(t.vertex_count()); ++v)
        os << "  v" << v << " [shape=circle,label=\"\",style=filled,fillcolor=" << (s.black[v] ? "black" : "white")
           << "];\n";
    for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) {
        VertexId p = t.producer(e);
        VertexId c = t.consumer(e);
        std::string from = p == kNone ? "top" + std::to_string(e) : "v" + std::to_string(p);
        std::string to = c == kNone ? "out" : "v" + std::to_string(c);
        if (p == kNone) os << "  " << from << " [shape=point];\n";
        os << "  " << from << " -> " << to << " [label=\"" << t.name(e) << "\",dir=none];\n";
    }
    os << "  out [shape=point];\n}\n";
    return os.str();
}

}  // namespace dendro
