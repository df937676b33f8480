#include "dendro/joins.hpp"

#include <algorithm>
#include <set>

namespace dendro {

namespace {

std::string fresh(std::string name, std::set<std::string>& used) {
    while (used.count(name)) name += "'";
    used.insert(name);
    return name;
}

// Face of t spanned by the subtree sitting on edge d (d included).
Face subtree_face(const Tree& t, EdgeId d) { return Face{bit(d) | t.edges_above(d), t.vertices_above(d)}; }

Tree subtree(const Tree& t, EdgeId d) { return face_shape(t, subtree_face(t, d)).tree; }

struct FaceAbove {
    EdgeSet edges = 0;
    VertexSet vertices = 0;
};

// Edges and host vertices of the face fs strictly above edge d.
FaceAbove above_in_face(const FaceStructure& fs, EdgeId d) {
    FaceAbove out;
    std::vector<EdgeId> stack{d};
    while (!stack.empty()) {
        EdgeId g = stack.back();
        stack.pop_back();
        auto p = fs.producer[g];
        if (p == kNone) continue;
        out.vertices |= fs.vertices[p].region;
        for (EdgeId c : fs.vertices[p].inputs) {
            out.edges |= bit(c);
            stack.push_back(c);
        }
    }
    return out;
}

}  // namespace

RootJoin forest_star(const Forest& forest, int n) {
    if (n < 0) throw DendroError("forest_star needs n >= 0");
    RootJoin out;
    std::vector<std::string> names;
    std::set<std::string> used;
    for (int j = 0; j <= n; ++j) {
        names.push_back(fresh(std::to_string(j), used));
        out.chain.push_back(j);
    }
    std::vector<Vertex> vs;
    vs.push_back(Vertex{0, {}});
    out.apex = 0;
    for (int j = 0; j < n; ++j) {
        vs.push_back(Vertex{j + 1, {j}});
        out.chain_vertices.push_back(j + 1);
    }
    for (const auto& t : forest) {
        std::vector<EdgeId> map(t.edge_count());
        for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) {
            map[e] = static_cast<EdgeId>(names.size());
            names.push_back(fresh(t.name(e), used));
        }
        for (const auto& v : t.vertices()) {
            Vertex w{map[v.output], {}};
            for (EdgeId c : v.inputs) w.inputs.push_back(map[c]);
            vs.push_back(std::move(w));
        }
        vs[0].inputs.push_back(map[t.root()]);
        out.tree_maps.push_back(std::move(map));
    }
    out.tree = Tree(std::move(names), std::move(vs));
    return out;
}

std::optional<Forest> has_unary_root_join(const Tree& t) {
    if (t.vertex_count() < 2) return std::nullopt;
    const auto& r = t.vertex(t.root_vertex());
    if (r.inputs.size() != 1) return std::nullopt;
    VertexId v = t.producer(r.inputs[0]);
    Forest f;
    for (EdgeId c : t.vertex(v).inputs) f.push_back(subtree(t, c));
    return sorted_forest(std::move(f));
}

std::vector<std::pair<Forest, int>> join_decompositions(const Tree& t) {
    std::vector<std::pair<Forest, int>> out;
    EdgeId e = t.root();
    int n = 0;
    while (t.producer(e) != kNone) {
        const auto& v = t.vertex(t.producer(e));
        Forest f;
        for (EdgeId c : v.inputs) f.push_back(subtree(t, c));
        out.emplace_back(sorted_forest(std::move(f)), n);
        if (v.inputs.size() != 1) break;
        e = v.inputs[0];
        ++n;
    }
    return out;
}

bool is_admissible(const Tree& t, EdgeSet a) {
    for (EdgeId leaf : t.leaves()) {
        if (t.consumer(leaf) == kNone) continue;  // the root of the one-edge tree
        EdgeSet path = 0;
        EdgeId e = leaf;
        while (t.consumer(e) != kNone) {
            path |= bit(e);
            if ((path & ~a) != 0) break;
            const auto& v = t.vertex(t.consumer(e));
            if ((t.edges_above(v.output) & ~a) != 0) return false;
            e = v.output;
        }
    }
    return true;
}

Forest BoundaryForest::trees(const Tree& t) const {
    Forest out;
    for (const auto& f : parts) out.push_back(face_shape(t, f).tree);
    return out;
}

BoundaryForest boundary_forest(const Tree& t, EdgeSet a, std::mt19937* rng) {
    if (a & ~t.all_edges()) throw DendroError("edge set is not contained in the tree");
    if (!is_admissible(t, a)) throw DendroError("edge set is not admissible");
    BoundaryForest out;
    std::vector<Face> comps{identity_face(t)};
    enum Kind { kRoot, kLeaf, kInner };
    struct Step {
        Kind kind;
        std::size_t comp;
        EdgeId edge;
    };
    for (;;) {
        std::vector<Step> steps;
        bool remaining = false;
        std::vector<FaceStructure> structs;
        for (std::size_t k = 0; k < comps.size(); ++k) {
            structs.push_back(require_structure(t, comps[k]));
            const auto& fs = structs.back();
            EdgeSet ak = a & comps[k].edges;
            if (!ak) continue;
            remaining = true;
            if (ak & bit(fs.root)) steps.push_back({kRoot, k, fs.root});
            for (EdgeId e : bits_of(ak)) {
                if (e == fs.root) continue;
                if (fs.is_leaf(e)) {
                    const auto& w = fs.vertices[fs.consumer[e]];
                    if ((above_in_face(fs, w.output).edges & ~a) == 0) steps.push_back({kLeaf, k, e});
                } else {
                    steps.push_back({kInner, k, e});
                }
            }
        }
        if (!remaining) break;
        if (steps.empty()) throw DendroError("edge set is not admissible on an intermediate forest");
        Step s = steps.front();
        if (rng) {
            std::uniform_int_distribution<std::size_t> pick(0, steps.size() - 1);
            s = steps[pick(*rng)];
        } else {
            std::stable_sort(steps.begin(), steps.end(), [](const Step& x, const Step& y) { return x.kind < y.kind; });
            s = steps.front();
        }
        const auto& fs = structs[s.comp];
        Face c = comps[s.comp];
        std::vector<Face> replacement;
        switch (s.kind) {
            case kRoot: {
                auto p = fs.producer[fs.root];
                if (p != kNone) {
                    out.absorbed |= fs.vertices[p].region;
                    for (EdgeId d : fs.vertices[p].inputs) {
                        auto above = above_in_face(fs, d);
                        replacement.push_back(Face{bit(d) | above.edges, above.vertices});
                    }
                }
                break;
            }
            case kLeaf: {
                const auto& w = fs.vertices[fs.consumer[s.edge]];
                auto above = above_in_face(fs, w.output);
                out.pruned |= above.vertices;
                replacement.push_back(Face{c.edges & ~above.edges, c.vertices & ~above.vertices});
                break;
            }
            case kInner:
                replacement.push_back(Face{c.edges & ~bit(s.edge), c.vertices});
                break;
        }
        comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(s.comp));
        comps.insert(comps.end(), replacement.begin(), replacement.end());
    }
    std::sort(comps.begin(), comps.end(), face_less);
    out.parts = std::move(comps);
    return out;
}

Forest sorted_forest(Forest f) {
    std::stable_sort(f.begin(), f.end(),
                     [](const Tree& a, const Tree& b) { return canonical_code(a) < canonical_code(b); });
    return f;
}

bool same_forest(const Forest& a, const Forest& b) {
    if (a.size() != b.size()) return false;
    std::multiset<std::string> x, y;
    for (const auto& t : a) x.insert(canonical_code(t));
    for (const auto& t : b) y.insert(canonical_code(t));
    return x == y;
}

std::vector<AdmissibleSet> all_admissible_sets(const Forest& forest) {
    std::vector<AdmissibleSet> out{{}};
    for (const auto& t : forest) {
        std::vector<EdgeSet> mine;
        const EdgeSet all = t.all_edges();
        for (EdgeSet s = 0;; s = (s - all) & all) {
            if (is_admissible(t, s)) mine.push_back(s);
            if (s == all) break;
        }
        std::vector<AdmissibleSet> next;
        for (const auto& partial : out)
            for (EdgeSet s : mine) {
                auto p = partial;
                p.push_back(s);
                next.push_back(std::move(p));
            }
        out = std::move(next);
    }
    return out;
}

std::optional<Face> join_boundary_face(const Forest& forest, const RootJoin& join, const AdmissibleSet& a,
                                       std::mt19937* rng) {
    if (a.size() != forest.size()) throw DendroError("admissible set does not match the forest");
    Face f;
    for (EdgeId c : join.chain) f.edges |= bit(c);
    f.vertices |= bit(join.apex);
    for (VertexId v : join.chain_vertices) f.vertices |= bit(v);
    // member vertices sit after the apex and chain vertices, in order
    VertexId offset = static_cast<VertexId>(1 + join.chain_vertices.size());
    Forest parts;
    for (std::size_t i = 0; i < forest.size(); ++i) {
        const auto& t = forest[i];
        auto bf = boundary_forest(t, a[i], rng);
        for (const auto& p : bf.parts) {
            for (EdgeId e : bits_of(p.edges)) f.edges |= bit(join.tree_maps[i][e]);
            for (int v : bits_of(p.vertices)) f.vertices |= bit(offset + v);
            parts.push_back(face_shape(t, p).tree);
        }
        for (int v : bits_of(bf.absorbed)) f.vertices |= bit(offset + v);
        offset += static_cast<VertexId>(t.vertex_count());
    }
    if (!is_face(join.tree, f)) return std::nullopt;
    auto expected = forest_star(parts, static_cast<int>(join.chain.size()) - 1);
    if (canonical_code(face_shape(join.tree, f).tree) != canonical_code(expected.tree)) return std::nullopt;
    return f;
}

LeafJoin leaf_star(int n, const Tree& t, EdgeId e) {
    if (n < 0) throw DendroError("leaf_star needs n >= 0");
    if (e < 0 || e >= static_cast<EdgeId>(t.edge_count()) || !t.is_leaf(e))
        throw DendroError("leaf_star: edge is not a leaf");
    LeafJoin out;
    std::vector<std::string> names = t.names();
    std::set<std::string> used(names.begin(), names.end());
    const auto base = static_cast<EdgeId>(names.size());
    out.tree_map.resize(t.edge_count());
    for (EdgeId i = 0; i < base; ++i) out.tree_map[i] = i;
    for (int j = 0; j <= n; ++j) {
        out.chain.push_back(static_cast<EdgeId>(names.size()));
        names.push_back(fresh(std::to_string(j), used));
    }
    std::vector<Vertex> vs = t.vertices();
    out.link = static_cast<VertexId>(vs.size());
    vs.push_back(Vertex{e, {out.chain[n]}});
    for (int j = 0; j < n; ++j) {
        out.chain_vertices.push_back(static_cast<VertexId>(vs.size()));
        vs.push_back(Vertex{out.chain[j + 1], {out.chain[j]}});
    }
    out.tree = Tree(std::move(names), std::move(vs));
    return out;
}

std::vector<Face> e_admissible_faces(const Tree& t, EdgeId e) {
    if (e < 0 || e >= static_cast<EdgeId>(t.edge_count()) || !t.is_leaf(e))
        throw DendroError("e_admissible_faces: edge is not a leaf");
    std::vector<Face> out;
    for (const auto& f : all_faces(t))
        if (f.edges & bit(e)) out.push_back(f);
    return out;
}

Face leaf_join_face(const LeafJoin& join, const Face& r) {
    Face f;
    for (int e : bits_of(r.edges)) f.edges |= bit(join.tree_map.at(e));
    f.vertices = r.vertices;  // T vertices keep their indices
    for (EdgeId c : join.chain) f.edges |= bit(c);
    f.vertices |= bit(join.link);
    for (VertexId v : join.chain_vertices) f.vertices |= bit(v);
    return f;
}

std::optional<UnaryTopSplit> unary_top_decomposition(const Tree& s, EdgeId vertex_output) {
    if (s.vertex_count() < 2) return std::nullopt;
    VertexId w = s.producer(vertex_output);
    if (w == kNone) return std::nullopt;
    const auto& v = s.vertex(w);
    if (v.inputs.size() != 1 || !s.is_leaf(v.inputs[0])) return std::nullopt;
    Face rest{s.all_edges() & ~bit(v.inputs[0]), s.all_vertices() & ~bit(w)};
    auto shape = face_shape(s, rest);
    UnaryTopSplit out{shape.tree, kNone};
    for (EdgeId e = 0; e < static_cast<EdgeId>(shape.to_host.size()); ++e)
        if (shape.to_host[e] == vertex_output) out.leaf = e;
    return out;
}

}  // namespace dendro
