#include "dendro/face.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace dendro {

bool face_less(const Face& a, const Face& b) {
    int ea = popcount(a.edges), eb = popcount(b.edges);
    if (ea != eb) return ea < eb;
    int va = popcount(a.vertices), vb = popcount(b.vertices);
    if (va != vb) return va < vb;
    if (a.edges != b.edges) return a.edges < b.edges;
    return a.vertices < b.vertices;
}

namespace {

int depth_of(const Tree& t, EdgeId e) {
    int d = 0;
    while (t.consumer(e) != kNone) {
        e = t.vertex(t.consumer(e)).output;
        ++d;
    }
    return d;
}

}  // namespace

std::optional<FaceStructure> face_structure(const Tree& host, const Face& f) {
    const auto n = static_cast<EdgeId>(host.edge_count());
    if (f.edges == 0 || (f.edges & ~host.all_edges()) || (f.vertices & ~host.all_vertices()))
        return std::nullopt;
    FaceStructure fs;
    fs.producer.assign(n, kNone);
    fs.consumer.assign(n, kNone);
    int best = 1 << 30;
    for (EdgeId e : bits_of(f.edges)) {
        int d = depth_of(host, e);
        if (d < best) {
            best = d;
            fs.root = e;
        }
    }
    EdgeSet seen_edges = 0;
    VertexSet seen_vertices = 0;
    std::vector<EdgeId> todo{fs.root};
    while (!todo.empty()) {
        EdgeId g = todo.back();
        todo.pop_back();
        if (seen_edges & bit(g)) return std::nullopt;
        seen_edges |= bit(g);
        VertexId u = host.producer(g);
        if (u == kNone || !(f.vertices & bit(u))) continue;
        FaceVertex fv;
        fv.output = g;
        // walk the region above g: host vertices reached through contracted edges
        bool ok = true;
        std::vector<VertexId> stack{u};
        std::vector<EdgeId> ins;
        // depth-first in host input order
        std::function<void(VertexId)> walk = [&](VertexId w) {
            if (seen_vertices & bit(w)) {
                ok = false;
                return;
            }
            seen_vertices |= bit(w);
            fv.region |= bit(w);
            for (EdgeId c : host.vertex(w).inputs) {
                if (f.edges & bit(c)) {
                    ins.push_back(c);
                } else {
                    VertexId p = host.producer(c);
                    if (p == kNone || !(f.vertices & bit(p))) {
                        ok = false;
                        return;
                    }
                    walk(p);
                    if (!ok) return;
                }
            }
        };
        walk(u);
        if (!ok) return std::nullopt;
        fv.inputs = ins;
        auto idx = static_cast<std::int32_t>(fs.vertices.size());
        fs.producer[g] = idx;
        for (EdgeId c : ins) fs.consumer[c] = idx;
        fs.vertices.push_back(std::move(fv));
        for (auto it = ins.rbegin(); it != ins.rend(); ++it) todo.push_back(*it);
    }
    if (seen_edges != f.edges || seen_vertices != f.vertices) return std::nullopt;
    return fs;
}

bool is_face(const Tree& host, const Face& f) { return face_structure(host, f).has_value(); }

FaceStructure require_structure(const Tree& host, const Face& f) {
    auto fs = face_structure(host, f);
    if (!fs) throw DendroError("not a face of the host tree");
    return std::move(*fs);
}

FaceShape face_shape(const Tree& host, const Face& f) {
    FaceStructure fs = require_structure(host, f);
    FaceShape out;
    std::vector<std::string> names;
    std::vector<Vertex> vs;
    std::vector<EdgeId> local(host.edge_count(), kNone);
    std::function<EdgeId(EdgeId)> build = [&](EdgeId g) -> EdgeId {
        EdgeId me = static_cast<EdgeId>(names.size());
        local[g] = me;
        names.push_back(host.name(g));
        out.to_host.push_back(g);
        auto p = fs.producer[g];
        if (p == kNone) return me;
        std::size_t slot = vs.size();
        vs.push_back(Vertex{me, {}});
        out.region.push_back(fs.vertices[p].region);
        std::vector<EdgeId> ins;
        for (EdgeId c : fs.vertices[p].inputs) ins.push_back(build(c));
        vs[slot].inputs = std::move(ins);
        return me;
    };
    build(fs.root);
    out.tree = Tree(std::move(names), std::move(vs));
    return out;
}

Face face_to_host(const FaceShape& shape, const Face& g) {
    Face out;
    for (int e : bits_of(g.edges)) out.edges |= bit(shape.to_host.at(e));
    for (int v : bits_of(g.vertices)) out.vertices |= shape.region.at(v);
    return out;
}

namespace {

struct Outer {
    EdgeSet edges;
    VertexSet vertices;
    EdgeSet inner;
};

void outer_subtrees(const FaceStructure& fs, EdgeId r, std::vector<Outer>& out) {
    out.push_back({bit(r), 0, 0});
    auto p = fs.producer[r];
    if (p == kNone) return;
    const auto& fv = fs.vertices[p];
    std::vector<Outer> acc{{bit(r), fv.region, 0}};
    for (EdgeId c : fv.inputs) {
        std::vector<Outer> sub;
        outer_subtrees(fs, c, sub);
        std::vector<Outer> next;
        next.reserve(acc.size() * sub.size());
        for (const auto& a : acc)
            for (const auto& s : sub) {
                EdgeSet inner = a.inner | s.inner;
                if (s.vertices) inner |= bit(c);
                next.push_back({a.edges | s.edges, a.vertices | s.vertices, inner});
            }
        acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
}

}  // namespace

void for_each_subface(const Tree& host, const Face& f, const std::function<void(const Face&)>& fn) {
    FaceStructure fs = require_structure(host, f);
    for (EdgeId r : bits_of(f.edges)) {
        std::vector<Outer> outs;
        outer_subtrees(fs, r, outs);
        for (const auto& o : outs) {
            // every subset of the inner edges may be contracted
            EdgeSet sub = o.inner;
            for (;;) {
                fn(Face{o.edges & ~sub, o.vertices});
                if (sub == 0) break;
                sub = (sub - 1) & o.inner;
            }
        }
    }
}

std::vector<Face> subfaces(const Tree& host, const Face& f) {
    std::vector<Face> out;
    for_each_subface(host, f, [&](const Face& g) { out.push_back(g); });
    std::sort(out.begin(), out.end(), face_less);
    return out;
}

std::vector<Face> all_faces(const Tree& host) { return subfaces(host, identity_face(host)); }

std::vector<ElementaryFace> elementary_faces(const Tree& host, const Face& f) {
    FaceStructure fs = require_structure(host, f);
    std::vector<ElementaryFace> out;
    const auto nv = fs.vertices.size();
    if (nv == 0) return out;
    for (EdgeId e : bits_of(f.edges))
        if (fs.is_inner(e)) out.push_back({Face{f.edges & ~bit(e), f.vertices}, FaceKind::inner, e, kNone, false});
    if (nv == 1) {
        for (EdgeId e : bits_of(f.edges))
            out.push_back({Face{bit(e), 0}, FaceKind::outer, e, 0, e == fs.root});
        return out;
    }
    for (std::int32_t w = 0; w < static_cast<std::int32_t>(nv); ++w) {
        const auto& fv = fs.vertices[w];
        if (fv.output == fs.root) continue;
        bool top = std::all_of(fv.inputs.begin(), fv.inputs.end(), [&](EdgeId c) { return fs.is_leaf(c); });
        if (!top) continue;
        EdgeSet ins = 0;
        for (EdgeId c : fv.inputs) ins |= bit(c);
        out.push_back({Face{f.edges & ~ins, f.vertices & ~fv.region}, FaceKind::outer, kNone, w, true});
    }
    auto w0 = fs.producer[fs.root];
    const auto& rv = fs.vertices[w0];
    int non_leaf = 0;
    EdgeSet leaves = 0;
    for (EdgeId c : rv.inputs) {
        if (fs.is_leaf(c))
            leaves |= bit(c);
        else
            ++non_leaf;
    }
    if (non_leaf == 1)
        out.push_back({Face{f.edges & ~(leaves | bit(fs.root)), f.vertices & ~rv.region}, FaceKind::outer, kNone,
                       w0, false});
    return out;
}

std::vector<ElementaryFace> elementary_faces(const Tree& t) { return elementary_faces(t, identity_face(t)); }

const char* horn_kind_name(HornKind k) {
    switch (k) {
        case HornKind::inner: return "inner";
        case HornKind::end: return "end";
        case HornKind::root: return "root";
    }
    return "?";
}

std::optional<HornKind> parse_horn_kind(std::string_view s) {
    if (s == "inner") return HornKind::inner;
    if (s == "end") return HornKind::end;
    if (s == "root") return HornKind::root;
    return std::nullopt;
}

std::optional<Face> horn_missing_face(const Tree& host, const Face& f, const HornSpec& spec) {
    auto fso = face_structure(host, f);
    if (!fso) return std::nullopt;
    const auto& fs = *fso;
    if (spec.marker < 0 || spec.marker >= static_cast<EdgeId>(host.edge_count()) || !(f.edges & bit(spec.marker)))
        return std::nullopt;
    switch (spec.kind) {
        case HornKind::inner:
            if (!fs.is_inner(spec.marker)) return std::nullopt;
            return Face{f.edges & ~bit(spec.marker), f.vertices};
        case HornKind::end: {
            auto w = fs.producer[spec.marker];
            if (w == kNone) return std::nullopt;
            const auto& fv = fs.vertices[w];
            if (fv.inputs.size() != 1 || !fs.is_leaf(fv.inputs[0])) return std::nullopt;
            return Face{f.edges & ~bit(fv.inputs[0]), f.vertices & ~fv.region};
        }
        case HornKind::root: {
            if (spec.marker != fs.root) return std::nullopt;
            auto w = fs.producer[fs.root];
            if (w == kNone) return std::nullopt;
            const auto& fv = fs.vertices[w];
            if (fv.inputs.size() != 1) return std::nullopt;
            if (fs.vertices.size() > 1 && fs.is_leaf(fv.inputs[0])) return std::nullopt;
            return Face{f.edges & ~bit(fs.root), f.vertices & ~fv.region};
        }
    }
    return std::nullopt;
}

std::vector<Face> horn_generators(const Tree& host, const Face& f, const HornSpec& spec) {
    auto missing = horn_missing_face(host, f, spec);
    if (!missing) throw DendroError("marker does not define a horn of this kind");
    std::vector<Face> out;
    bool found = false;
    for (const auto& ef : elementary_faces(host, f)) {
        if (ef.face == *missing) {
            found = true;
            continue;
        }
        out.push_back(ef.face);
    }
    if (!found) throw DendroError("missing face is not elementary");
    return out;
}

Subcomplex::Subcomplex(std::shared_ptr<const Tree> host) : host_(std::move(host)) {}

Subcomplex Subcomplex::closure(std::shared_ptr<const Tree> host, const std::vector<Face>& generators) {
    Subcomplex out(host);
    std::unordered_set<Face, FaceHash> seen;
    for (const auto& g : generators) for_each_subface(*host, g, [&](const Face& f) { seen.insert(f); });
    out.faces_.assign(seen.begin(), seen.end());
    std::sort(out.faces_.begin(), out.faces_.end(), face_less);
    return out;
}

Subcomplex Subcomplex::full(std::shared_ptr<const Tree> host) {
    Subcomplex out(host);
    out.faces_ = all_faces(*out.host_);
    return out;
}

bool Subcomplex::contains(const Face& f) const {
    return std::binary_search(faces_.begin(), faces_.end(), f, face_less);
}

bool Subcomplex::is_closed() const {
    for (const auto& f : faces_) {
        bool ok = true;
        for_each_subface(*host_, f, [&](const Face& g) { ok = ok && contains(g); });
        if (!ok) return false;
    }
    return true;
}

std::vector<Face> Subcomplex::generators() const {
    std::vector<Face> out;
    for (const auto& f : faces_) {
        bool maximal = true;
        for (const auto& g : faces_)
            if (!(g == f) && is_subface(f, g)) {
                maximal = false;
                break;
            }
        if (maximal) out.push_back(f);
    }
    return out;
}

void Subcomplex::check_host(const Subcomplex& other) const {
    if (!host_ || !other.host_ || !(*host_ == *other.host_))
        throw DendroError("subcomplexes live over different hosts");
}

Subcomplex Subcomplex::unite(const Subcomplex& other) const {
    check_host(other);
    Subcomplex out(host_);
    std::set_union(faces_.begin(), faces_.end(), other.faces_.begin(), other.faces_.end(),
                   std::back_inserter(out.faces_), face_less);
    return out;
}

Subcomplex Subcomplex::intersect(const Subcomplex& other) const {
    check_host(other);
    Subcomplex out(host_);
    std::set_intersection(faces_.begin(), faces_.end(), other.faces_.begin(), other.faces_.end(),
                          std::back_inserter(out.faces_), face_less);
    return out;
}

bool Subcomplex::subset_of(const Subcomplex& other) const {
    check_host(other);
    return std::includes(other.faces_.begin(), other.faces_.end(), faces_.begin(), faces_.end(), face_less);
}

bool Subcomplex::operator==(const Subcomplex& other) const {
    return host_ && other.host_ && *host_ == *other.host_ && faces_ == other.faces_;
}

Subcomplex boundary(std::shared_ptr<const Tree> t) {
    std::vector<Face> gens;
    for (const auto& ef : elementary_faces(*t)) gens.push_back(ef.face);
    return Subcomplex::closure(t, gens);
}

Subcomplex horn(std::shared_ptr<const Tree> t, const HornSpec& spec) {
    return Subcomplex::closure(t, horn_generators(*t, identity_face(*t), spec));
}

Subcomplex inner_horn(std::shared_ptr<const Tree> t, EdgeId e) { return horn(t, {HornKind::inner, e}); }

Subcomplex end_horn(std::shared_ptr<const Tree> t, EdgeId vertex_output) {
    return horn(t, {HornKind::end, vertex_output});
}

Subcomplex root_horn(std::shared_ptr<const Tree> t) {
    EdgeId r = t->root();
    return horn(t, {HornKind::root, r});
}

std::optional<Face> face_from_named_tree(const Tree& host, const Tree& named) {
    Face f;
    std::vector<EdgeId> to_host(named.edge_count());
    for (EdgeId e = 0; e < static_cast<EdgeId>(named.edge_count()); ++e) {
        auto h = host.find_edge(named.name(e));
        if (!h) return std::nullopt;
        to_host[e] = *h;
        f.edges |= bit(*h);
    }
    for (const auto& v : named.vertices()) {
        EdgeSet ins = 0;
        for (EdgeId c : v.inputs) ins |= bit(to_host[c]);
        std::vector<EdgeId> stack{to_host[v.output]};
        bool first = true;
        while (!stack.empty()) {
            EdgeId g = stack.back();
            stack.pop_back();
            if (!first && (ins & bit(g))) continue;
            if (!first && (f.edges & bit(g))) return std::nullopt;
            first = false;
            VertexId u = host.producer(g);
            if (u == kNone) return std::nullopt;
            f.vertices |= bit(u);
            for (EdgeId c : host.vertex(u).inputs) stack.push_back(c);
        }
    }
    auto fs = face_structure(host, f);
    if (!fs) return std::nullopt;
    // the face must have exactly the named vertices
    if (fs->vertices.size() != named.vertex_count()) return std::nullopt;
    for (const auto& v : named.vertices()) {
        auto w = fs->producer[to_host[v.output]];
        if (w == kNone) return std::nullopt;
        std::vector<EdgeId> a, b = fs->vertices[w].inputs;
        for (EdgeId c : v.inputs) a.push_back(to_host[c]);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }
    return f;
}

}  // namespace dendro
