#include "dendro/anodyne.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dendro {

namespace {

struct SearchState {
    const CellWorld& w;
    const CellSet& target;
    const SearchOptions& opt;
    CellSet cur;
    std::vector<CellId> order;
    std::vector<std::vector<HornSpec>> options;
    std::vector<Builder::Step> steps;
    std::size_t checks = 0;
    bool exhausted = false;
    std::vector<int> missing;                  // per order index: faces not in cur
    std::vector<std::vector<int>> containing;  // per cell: order indices of cells having it as a face

    void index_faces() {
        missing.assign(order.size(), 0);
        containing.assign(w.size(), {});
        for (std::size_t i = 0; i < order.size(); ++i)
            for (CellId g : w.faces_of(order[i])) {
                containing[g].push_back(static_cast<int>(i));
                if (!cur.contains(g)) ++missing[i];
            }
    }
    void add(CellId g) {
        cur.insert(g);
        for (int i : containing[g]) --missing[i];
    }
    void remove(CellId g) {
        cur.erase(g);
        for (int i : containing[g]) ++missing[i];
    }

    // smallest cells first, ties by canonical code of the shape
    void sort_order() {
        std::vector<std::pair<std::string, CellId>> keyed;
        for (CellId c : order) keyed.emplace_back(canonical_code(w.cell_tree(c)), c);
        std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
            const auto& ca = w.cell(a.second);
            const auto& cb = w.cell(b.second);
            if (ca.edges != cb.edges) return ca.edges < cb.edges;
            if (ca.vertices != cb.vertices) return ca.vertices < cb.vertices;
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
        order.clear();
        for (auto& k : keyed) {
            order.push_back(k.second);
            options.push_back(horn_options(w, k.second, opt.kinds));
        }
    }

    bool run() {
        if (cur.size() == target.size()) return true;
        for (std::size_t i = 0; i < order.size(); ++i) {
            CellId c = order[i];
            if (cur.contains(c)) continue;
            // a horn pushout adds exactly two cells: c and its missing face
            if (missing[i] != 2) continue;
            CellId gap = kNone;
            for (CellId g : w.faces_of(c))
                if (g != c && !cur.contains(g)) gap = g;
            const auto& cell = w.cell(c);
            for (const auto& spec : options[i]) {
                auto mf = horn_missing_face(w.scheme(cell.scheme), cell.face, spec);
                if (!mf || w.id(cell.scheme, *mf) != gap) continue;
                if (++checks > opt.budget) {
                    exhausted = true;
                    return false;
                }
                auto label = marker_label(w, c, spec.marker);
                if (check_horn(w, cur, c, spec.kind, label)) continue;
                std::vector<CellId> added;
                for (CellId g : w.faces_of(c))
                    if (!cur.contains(g)) {
                        add(g);
                        added.push_back(g);
                    }
                steps.push_back({c, spec.kind, label, opt.segment});
                if (run()) return true;
                if (exhausted) return false;
                for (CellId g : added) remove(g);
                steps.pop_back();
            }
        }
        return false;
    }
};

}  // namespace

std::optional<std::vector<Builder::Step>> search_steps(const CellWorld& w, const CellSet& start,
                                                       const CellSet& target, const SearchOptions& opt) {
    if (!start.subset_of(target)) throw DendroError("start is not contained in target");
    SearchState st{w, target, opt, start, {}, {}, {}, 0, false, {}, {}};
    for (CellId c : target.members())
        if (!start.contains(c)) st.order.push_back(c);
    st.sort_order();
    st.index_faces();
    if (!st.run()) return std::nullopt;
    return st.steps;
}

SearchResult certify_search(const HostWorld& hw, const CellSet& start, const CellSet& target,
                            const SearchOptions& opt) {
    const CellWorld& w = hw.world();
    if (!start.subset_of(target)) throw DendroError("start is not contained in target");
    SearchState st{w, target, opt, start, {}, {}, {}, 0, false, {}, {}};
    for (CellId c : target.members())
        if (!start.contains(c)) st.order.push_back(c);
    st.sort_order();
    st.index_faces();
    SearchResult r;
    r.found = st.run();
    r.checks = st.checks;
    if (r.found) {
        Builder b(w, start);
        for (const auto& s : st.steps) b.adjoin(s.cell, s.kind, s.marker, s.segment);
        r.certificate = b.certificate(hw.host, start, target);
    }
    return r;
}

namespace {

bool apply_steps(Builder& b, const std::vector<Builder::Step>& steps) {
    for (const auto& s : steps)
        if (!b.adjoin(s.cell, s.kind, s.marker, s.segment)) return false;
    return true;
}

// Characteristic edge step: adjoin every face of R that
// has xi as an inner edge, smallest first, each along its horn at xi.
bool adjoin_characteristic(Builder& b, int k, const Tree& tree, const Face& r, EdgeId xi, const std::string& seg) {
    const CellWorld& w = b.world();
    std::int32_t label = w.scheme_labels(k)[xi];
    for (const auto& f : subfaces(tree, r)) {
        if (!(f.edges & bit(xi))) continue;
        auto fs = face_structure(tree, f);
        if (!fs->is_inner(xi)) continue;
        CellId c = w.id(k, f);
        if (b.current().contains(c)) continue;
        if (!b.adjoin(c, HornKind::inner, label, seg)) return false;
    }
    return b.current().contains(w.id(k, r));
}

bool left_segment(const Tensor& x, Builder& b, int k, const std::string& seg) {
    const auto& sc = x.schemes[k];
    const Tree& tree = sc.tree;
    // spines with the edge just below their black vertex
    std::vector<std::pair<Face, EdgeId>> sp;
    {
        auto faces = spines(x, k);
        std::size_t idx = 0;
        for (VertexId v = 0; v < static_cast<VertexId>(tree.vertex_count()); ++v)
            if (sc.black[v]) sp.emplace_back(faces[idx++], tree.vertex(v).output);
    }
    struct Seg {
        Face f;
        int spines;
    };
    std::vector<Seg> segs;
    for (const auto& f : initial_segments(tree)) {
        int n = 0;
        for (const auto& [s, xi] : sp)
            if (is_subface(s, f)) ++n;
        if (n > 0) segs.push_back({f, n});
    }
    std::stable_sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b2) {
        if (a.spines != b2.spines) return a.spines < b2.spines;
        return face_less(a.f, b2.f);
    });
    const CellWorld& w = b.world();
    for (const auto& s : segs) {
        CellId c = w.id(k, s.f);
        if (b.current().contains(c)) continue;
        bool done = false;
        for (const auto& [spine, xi] : sp) {
            if (!is_subface(spine, s.f)) continue;
            auto m = b.mark();
            if (adjoin_characteristic(b, k, tree, s.f, xi, seg)) {
                done = true;
                break;
            }
            b.rollback(m);
        }
        if (!done) return false;
    }
    return b.current().contains(x.cell(k));
}

Tree interval() { return linear_tree(1); }

}  // namespace

FiltrationReport left_cylinder_filtration(const Tree& s) {
    if (s.vertex_count() == 0) throw DendroError("the tree needs at least one vertex");
    FiltrationReport r;
    auto x = std::make_shared<const Tensor>(tensor(s, interval()));
    r.host = tensor_world(x);
    const CellWorld& w = x->world;
    r.start = a0_left(*x);
    r.target = whole(*x);
    const int n = x->size();
    r.segments = n;
    Builder b(w, r.start);
    r.inner_segments = true;
    for (int k = 0; k + 1 < n; ++k) {
        std::string seg = "A" + std::to_string(k + 1);
        if (b.current().contains(x->cell(k))) {
            ++r.skipped;
            continue;
        }
        auto m = b.mark();
        if (left_segment(*x, b, k, seg)) continue;
        b.rollback(m);
        SearchOptions opt;
        opt.segment = seg;
        auto goal = b.current().unite(scheme_closure(*x, k));
        auto found = search_steps(w, b.current(), goal, opt);
        if (!found || !apply_steps(b, *found)) {
            r.inner_segments = false;
            r.message = "no inner certificate for segment " + seg;
            r.certificate = b.certificate(r.host.host, r.start, r.target);
            return r;
        }
        ++r.fallbacks;
    }
    // last scheme: a black unary root vertex under the white copy of S
    const int last = n - 1;
    const Tree& tl = x->schemes[last].tree;
    VertexId root_v = tl.root_vertex();
    EdgeId root = tl.root();
    bool shape_ok = root_v != kNone && x->schemes[last].black[root_v] && tl.vertex(root_v).inputs.size() == 1;
    std::string seg = "A" + std::to_string(n);
    auto why = b.check(x->cell(last), HornKind::root, w.scheme_labels(last)[root]);
    r.final_pushout = shape_ok && !why;
    if (r.final_pushout) b.adjoin(x->cell(last), HornKind::root, w.scheme_labels(last)[root], seg);
    if (shape_ok) {
        Face arrow{bit(root) | bit(tl.vertex(root_v).inputs[0]), bit(root_v)};
        CellId here = w.id(last, arrow);
        auto exit = tensor_image(*x, Tree::eta(s.name(s.root())), interval());
        auto gens = maximal_cells(w, exit);
        r.exit_edge = gens.size() == 1 && gens[0] == here;
    }
    r.certificate = b.certificate(r.host.host, r.start, r.target);
    bool complete = b.current() == r.target;
    r.ok = r.inner_segments && r.final_pushout && r.exit_edge && complete;
    if (!r.final_pushout)
        r.message = "last scheme does not attach along its root horn" + (why ? ": " + *why : std::string());
    else if (!r.exit_edge)
        r.message = "root edge of the last scheme is not {e_S} x Delta[1]";
    else if (!complete)
        r.message = "filtration does not exhaust the cylinder";
    else
        r.message = "ok";
    return r;
}

namespace {

struct WhiteArrow {
    VertexId vertex;
    EdgeId out;  // (1,e)
    EdgeId in;   // (0,e)
    EdgeId colour;  // e
};

bool right_segment(const Tensor& x, Builder& b, int k, VertexId through, const std::string& seg,
                   FiltrationReport& r) {
    const CellWorld& w = b.world();
    const auto& sc = x.schemes[k];
    const Tree& tree = sc.tree;
    const Tree& T = x.T;
    std::vector<WhiteArrow> e_set;
    for (VertexId v = 0; v < static_cast<VertexId>(tree.vertex_count()); ++v) {
        if (sc.black[v]) continue;
        const auto& vx = tree.vertex(v);
        if (vx.inputs.size() != 1) continue;
        e_set.push_back({v, vx.output, vx.inputs[0], sc.label[vx.output].second});
    }
    const auto& xin = T.vertex(through).inputs;
    auto is_input = [&](EdgeId e) { return std::find(xin.begin(), xin.end(), e) != xin.end(); };
    const int m = static_cast<int>(e_set.size());
    std::vector<std::uint32_t> us;
    for (std::uint32_t u = 1; u < (1u << m); ++u) {
        bool meets = false;
        for (int i = 0; i < m; ++i)
            if ((u >> i & 1) && is_input(e_set[i].colour)) meets = true;
        if (meets) us.push_back(u);
    }
    std::stable_sort(us.begin(), us.end(), [](std::uint32_t a, std::uint32_t c) {
        if (std::popcount(a) != std::popcount(c)) return std::popcount(a) < std::popcount(c);
        return a < c;
    });
    for (std::uint32_t u : us) {
        Face fu = identity_face(tree);
        for (int i = 0; i < m; ++i)
            if (!(u >> i & 1)) fu.edges &= ~bit(e_set[i].out);
        int a1 = -1;
        std::vector<int> rest;
        for (int i = 0; i < m; ++i) {
            if (!(u >> i & 1)) continue;
            if (a1 < 0 && is_input(e_set[i].colour))
                a1 = i;
            else
                rest.push_back(i);
        }
        const int nr = static_cast<int>(rest.size());
        std::vector<std::uint32_t> qs;
        for (std::uint32_t q = 0; q < (1u << nr); ++q) qs.push_back(q);
        std::stable_sort(qs.begin(), qs.end(), [](std::uint32_t a, std::uint32_t c) {
            if (std::popcount(a) != std::popcount(c)) return std::popcount(a) < std::popcount(c);
            return a < c;
        });
        for (std::uint32_t q : qs) {
            Face f = fu;
            for (int j = 0; j < nr; ++j) {
                if (q >> j & 1) continue;
                const auto& wa = e_set[rest[j]];
                f.edges &= ~bit(wa.in);
                if (tree.producer(wa.in) == kNone) f.vertices &= ~bit(wa.vertex);
            }
            if (!is_face(tree, f)) return false;
            CellId c = w.id(k, f);
            if (b.current().contains(c)) continue;
            const auto& alpha = e_set[a1];
            bool inner = tree.producer(alpha.in) != kNone;
            HornKind kind = inner ? HornKind::inner : HornKind::end;
            EdgeId marker = inner ? alpha.in : alpha.out;
            if (!b.adjoin(c, kind, w.scheme_labels(k)[marker], seg)) return false;
            if (!inner) {
                // (i) at least two vertices with a unary top vertex; (ii) its arrow is Delta[1] x {alpha}
                auto fs = require_structure(tree, f);
                bool one = fs.vertices.size() >= 2;
                Face arrow{bit(alpha.out) | bit(alpha.in), bit(alpha.vertex)};
                auto img = maximal_cells(w, tensor_image(x, interval(), Tree::eta(T.name(alpha.colour))));
                bool two = img.size() == 1 && img[0] == w.id(k, arrow);
                if (!one || !two) r.end_clauses = false;
            }
        }
    }
    return b.current().contains(x.cell(k));
}

}  // namespace

FiltrationReport right_cylinder_filtration(const Tree& t) {
    if (t.vertex_count() == 0) throw DendroError("the tree needs at least one vertex");
    FiltrationReport r;
    auto x = std::make_shared<const Tensor>(tensor(interval(), t));
    r.host = tensor_world(x);
    const CellWorld& w = x->world;
    r.start = b0_right(*x);
    r.target = whole(*x);
    const int n = x->size();
    r.segments = n;
    r.end_clauses = true;
    Builder b(w, r.start);
    const Tree& S = x->S;
    EdgeId s0 = S.edge("0");
    EdgeId r_edge = x->edge_of(0, s0, t.root());
    auto why = b.check(x->cell(0), HornKind::inner, w.scheme_labels(0)[r_edge]);
    r.first_segment = !why;
    if (!r.first_segment) {
        r.message = "Omega[T_1] does not meet B_0 in the horn at (0,r): " + *why;
        r.certificate = b.certificate(r.host.host, r.start, r.target);
        return r;
    }
    b.adjoin(x->cell(0), HornKind::inner, w.scheme_labels(0)[r_edge], "C1");
    for (int k = 1; k < n; ++k) {
        std::string seg = "C" + std::to_string(k + 1);
        bool nullary_only = true;
        bool done = false;
        for (const auto& mv : x->moves) {
            if (mv.to != k) continue;
            if (t.vertex(mv.black).inputs.empty()) continue;
            nullary_only = false;
            auto m = b.mark();
            if (right_segment(*x, b, k, mv.black, seg, r)) {
                done = true;
                break;
            }
            b.rollback(m);
        }
        if (done) continue;
        if (b.current().contains(x->cell(k))) {
            ++r.skipped;
            continue;
        }
        SearchOptions opt;
        opt.kinds = {HornKind::inner, HornKind::end};
        opt.segment = seg;
        auto goal = b.current().unite(scheme_closure(*x, k));
        auto found = search_steps(w, b.current(), goal, opt);
        if (!found || !apply_steps(b, *found)) {
            r.message = "no inner or end certificate for segment " + seg + (nullary_only ? " (nullary move)" : "");
            r.certificate = b.certificate(r.host.host, r.start, r.target);
            return r;
        }
        ++r.fallbacks;
    }
    r.certificate = b.certificate(r.host.host, r.start, r.target);
    r.only_inner_or_end = std::all_of(b.steps().begin(), b.steps().end(), [](const Builder::Step& s) {
        return s.kind == HornKind::inner || s.kind == HornKind::end;
    });
    bool complete = b.current() == r.target;
    r.inner_segments = complete;
    r.ok = complete && r.only_inner_or_end && r.end_clauses && r.first_segment;
    r.message = r.ok ? "ok" : (!complete ? "filtration does not exhaust the cylinder" : "an end step violates (i) or (ii)");
    return r;
}

JoinPair join_pair(const Forest& forest, int n, int i, const std::vector<AdmissibleSet>& admissibles) {
    if (n < 1 || i < 0 || i >= n) throw DendroError("need n >= 1 and 0 <= i < n");
    if (admissibles.empty()) throw DendroError("need at least one admissible set");
    RootJoin j = forest_star(forest, n);
    JoinPair p;
    p.host = representable_world(j.tree);
    const CellWorld& w = p.host.world();
    std::vector<CellId> dg, cg;
    Face chain{0, 0};
    for (EdgeId e : j.chain) chain.edges |= bit(e);
    for (VertexId v : j.chain_vertices) chain.vertices |= bit(v);
    cg.push_back(w.id(0, chain));
    for (const auto& a : admissibles) {
        if (a.size() != forest.size()) throw DendroError("admissible set does not match the forest");
        auto f = join_boundary_face(forest, j, a);
        if (!f) {
            ++p.unrealizable;
            continue;
        }
        dg.push_back(w.id(0, *f));
        for (int d = 0; d <= n; ++d) {
            if (d == i) continue;
            Face g = *f;
            if (d < n) {
                g.edges &= ~bit(j.chain[d]);
            } else {
                g.edges &= ~bit(j.chain[n]);
                g.vertices &= ~bit(j.chain_vertices[n - 1]);
            }
            cg.push_back(w.id(0, g));
        }
    }
    if (dg.empty()) throw DendroError("no admissible set gives a face of the join");
    p.target = close_cells(w, dg);
    p.start = close_cells(w, cg);
    return p;
}

JoinPair leaf_join_pair(const Tree& t, EdgeId e, int n, int i, const std::vector<Face>& faces) {
    if (n < 1 || i < 1 || i > n) throw DendroError("need n >= 1 and 0 < i <= n");
    if (faces.empty()) throw DendroError("need at least one face");
    LeafJoin j = leaf_star(n, t, e);
    JoinPair p;
    p.host = representable_world(j.tree);
    const CellWorld& w = p.host.world();
    Face chain{0, 0};
    for (EdgeId c : j.chain) chain.edges |= bit(c);
    for (VertexId v : j.chain_vertices) chain.vertices |= bit(v);
    std::vector<CellId> dg, cg{w.id(0, chain)};
    for (const auto& rf : faces) {
        if (!is_face(t, rf) || !(rf.edges & bit(e))) throw DendroError("face does not retain the leaf");
        Face g = leaf_join_face(j, rf);
        dg.push_back(w.id(0, g));
        for (int d = 0; d <= n; ++d) {
            if (d == i) continue;
            Face h = g;
            h.edges &= ~bit(j.chain[d]);
            if (d == 0) h.vertices &= ~bit(j.chain_vertices[0]);
            cg.push_back(w.id(0, h));
        }
    }
    p.target = close_cells(w, dg);
    p.start = close_cells(w, cg);
    return p;
}

namespace {

// Adjoin the grouped faces in order of p, each along the inner horn at the
// chain edge. Faces of F that are no join of a face (those contracting the
// grafting edge, say) are adjoined first, along the same horn.
void run_groups(FiltrationReport& r, Builder& b, const Tree& host,
                const std::map<int, std::vector<std::pair<Face, CellId>>>& groups, EdgeId chain_edge) {
    const CellWorld& w = b.world();
    std::int32_t marker = w.scheme_labels(0)[chain_edge];
    r.inner_segments = true;
    for (const auto& [p, fs] : groups) {
        ++r.segments;
        std::string seg = "C" + std::to_string(p);
        for (const auto& [f, c] : fs) {
            if (b.current().contains(c)) {
                ++r.skipped;
                continue;
            }
            for (const auto& g : subfaces(host, f)) {
                if (g == f || !(g.edges & bit(chain_edge))) continue;
                if (!require_structure(host, g).is_inner(chain_edge)) continue;
                CellId gc = w.id(0, g);
                if (b.current().contains(gc)) continue;
                if (b.check(gc, HornKind::inner, marker)) continue;
                b.adjoin(gc, HornKind::inner, marker, seg);
                ++r.fallbacks;
            }
            if (auto why = b.check(c, HornKind::inner, marker)) {
                r.inner_segments = false;
                r.ok = false;
                r.message = "face " + w.describe(c) + " does not attach along its inner horn: " + *why;
                return;
            }
            b.adjoin(c, HornKind::inner, marker, seg);
        }
    }
    bool complete = b.current() == r.target;
    r.ok = complete;
    r.message = complete ? "ok" : "filtration does not reach the target";
}

}  // namespace

FiltrationReport join_filtration(const Forest& forest, int n, int i, const std::vector<AdmissibleSet>& admissibles) {
    FiltrationReport r;
    auto p = join_pair(forest, n, i, admissibles);
    r.host = p.host;
    r.start = p.start;
    r.target = p.target;
    r.skipped = p.unrealizable;
    RootJoin j = forest_star(forest, n);
    const CellWorld& w = r.host.world();
    std::map<int, std::vector<std::pair<Face, CellId>>> groups;
    std::set<CellId> seen;
    for (const auto& a : all_admissible_sets(forest)) {
        auto f = join_boundary_face(forest, j, a);
        if (!f) continue;
        CellId c = w.id(0, *f);
        if (!r.target.contains(c) || r.start.contains(c) || !seen.insert(c).second) continue;
        groups[popcount(f->edges) - (n + 1)].emplace_back(*f, c);
    }
    for (auto& [k, v] : groups)
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return face_less(a.first, b.first); });
    Builder b(w, r.start);
    run_groups(r, b, j.tree, groups, j.chain[i]);
    r.certificate = b.certificate(r.host.host, r.start, r.target);
    return r;
}

FiltrationReport leaf_join_filtration(const Tree& t, EdgeId e, int n, int i, const std::vector<Face>& faces) {
    FiltrationReport r;
    auto p = leaf_join_pair(t, e, n, i, faces);
    r.host = p.host;
    r.start = p.start;
    r.target = p.target;
    LeafJoin j = leaf_star(n, t, e);
    const CellWorld& w = r.host.world();
    std::map<int, std::vector<std::pair<Face, CellId>>> groups;
    std::set<CellId> seen;
    for (const auto& rf : e_admissible_faces(t, e)) {
        Face g = leaf_join_face(j, rf);
        CellId c = w.id(0, g);
        if (!r.target.contains(c) || r.start.contains(c) || !seen.insert(c).second) continue;
        groups[popcount(rf.edges)].emplace_back(g, c);
    }
    for (auto& [k, v] : groups)
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return face_less(a.first, b.first); });
    Builder b(w, r.start);
    run_groups(r, b, j.tree, groups, j.chain[i]);
    r.certificate = b.certificate(r.host.host, r.start, r.target);
    return r;
}

std::string describe_report(const FiltrationReport& r) {
    std::string out = r.ok ? "ACCEPT" : "REJECT";
    out += " segments=" + std::to_string(r.segments);
    int inner = 0, end = 0, root = 0;
    for (const auto& s : r.certificate.steps) {
        if (s.kind == HornKind::inner) ++inner;
        if (s.kind == HornKind::end) ++end;
        if (s.kind == HornKind::root) ++root;
    }
    if (root > 0 || r.final_pushout) out += std::string(" final=") + (r.final_pushout ? "pushout(Λ^r)" : "none");
    if (!r.ok) out += " reason=\"" + r.message + "\"";
    return out;
}

}  // namespace dendro
