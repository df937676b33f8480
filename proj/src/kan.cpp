#include "dendro/kan.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace dendro {

namespace {

// Corolla data of a 0- or 1-vertex cell, labels of inputs sorted by name.
struct Corolla {
    std::int32_t out = kNone;
    std::vector<std::int32_t> ins;
    int size = 0;  // host vertices composed
};

void sort_by_name(const LabelTable& labels, std::vector<std::int32_t>& v) {
    std::sort(v.begin(), v.end(), [&](auto a, auto b) { return labels.name(a) < labels.name(b); });
}

Corolla corolla_of(const CellWorld& w, const FaceVertex& v, int scheme) {
    const auto& lab = w.scheme_labels(scheme);
    Corolla c;
    c.out = lab[v.output];
    for (EdgeId e : v.inputs) c.ins.push_back(lab[e]);
    sort_by_name(w.labels(), c.ins);
    c.size = popcount(v.region);
    return c;
}

RegionKey key_of(const LabelTable& labels, const Corolla& c) {
    RegionKey k;
    k.output = labels.name(c.out);
    for (auto l : c.ins) k.inputs.push_back(labels.name(l));
    return k;
}

FaceStructure structure_of(const CellWorld& w, CellId c) {
    const auto& cell = w.cell(c);
    return require_structure(w.scheme(cell.scheme), cell.face);
}

// sigma with sigma[j] = position of want[j] in have
template <class T>
Perm reorder(const std::vector<T>& have, const std::vector<T>& want) {
    Perm s;
    for (const auto& x : want) {
        auto it = std::find(have.begin(), have.end(), x);
        if (it == have.end()) throw DendroError("slot orders do not match");
        s.push_back(static_cast<int>(it - have.begin()));
    }
    return s;
}

int max_corolla_arity(const Tree& t) {
    int m = 0;
    for (const auto& f : all_faces(t)) {
        if (popcount(f.vertices) == 0) continue;
        auto fs = require_structure(t, f);
        if (fs.vertices.size() == 1) m = std::max(m, static_cast<int>(fs.vertices[0].inputs.size()));
    }
    return m;
}

class Engine {
public:
    Engine(const DendSet& x, const CellWorld& w, const CellSet& k) : x_(x), p_(x.operad()), w_(w) {
        const auto& labels = w.labels();
        std::map<RegionKey, int> region_index;
        std::vector<char> seen(labels.size(), 0);
        std::vector<CellId> twos;
        for (CellId c : k.members()) {
            const auto& cell = w.cell(c);
            if (cell.vertices == 0) {
                auto l = w.scheme_labels(cell.scheme)[bits_of(cell.face.edges).at(0)];
                if (!seen[l]) label_list_.push_back(l);
                seen[l] = 1;
            } else if (cell.vertices == 1) {
                Corolla co = corolla_of(w, structure_of(w, c).vertices[0], cell.scheme);
                auto key = key_of(labels, co);
                if (region_index.count(key)) continue;
                region_index[key] = static_cast<int>(regions_.size());
                regions_.push_back(co);
                keys_.push_back(key);
            } else if (cell.vertices == 2) {
                twos.push_back(c);
            }
        }
        for (const auto& r : regions_) {
            for (auto l : r.ins)
                if (!seen[l]) label_list_.push_back(l), seen[l] = 1;
            if (!seen[r.out]) label_list_.push_back(r.out), seen[r.out] = 1;
        }
        const std::size_t n = regions_.size();
        splits_of_.resize(n);
        merged_splits_.resize(n);
        for (CellId c : twos) {
            auto fs = structure_of(w, c);
            int sch = w.cell(c).scheme;
            int lo = fs.vertices[0].output == fs.root ? 0 : 1;
            Corolla lower = corolla_of(w, fs.vertices[lo], sch);
            Corolla upper = corolla_of(w, fs.vertices[1 - lo], sch);
            Corolla merged;
            merged.out = lower.out;
            std::vector<std::int32_t> order;
            int slot = -1;
            for (std::size_t i = 0; i < lower.ins.size(); ++i) {
                if (lower.ins[i] == upper.out) {
                    slot = static_cast<int>(i);
                    order.insert(order.end(), upper.ins.begin(), upper.ins.end());
                } else {
                    order.push_back(lower.ins[i]);
                }
            }
            merged.ins = order;
            sort_by_name(labels, merged.ins);
            Split s{region_index.at(key_of(labels, merged)), region_index.at(key_of(labels, lower)),
                    region_index.at(key_of(labels, upper)), slot, reorder(order, merged.ins)};
            int id = static_cast<int>(splits_.size());
            splits_.push_back(std::move(s));
            for (int r : {splits_[id].merged, splits_[id].lower, splits_[id].upper}) splits_of_[r].push_back(id);
            merged_splits_[splits_[id].merged].push_back(id);
        }
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            if (regions_[a].size != regions_[b].size) return regions_[a].size < regions_[b].size;
            return regions_[a].ins.size() < regions_[b].ins.size();
        });
        if (x.backend() != DendSet::Backend::nerve) {
            for (CellId c : maximal_cells(w, k)) {
                MaxCell m;
                m.tree = w.cell_tree(c);
                for (EdgeId e = 0; e < static_cast<EdgeId>(m.tree.edge_count()); ++e)
                    m.edge_label.push_back(*labels.find(m.tree.name(e)));
                for (const auto& v : m.tree.vertices()) {
                    RegionKey key{m.tree.name(v.output), {}};
                    std::vector<std::string> ins;
                    for (EdgeId e : v.inputs) ins.push_back(m.tree.name(e));
                    key.inputs = ins;
                    std::sort(key.inputs.begin(), key.inputs.end());
                    m.vertex.emplace_back(region_index.at(key), reorder(key.inputs, ins));
                }
                maximal_.push_back(std::move(m));
            }
        }
        by_arity_.resize(p_.arity_bound() + 1);
        for (OpId a = 0; a < static_cast<OpId>(p_.op_count()); ++a) by_arity_[p_.op(a).arity()].push_back(a);
    }

    std::vector<NamedMap> run(const MapQuery& q) {
        const auto& labels = w_.labels();
        colour_.assign(labels.size(), kNone);
        op_.assign(regions_.size(), kNone);
        fixed_op_.assign(regions_.size(), kNone);
        base_colour_.assign(labels.size(), kNone);
        base_op_.assign(regions_.size(), kNone);
        over_ = q.base ? q.over : nullptr;
        limit_ = q.limit;
        out_.clear();
        stack_.clear();
        if (over_) {
            for (auto l : label_list_) {
                auto it = q.base->colour.find(labels.name(l));
                if (it == q.base->colour.end()) throw DendroError("base map misses colour " + labels.name(l));
                base_colour_[l] = it->second;
            }
            for (std::size_t r = 0; r < regions_.size(); ++r) {
                auto it = q.base->op.find(keys_[r]);
                if (it == q.base->op.end()) throw DendroError("base map misses a corolla");
                base_op_[r] = it->second;
            }
        }
        if (q.fixed) {
            for (auto l : label_list_) {
                auto it = q.fixed->colour.find(labels.name(l));
                if (it == q.fixed->colour.end()) continue;
                if (it->second < 0 || it->second >= static_cast<ColourId>(p_.colour_count()))
                    throw DendroError("fixed colour out of range");
                if (!set_colour(l, it->second)) return out_;
            }
            for (std::size_t r = 0; r < regions_.size(); ++r) {
                auto it = q.fixed->op.find(keys_[r]);
                if (it == q.fixed->op.end()) continue;
                if (it->second < 0 || it->second >= static_cast<OpId>(p_.op_count()))
                    throw DendroError("fixed operation out of range");
                fixed_op_[r] = it->second;
            }
        }
        if (limit_ > 0) dfs(0);
        return out_;
    }

private:
    struct Split {
        int merged, lower, upper, slot;
        Perm sigma;
    };
    struct MaxCell {
        Tree tree;
        std::vector<std::int32_t> edge_label;
        std::vector<std::pair<int, Perm>> vertex;
    };

    bool set_colour(std::int32_t l, ColourId c) {
        if (colour_[l] != kNone) return colour_[l] == c;
        if (over_ && over_->colour_map.at(c) != base_colour_[l]) return false;
        colour_[l] = c;
        stack_.push_back(l);
        return true;
    }
    void undo_to(std::size_t mark) {
        while (stack_.size() > mark) {
            colour_[stack_.back()] = kNone;
            stack_.pop_back();
        }
    }

    std::optional<OpId> split_value(const Split& s) const {
        auto c = p_.compose(op_[s.lower], s.slot, op_[s.upper]);
        if (!c) return std::nullopt;
        return p_.act(*c, s.sigma);
    }

    bool assign(int r, OpId a) {
        const auto& pr = p_.op(a).profile;
        const auto& reg = regions_[r];
        if (pr.inputs.size() != reg.ins.size()) return false;
        if (over_ && over_->op_map.at(a) != base_op_[r]) return false;
        if (!set_colour(reg.out, pr.output)) return false;
        for (std::size_t j = 0; j < reg.ins.size(); ++j)
            if (!set_colour(reg.ins[j], pr.inputs[j])) return false;
        op_[r] = a;
        for (int s : splits_of_[r]) {
            const auto& sp = splits_[s];
            if (op_[sp.merged] == kNone || op_[sp.lower] == kNone || op_[sp.upper] == kNone) continue;
            auto v = split_value(sp);
            if (!v || *v != op_[sp.merged]) {
                op_[r] = kNone;
                return false;
            }
        }
        return true;
    }

    void dfs(std::size_t i) {
        if (out_.size() >= limit_) return;
        if (i == order_.size()) {
            free_colours(0);
            return;
        }
        const int r = order_[i];
        std::vector<OpId> single;
        const std::vector<OpId>* cands = nullptr;
        if (fixed_op_[r] != kNone) {
            single.push_back(fixed_op_[r]);
            cands = &single;
        } else {
            for (int s : merged_splits_[r]) {
                const auto& sp = splits_[s];
                if (op_[sp.lower] == kNone || op_[sp.upper] == kNone) continue;
                auto v = split_value(sp);
                if (!v) return;
                single.push_back(*v);
                cands = &single;
                break;
            }
            if (!cands) {
                if (regions_[r].ins.size() >= by_arity_.size()) return;
                cands = &by_arity_[regions_[r].ins.size()];
            }
        }
        for (OpId a : *cands) {
            std::size_t mark = stack_.size();
            if (assign(r, a)) {
                dfs(i + 1);
                op_[r] = kNone;
            }
            undo_to(mark);
            if (out_.size() >= limit_) return;
        }
    }

    void free_colours(std::size_t j) {
        if (out_.size() >= limit_) return;
        while (j < label_list_.size() && colour_[label_list_[j]] != kNone) ++j;
        if (j == label_list_.size()) {
            if (admits()) emit();
            return;
        }
        for (ColourId c = 0; c < static_cast<ColourId>(p_.colour_count()); ++c) {
            std::size_t mark = stack_.size();
            if (set_colour(label_list_[j], c)) free_colours(j + 1);
            undo_to(mark);
        }
    }

    bool admits() const {
        for (const auto& m : maximal_) {
            Dendrex d;
            for (auto l : m.edge_label) d.colour.push_back(colour_[l]);
            for (const auto& [r, s] : m.vertex) d.op.push_back(*p_.act(op_[r], s));
            if (!x_.admits(m.tree, d)) return false;
        }
        return true;
    }

    void emit() {
        NamedMap m;
        for (auto l : label_list_) m.colour[w_.labels().name(l)] = colour_[l];
        for (std::size_t r = 0; r < regions_.size(); ++r) m.op[keys_[r]] = op_[r];
        out_.push_back(std::move(m));
    }

    const DendSet& x_;
    const FiniteOperad& p_;
    const CellWorld& w_;
    std::vector<std::int32_t> label_list_;
    std::vector<Corolla> regions_;
    std::vector<RegionKey> keys_;
    std::vector<Split> splits_;
    std::vector<std::vector<int>> splits_of_, merged_splits_;
    std::vector<int> order_;
    std::vector<MaxCell> maximal_;
    std::vector<std::vector<OpId>> by_arity_;

    std::vector<ColourId> colour_;
    std::vector<OpId> op_, fixed_op_, base_op_;
    std::vector<ColourId> base_colour_;
    const OperadMorphism* over_ = nullptr;
    std::size_t limit_ = 0;
    std::vector<std::int32_t> stack_;
    std::vector<NamedMap> out_;
};

}  // namespace

DendSet DendSet::nerve(FiniteOperad p) {
    DendSet d;
    d.backend_ = Backend::nerve;
    d.name_ = "N(" + p.name() + ")";
    d.op_ = std::make_shared<const FiniteOperad>(std::move(p));
    return d;
}

DendSet DendSet::from_cells(std::shared_ptr<const CellWorld> w, CellSet cells, Backend b, std::string name) {
    DendSet d;
    d.backend_ = b;
    d.name_ = std::move(name);
    const auto& labels = w->labels();
    std::vector<std::string> colours;
    for (std::size_t l = 0; l < labels.size(); ++l) colours.push_back(labels.name(static_cast<std::int32_t>(l)));
    std::map<RegionKey, Corolla> corollas;
    int bound = 1;
    for (CellId c = 0; c < static_cast<CellId>(w->size()); ++c) {
        if (w->cell(c).vertices != 1) continue;
        Corolla co = corolla_of(*w, structure_of(*w, c).vertices[0], w->cell(c).scheme);
        corollas.emplace(key_of(labels, co), co);
        bound = std::max(bound, static_cast<int>(co.ins.size()));
    }
    if (bound > 7) throw DendroError("corollas of " + d.name_ + " exceed arity 7");
    FiniteOperad p(d.name_, colours, bound);
    for (std::size_t l = 0; l < labels.size(); ++l) {
        auto c = static_cast<ColourId>(l);
        p.set_unit(c, p.add_operation("1_" + labels.name(c), {{c}, c}));
        d.op_out_.push_back(c);
        d.op_ins_.emplace_back();
        d.op_unit_.push_back(1);
    }
    for (const auto& [key, co] : corollas)
        for (const auto& s : permutations(static_cast<int>(co.ins.size()))) {
            std::vector<ColourId> seq;
            std::string nm = labels.name(co.out) + "<";
            for (std::size_t j = 0; j < s.size(); ++j) {
                seq.push_back(co.ins[s[j]]);
                nm += (j ? "," : "") + labels.name(co.ins[s[j]]);
            }
            p.add_operation(nm, {seq, co.out});
            d.op_out_.push_back(co.out);
            d.op_ins_.push_back(co.ins);
            d.op_unit_.push_back(0);
        }
    auto by_profile = [&](const Profile& pr) -> std::optional<OpId> {
        const auto& v = p.operations(pr);
        if (v.empty()) return std::nullopt;
        return v[0];
    };
    const auto n = static_cast<OpId>(p.op_count());
    for (OpId a = 0; a < n; ++a)
        for (const auto& s : permutations(p.op(a).arity()))
            p.set_action(a, s, *by_profile(FiniteOperad::permuted(p.op(a).profile, s)));
    for (OpId a = 0; a < n; ++a) {
        const auto& pa = p.op(a).profile;
        for (int slot = 0; slot < static_cast<int>(pa.inputs.size()); ++slot)
            for (OpId b = 0; b < n; ++b) {
                const auto& pb = p.op(b).profile;
                if (pb.output != pa.inputs[slot]) continue;
                Profile pr;
                pr.output = pa.output;
                pr.inputs.assign(pa.inputs.begin(), pa.inputs.begin() + slot);
                pr.inputs.insert(pr.inputs.end(), pb.inputs.begin(), pb.inputs.end());
                pr.inputs.insert(pr.inputs.end(), pa.inputs.begin() + slot + 1, pa.inputs.end());
                if (auto r = by_profile(pr)) p.set_composition(a, slot, b, *r);
            }
    }
    d.op_ = std::make_shared<const FiniteOperad>(std::move(p));
    for (std::size_t s = 0; s < w->scheme_count(); ++s) {
        std::vector<EdgeId> le(labels.size(), kNone);
        const auto& lab = w->scheme_labels(static_cast<int>(s));
        for (EdgeId e = 0; e < static_cast<EdgeId>(lab.size()); ++e) le[lab[e]] = e;
        d.label_edge_.push_back(std::move(le));
    }
    d.world_ = std::move(w);
    d.cells_ = std::move(cells);
    return d;
}

DendSet DendSet::representable(const Tree& t) {
    auto w = std::make_shared<const CellWorld>(std::vector<Tree>{t});
    CellSet all = all_cells(*w);
    return from_cells(std::move(w), std::move(all), Backend::representable, "Omega[" + format_tree(t) + "]");
}

DendSet DendSet::subcomplex(const Tree& t, const std::vector<Tree>& generators, std::string name) {
    auto w = std::make_shared<const CellWorld>(std::vector<Tree>{t});
    CellSet k = cells_from_trees(*w, generators);
    return from_cells(std::move(w), std::move(k), Backend::representable, std::move(name));
}

DendSet DendSet::tensor_subcomplex(std::shared_ptr<const Tensor> x, CellSet cells, std::string name) {
    std::shared_ptr<const CellWorld> w(x, &x->world);
    return from_cells(std::move(w), std::move(cells), Backend::tensor, std::move(name));
}

bool DendSet::admits(const Tree& t, const Dendrex& x) const {
    if (backend_ == Backend::nerve) return true;
    for (std::size_t s = 0; s < world_->scheme_count(); ++s) {
        const auto& le = label_edge_[s];
        const Tree& host = world_->scheme(static_cast<int>(s));
        Face img;
        bool ok = true;
        for (ColourId c : x.colour) {
            if (le[c] == kNone) {
                ok = false;
                break;
            }
            img.edges |= bit(le[c]);
        }
        for (std::size_t v = 0; ok && v < t.vertex_count(); ++v) {
            OpId a = x.op[v];
            if (op_unit_[a]) continue;
            EdgeId o = le[op_out_[a]];
            Face corolla{bit(o), host.vertices_above(o)};
            for (auto l : op_ins_[a]) {
                EdgeId i = le[l];
                if (i == kNone) {
                    ok = false;
                    break;
                }
                corolla.edges |= bit(i);
                corolla.vertices &= ~host.vertices_above(i);
            }
            if (ok && !world_->find(static_cast<int>(s), corolla)) ok = false;
            img.vertices |= corolla.vertices;
        }
        if (!ok) continue;
        auto id = world_->find(static_cast<int>(s), img);
        if (id && cells_.contains(*id)) return true;
    }
    return false;
}

std::vector<Dendrex> DendSet::dendrices(const Tree& t) const {
    auto all = tree_dendrices(*op_, t);
    if (backend_ == Backend::nerve) return all;
    std::vector<Dendrex> out;
    for (auto& x : all)
        if (admits(t, x)) out.push_back(std::move(x));
    return out;
}

std::vector<NamedMap> find_maps(const DendSet& x, const CellWorld& w, const CellSet& k, const MapQuery& q) {
    if (q.base && !q.over) throw DendroError("a base map needs a morphism");
    Engine e(x, w, k);
    return e.run(q);
}

NamedMap named_of(const DendSet& x, const Tree& t, const Dendrex& d) {
    NamedMap m;
    for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) m.colour[t.name(e)] = d.colour.at(e);
    for (const auto& f : all_faces(t)) {
        if (f.vertices == 0) continue;
        auto fs = require_structure(t, f);
        if (fs.vertices.size() != 1) continue;
        const auto& v = fs.vertices[0];
        std::vector<EdgeId> ins = v.inputs;
        std::sort(ins.begin(), ins.end(), [&](EdgeId a, EdgeId b) { return t.name(a) < t.name(b); });
        RegionKey key{t.name(v.output), {}};
        for (EdgeId e : ins) key.inputs.push_back(t.name(e));
        m.op[key] = region_composite(x.operad(), t, d, v.region, v.output, ins);
    }
    return m;
}

Dendrex dendrex_of(const DendSet& x, const Tree& t, const NamedMap& m) {
    Dendrex d;
    for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) d.colour.push_back(m.colour.at(t.name(e)));
    for (const auto& v : t.vertices()) {
        std::vector<std::string> ins;
        for (EdgeId e : v.inputs) ins.push_back(t.name(e));
        RegionKey key{t.name(v.output), ins};
        std::sort(key.inputs.begin(), key.inputs.end());
        d.op.push_back(*x.operad().act(m.op.at(key), reorder(key.inputs, ins)));
    }
    return d;
}

NamedMap restrict_map(const NamedMap& m, const CellWorld& w, const CellSet& k) {
    NamedMap r;
    for (CellId c : k.members()) {
        const auto& cell = w.cell(c);
        if (cell.vertices == 0) {
            const auto& nm = w.labels().name(w.scheme_labels(cell.scheme)[bits_of(cell.face.edges).at(0)]);
            r.colour[nm] = m.colour.at(nm);
        } else if (cell.vertices == 1) {
            auto key = key_of(w.labels(), corolla_of(w, structure_of(w, c).vertices[0], cell.scheme));
            r.op[key] = m.op.at(key);
        }
    }
    return r;
}

NamedMap push_map(const OperadMorphism& f, const NamedMap& m) {
    NamedMap r;
    for (const auto& [k, c] : m.colour) r.colour[k] = f.colour_map.at(c);
    for (const auto& [k, a] : m.op) r.op[k] = f.op_map.at(a);
    return r;
}

std::string describe_map(const DendSet& x, const NamedMap& m) {
    std::ostringstream s;
    const auto& p = x.operad();
    bool first = true;
    for (const auto& [k, c] : m.colour) {
        s << (first ? "" : " ") << k << "=" << p.colour(c);
        first = false;
    }
    for (const auto& [k, a] : m.op) {
        s << " [" << k.output << "<";
        for (std::size_t j = 0; j < k.inputs.size(); ++j) s << (j ? "," : "") << k.inputs[j];
        s << "]=" << p.op(a).name;
    }
    return s.str();
}

namespace {

struct TreeWorld {
    CellWorld w;
    CellId top;
    explicit TreeWorld(const Tree& t) : w(std::vector<Tree>{t}), top(w.scheme_cell(0)) {}
};

std::optional<CellSet> tree_horn(const TreeWorld& tw, const HornSpec& spec) {
    return horn_cells(tw.w, tw.top, spec.kind, marker_label(tw.w, tw.top, spec.marker));
}

bool fits(const DendSet& x, const Tree& t) { return max_corolla_arity(t) <= x.operad().arity_bound(); }

}  // namespace

LiftResult solve_lifting(const HornProblem& hp) {
    TreeWorld tw(hp.tree);
    if (hp.p.target && !hp.base) throw DendroError("a lifting problem over a target needs a base");
    MapQuery q;
    q.fixed = &hp.horn;
    q.limit = 2;
    if (hp.p.target) {
        q.over = hp.p.map;
        q.base = &*hp.base;
    }
    auto maps = find_maps(*hp.p.source, tw.w, all_cells(tw.w), q);
    LiftResult r;
    r.fillers = maps.size();
    r.found = !maps.empty();
    if (r.found) r.filler = maps[0];
    return r;
}

std::vector<NamedMap> horn_assignments(const DendSet& x, const Tree& t, const HornSpec& spec, std::size_t limit) {
    TreeWorld tw(t);
    auto h = tree_horn(tw, spec);
    if (!h) throw DendroError("not a horn of " + format_tree(t));
    MapQuery q;
    q.limit = limit;
    return find_maps(x, tw.w, *h, q);
}

KanReport is_inner_fibration(const LiftMap& p, int max_vertices, int max_edges) {
    KanReport r;
    const DendSet& x = *p.source;
    for (const auto& t : enumerate_trees(max_vertices, max_edges)) {
        if (t.inner_edges().empty() || !fits(x, t)) continue;
        if (p.target && !fits(*p.target, t)) continue;
        ++r.trees;
        TreeWorld tw(t);
        for (EdgeId e : t.inner_edges()) {
            HornSpec spec{HornKind::inner, e};
            ++r.horns;
            auto horn = *tree_horn(tw, spec);
            for (const auto& a : find_maps(x, tw.w, horn)) {
                ++r.assignments;
                std::vector<std::optional<NamedMap>> bases;
                if (p.target) {
                    NamedMap pa = push_map(*p.map, a);
                    MapQuery q;
                    q.fixed = &pa;
                    for (auto& b : find_maps(*p.target, tw.w, all_cells(tw.w), q)) bases.emplace_back(std::move(b));
                } else {
                    bases.emplace_back();
                }
                for (auto& b : bases) {
                    HornProblem hp{p, t, spec, a, b};
                    auto lr = solve_lifting(hp);
                    if (lr.fillers != 1) r.unique = false;
                    if (!lr.found) {
                        r.ok = false;
                        r.message = "no filler for the inner horn at " + t.name(e) + " of " + format_tree(t);
                        r.counterexample = std::move(hp);
                        return r;
                    }
                }
            }
        }
    }
    r.message = "every inner horn fills";
    return r;
}

KanReport is_inner_kan(const DendSet& x, int max_vertices, int max_edges) {
    return is_inner_fibration(LiftMap{&x, nullptr, nullptr}, max_vertices, max_edges);
}

Dendrex edge_dendrex(const Edge1& e) {
    Tree l = linear_tree(1);
    Dendrex d;
    d.colour.assign(l.edge_count(), kNone);
    d.colour[l.edge("0")] = e.from;
    d.colour[l.edge("1")] = e.to;
    d.op = {e.op};
    return d;
}

Edge1 edge_of(const Dendrex& x) {
    Tree l = linear_tree(1);
    return {x.colour.at(l.edge("0")), x.colour.at(l.edge("1")), x.op.at(0)};
}

namespace {

// 2-dendrices on linear_tree(2) with first edge a, second edge b, and the composite
struct Triangle {
    Edge1 lower, upper, composite;
    Dendrex d;
};

std::vector<Triangle> triangles(const DendSet& x) {
    Tree l = linear_tree(2);
    EdgeId e0 = l.edge("0"), e1 = l.edge("1"), e2 = l.edge("2");
    VertexId lo = l.producer(e1), up = l.producer(e2);
    std::vector<Triangle> out;
    for (auto& d : x.dendrices(l)) {
        Triangle t;
        t.lower = {d.colour[e0], d.colour[e1], d.op[lo]};
        t.upper = {d.colour[e1], d.colour[e2], d.op[up]};
        t.composite = {d.colour[e0], d.colour[e2], region_composite(x.operad(), l, d, l.all_vertices(), e2, {e0})};
        t.d = std::move(d);
        out.push_back(std::move(t));
    }
    return out;
}

void require_kan(const DendSet& x) {
    auto r = is_inner_kan(x, 3, 6);
    if (!r.ok) throw DendroError(x.name() + " is not inner Kan: " + r.message);
}

InvertibilityReport invertible_in(const DendSet& x, const std::vector<Triangle>& tri, const Edge1& f) {
    InvertibilityReport r;
    const auto& p = x.operad();
    for (const auto& a : tri) {
        if (a.lower != f || a.composite != Edge1{f.from, f.from, p.unit(f.from)}) continue;
        const Edge1 g = a.upper;
        for (const auto& b : tri) {
            if (b.lower != g || b.upper != f || b.composite != Edge1{f.to, f.to, p.unit(f.to)}) continue;
            r.invertible = true;
            r.inverse = g;
            r.left_witness = a.d;
            r.right_witness = b.d;
            return r;
        }
    }
    return r;
}

}  // namespace

InvertibilityReport weakly_invertible(const DendSet& x, const Edge1& f, bool check_kan) {
    if (check_kan) require_kan(x);
    return invertible_in(x, triangles(x), f);
}

std::vector<Edge1> k_edges(const DendSet& x, bool check_kan) {
    if (check_kan) require_kan(x);
    auto tri = triangles(x);
    std::vector<Edge1> out;
    for (const auto& d : x.dendrices(linear_tree(1))) {
        Edge1 e = edge_of(d);
        if (invertible_in(x, tri, e).invertible) out.push_back(e);
    }
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::filler: return "filler";
        case Verdict::hypothesis_not_met: return "hypothesis-not-met";
        case Verdict::precondition_failed: return "precondition-failed";
        case Verdict::counterexample: return "counterexample";
    }
    return "?";
}

namespace {

// shared part of the root and end horn checks; `marked` is the unary vertex whose
// edge must be weakly invertible
TheoremReport outer_horn_check(const LiftMap& p, const Tree& t, const HornSpec& spec, VertexId marked,
                               const NamedMap& horn, const TheoremOptions& opt) {
    TheoremReport r;
    const DendSet& x = *p.source;
    if (p.target && !p.map) {
        r.message = "a target needs a morphism";
        return r;
    }
    if (!fits(x, t)) {
        r.message = "tree exceeds the arity bound";
        return r;
    }
    TreeWorld tw(t);
    auto hc = tree_horn(tw, spec);
    if (!hc) {
        r.message = "no such horn";
        return r;
    }
    MapQuery q;
    q.fixed = &horn;
    q.limit = 2;
    auto check = find_maps(x, tw.w, *hc, q);
    if (check.size() != 1 || check[0] != horn) {
        r.message = "the horn assignment is not a map on the horn";
        return r;
    }
    if (opt.check_fibration) {
        auto f = is_inner_fibration(p, opt.fibration_vertices, opt.fibration_edges);
        if (!f.ok) {
            r.message = "not an inner fibration: " + f.message;
            return r;
        }
    }
    const auto& v = t.vertex(marked);
    RegionKey key{t.name(v.output), {t.name(v.inputs[0])}};
    Edge1 e{horn.colour.at(t.name(v.inputs[0])), horn.colour.at(t.name(v.output)), horn.op.at(key)};
    r.hypothesis = weakly_invertible(x, e, false).invertible;

    std::vector<std::optional<NamedMap>> bases;
    if (p.target) {
        NamedMap ph = push_map(*p.map, horn);
        MapQuery bq;
        bq.fixed = &ph;
        for (auto& b : find_maps(*p.target, tw.w, all_cells(tw.w), bq)) bases.emplace_back(std::move(b));
    } else {
        bases.emplace_back();
    }
    r.squares = bases.size();
    if (bases.empty()) {
        r.message = "no square over this horn assignment";
        return r;
    }
    r.search_found = true;
    for (auto& b : bases) {
        auto lr = solve_lifting(HornProblem{p, t, spec, horn, b});
        if (!lr.found) {
            r.search_found = false;
            break;
        }
        if (!r.filler) r.filler = lr.filler;
    }
    if (!r.search_found) r.filler.reset();
    if (r.hypothesis) {
        r.verdict = r.search_found ? Verdict::filler : Verdict::counterexample;
        r.message = r.search_found ? "filler found" : "weakly invertible edge but no filler";
    } else {
        r.verdict = Verdict::hypothesis_not_met;
        r.message = std::string("edge not weakly invertible; search: ") + (r.search_found ? "filler" : "absent");
    }
    return r;
}

}  // namespace

TheoremReport theorem42_check(const LiftMap& p, const Tree& t, const NamedMap& horn, const TheoremOptions& opt) {
    VertexId rv = t.root_vertex();
    if (t.vertex_count() < 2 || rv == kNone || t.vertex(rv).inputs.size() != 1) {
        TheoremReport r;
        r.message = "the tree needs two vertices and a unary root vertex";
        return r;
    }
    return outer_horn_check(p, t, HornSpec{HornKind::root, t.root()}, rv, horn, opt);
}

TheoremReport theoremA_check(const LiftMap& p, const Tree& s, EdgeId top_output, const NamedMap& horn,
                             const TheoremOptions& opt) {
    VertexId v = top_output >= 0 && top_output < static_cast<EdgeId>(s.edge_count()) ? s.producer(top_output) : kNone;
    if (s.vertex_count() < 2 || v == kNone || !s.is_top_vertex(v) || s.vertex(v).inputs.size() != 1 ||
        !unary_top_decomposition(s, top_output)) {
        TheoremReport r;
        r.message = "the tree needs two vertices and a unary top vertex at the marker";
        return r;
    }
    return outer_horn_check(p, s, HornSpec{HornKind::end, top_output}, v, horn, opt);
}

Dendrex act_automorphism(const FiniteOperad& p, const Tree& t, const Dendrex& x, const TreeIso& alpha) {
    Dendrex y;
    for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) y.colour.push_back(x.colour[alpha.edge_map[e]]);
    for (const auto& v : t.vertices()) {
        VertexId w = t.producer(alpha.edge_map[v.output]);
        std::vector<EdgeId> img;
        for (EdgeId e : v.inputs) img.push_back(alpha.edge_map[e]);
        y.op.push_back(*p.act(x.op[w], reorder(t.vertex(w).inputs, img)));
    }
    return y;
}

NormalReport is_normal(const DendSet& x, int max_vertices, int max_edges) {
    NormalReport r;
    for (const auto& t : enumerate_trees(max_vertices, max_edges)) {
        if (!fits(x, t)) continue;
        ++r.trees;
        auto auts = automorphisms(t);
        auto id = identity_iso(t);
        auto ds = x.dendrices(t);
        r.dendrices += ds.size();
        for (const auto& a : auts) {
            if (a.edge_map == id.edge_map) continue;
            for (const auto& d : ds)
                if (act_automorphism(x.operad(), t, d, a) == d) {
                    r.ok = false;
                    r.tree = t;
                    r.fixed = d;
                    r.automorphism = a;
                    return r;
                }
        }
    }
    return r;
}

namespace {

std::pair<std::string, int> split_label(const std::string& name) {
    auto bar = name.rfind('|');
    return {name.substr(0, bar), std::stoi(name.substr(bar + 1))};
}

std::vector<RegionKey> region_keys(const CellWorld& w) {
    std::vector<RegionKey> out;
    for (CellId c = 0; c < static_cast<CellId>(w.size()); ++c)
        if (w.cell(c).vertices == 1) out.push_back(key_of(w.labels(), corolla_of(w, structure_of(w, c).vertices[0], w.cell(c).scheme)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int vertex_of(const MappingSpace& m, int k, int x, int j) {
    while (k > 0) {
        int d = j == k ? 0 : k;
        x = m.faces[k][x][d];
        if (d == 0) --j;
        --k;
    }
    return x;
}

}  // namespace

MappingSpace mapping_space(const DendSet& x, const Profile& rho, int max_dim) {
    const auto& p = x.operad();
    for (ColourId c : rho.inputs)
        if (c < 0 || c >= static_cast<ColourId>(p.colour_count())) throw DendroError("profile colour absent");
    if (rho.output < 0 || rho.output >= static_cast<ColourId>(p.colour_count())) throw DendroError("profile colour absent");
    if (max_dim < 0 || max_dim > 3) throw DendroError("simplicial bound must lie in 0..3");
    const int n = static_cast<int>(rho.inputs.size());
    MappingSpace m;
    m.profile = rho;
    m.max_dim = max_dim;
    std::vector<std::shared_ptr<const Tensor>> worlds;
    std::vector<std::vector<RegionKey>> keys;
    auto colour_of = [&](const std::string& s) { return s == "r" ? rho.output : rho.inputs.at(std::stoi(s.substr(1)) - 1); };
    for (int k = 0; k <= max_dim; ++k) {
        auto t = std::make_shared<const Tensor>(tensor(corolla(n), linear_tree(k)));
        const CellWorld& w = t->world;
        NamedMap fixed;
        for (std::size_t l = 0; l < w.labels().size(); ++l) {
            const auto& nm = w.labels().name(static_cast<std::int32_t>(l));
            fixed.colour[nm] = colour_of(split_label(nm).first);
        }
        for (const auto& key : region_keys(w)) {
            auto s = split_label(key.output).first;
            bool flat = !key.inputs.empty() && std::all_of(key.inputs.begin(), key.inputs.end(), [&](const auto& i) { return split_label(i).first == s; });
            if (flat) fixed.op[key] = p.unit(colour_of(s));
        }
        MapQuery q;
        q.fixed = &fixed;
        m.simplices.push_back(find_maps(x, w, all_cells(w), q));
        keys.push_back(region_keys(w));
        worlds.push_back(std::move(t));
    }
    m.faces.resize(max_dim + 1);
    for (int k = 1; k <= max_dim; ++k) {
        std::map<NamedMap, int> index;
        for (std::size_t i = 0; i < m.simplices[k - 1].size(); ++i) index[m.simplices[k - 1][i]] = static_cast<int>(i);
        for (const auto& s : m.simplices[k]) {
            std::vector<int> fs;
            for (int j = 0; j <= k; ++j) {
                auto up = [&](const std::string& nm) {
                    auto [a, t] = split_label(nm);
                    return a + "|" + std::to_string(t < j ? t : t + 1);
                };
                NamedMap y;
                const auto& lower = worlds[k - 1]->world.labels();
                for (std::size_t l = 0; l < lower.size(); ++l) {
                    const auto& nm = lower.name(static_cast<std::int32_t>(l));
                    y.colour[nm] = s.colour.at(up(nm));
                }
                for (const auto& key : keys[k - 1]) {
                    RegionKey big{up(key.output), {}};
                    std::vector<std::string> mapped;
                    for (const auto& i : key.inputs) mapped.push_back(up(i));
                    big.inputs = mapped;
                    std::sort(big.inputs.begin(), big.inputs.end());
                    y.op[key] = *p.act(s.op.at(big), reorder(big.inputs, mapped));
                }
                auto it = index.find(y);
                if (it == index.end()) throw DendroError("face of a simplex is missing from the mapping space");
                fs.push_back(it->second);
            }
            m.faces[k].push_back(std::move(fs));
        }
    }
    return m;
}

bool is_discrete(const MappingSpace& m) {
    for (int k = 1; k <= m.max_dim; ++k) {
        if (m.simplices[k].size() != m.simplices[0].size()) return false;
        for (int x = 0; x < static_cast<int>(m.simplices[k].size()); ++x)
            for (int j = 1; j <= k; ++j)
                if (vertex_of(m, k, x, j) != vertex_of(m, k, x, 0)) return false;
    }
    return true;
}

bool satisfies_kan(const MappingSpace& m) {
    for (int n = 1; n <= m.max_dim; ++n)
        for (int j = 0; j <= n; ++j) {
            // choose x_i for i != j, compatible: d_i x_l = d_{l-1} x_i for i < l
            std::vector<int> pick(n + 1, -1);
            const int sz = static_cast<int>(m.simplices[n - 1].size());
            std::function<bool(int)> go = [&](int i) -> bool {
                if (i > n) {
                    for (int y = 0; y < static_cast<int>(m.simplices[n].size()); ++y) {
                        bool ok = true;
                        for (int a = 0; a <= n && ok; ++a)
                            if (a != j && m.faces[n][y][a] != pick[a]) ok = false;
                        if (ok) return true;
                    }
                    return false;
                }
                if (i == j) return go(i + 1);
                for (int x = 0; x < sz; ++x) {
                    bool ok = true;
                    if (n >= 2)
                        for (int a = 0; a < i && ok; ++a)
                            if (a != j && m.faces[n - 1][x][a] != m.faces[n - 1][pick[a]][i - 1]) ok = false;
                    if (!ok) continue;
                    pick[i] = x;
                    if (!go(i + 1)) return false;
                }
                pick[i] = -1;
                return true;
            };
            if (!go(0)) return false;
        }
    return true;
}

Pi0Report pi0_mapping_space(const DendSet& x, const Profile& rho) {
    Pi0Report r;
    auto m = mapping_space(x, rho, 1);
    const int nv = static_cast<int>(m.simplices[0].size());
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    for (const auto& f : m.faces[1]) parent[find(f[0])] = find(f[1]);
    std::map<int, int> comp;
    r.component.resize(nv);
    for (int v = 0; v < nv; ++v) {
        int root = find(v);
        if (!comp.count(root)) comp[root] = static_cast<int>(comp.size());
        r.component[v] = comp[root];
    }
    r.components = comp.size();
    if (x.backend() != DendSet::Backend::nerve) {
        r.message = "comparison needs a nerve";
        return r;
    }
    r.compared = true;
    const auto& ops = x.operad().operations(rho);
    std::map<int, OpId> op_of;
    std::map<OpId, int> comp_of;
    bool ok = true;
    for (int v = 0; v < nv; ++v) {
        const auto& s = m.simplices[0][v];
        OpId a = kNone;
        for (const auto& [k, o] : s.op)
            if (k.output == "r|0") a = o;
        if (rho.inputs.empty() && a == kNone) ok = false;
        if (std::find(ops.begin(), ops.end(), a) == ops.end()) ok = false;
        int c = r.component[v];
        if (op_of.count(c) && op_of[c] != a) ok = false;
        if (comp_of.count(a) && comp_of[a] != c) ok = false;
        op_of[c] = a;
        comp_of[a] = c;
    }
    if (comp_of.size() != ops.size()) ok = false;
    r.bijective = ok;
    for (const auto& [c, a] : op_of) r.witness.emplace_back(c, a);
    r.message = ok ? "components match operations" : "no bijection with the operations";
    return r;
}

CylinderLiftReport ev1_lifting(const DendSet& x, const Tree& s) {
    CylinderLiftReport r;
    auto rep = left_cylinder_filtration(s);
    if (!rep.ok) {
        r.message = "left cylinder filtration failed: " + rep.message;
        return r;
    }
    const CellWorld& w = rep.host.world();
    try {
        require_kan(x);
    } catch (const DendroError& e) {
        r.message = e.what();
        return r;
    }
    TheoremOptions opt;
    opt.check_fibration = false;
    const LiftMap p{&x, nullptr, nullptr};
    auto starts = find_maps(x, w, rep.start);
    for (const auto& a : starts) {
        NamedMap g = a;
        for (const auto& step : rep.certificate.steps) {
            auto c = w.find_tree(step.shape);
            if (!c) {
                r.message = "certificate step outside the tensor";
                return r;
            }
            Tree t = w.cell_tree(*c);
            TreeWorld tw(t);
            HornSpec spec{step.kind, t.edge(step.marker)};
            auto hc = tree_horn(tw, spec);
            if (!hc) {
                r.message = "certificate step is not a horn";
                return r;
            }
            NamedMap local = restrict_map(g, tw.w, *hc);
            std::optional<NamedMap> filler;
            if (step.kind == HornKind::inner) {
                auto lr = solve_lifting(HornProblem{p, t, spec, local, std::nullopt});
                if (lr.found) filler = lr.filler;
            } else {
                ++r.root_steps;
                auto tr = step.kind == HornKind::root ? theorem42_check(p, t, local, opt)
                                                      : theoremA_check(p, t, spec.marker, local, opt);
                if (tr.verdict != Verdict::filler) {
                    r.message = std::string("outer step: ") + verdict_name(tr.verdict) + ", " + tr.message;
                    return r;
                }
                filler = tr.filler;
            }
            if (!filler) {
                r.message = "an inner step has no filler";
                return r;
            }
            g.colour.insert(filler->colour.begin(), filler->colour.end());
            g.op.insert(filler->op.begin(), filler->op.end());
            ++r.steps;
        }
        MapQuery q;
        q.fixed = &g;
        q.limit = 1;
        auto whole = find_maps(x, w, all_cells(w), q);
        if (whole.empty() || whole[0] != g) {
            r.message = "the replayed extension is not a map on the cylinder";
            return r;
        }
        ++r.maps;
    }
    r.ok = r.maps > 0;
    r.message = r.ok ? "every map extends" : "no maps to extend";
    return r;
}

}  // namespace dendro
