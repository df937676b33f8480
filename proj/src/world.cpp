#include "dendro/world.hpp"

#include <algorithm>

namespace dendro {

std::int32_t LabelTable::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::int32_t>(names_.size());
    ids_.emplace(name, id);
    names_.push_back(name);
    return id;
}

std::optional<std::int32_t> LabelTable::find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

namespace {

struct KeyVertex {
    std::int32_t out;
    std::vector<std::int32_t> ins;
};

LabelKey assemble(std::int32_t root, std::vector<KeyVertex> vs) {
    for (auto& v : vs) std::sort(v.ins.begin(), v.ins.end());
    std::sort(vs.begin(), vs.end(), [](const KeyVertex& a, const KeyVertex& b) { return a.out < b.out; });
    LabelKey k;
    k.push_back(root);
    k.push_back(static_cast<std::int32_t>(vs.size()));
    for (const auto& v : vs) {
        k.push_back(v.out);
        k.push_back(static_cast<std::int32_t>(v.ins.size()));
        k.insert(k.end(), v.ins.begin(), v.ins.end());
    }
    return k;
}

}  // namespace

LabelKey face_key(const FaceStructure& fs, const std::vector<std::int32_t>& label_of_edge) {
    std::vector<KeyVertex> vs;
    vs.reserve(fs.vertices.size());
    for (const auto& v : fs.vertices) {
        KeyVertex kv{label_of_edge.at(v.output), {}};
        for (EdgeId e : v.inputs) kv.ins.push_back(label_of_edge.at(e));
        vs.push_back(std::move(kv));
    }
    return assemble(label_of_edge.at(fs.root), std::move(vs));
}

LabelKey tree_key(const Tree& named, LabelTable& labels) {
    std::vector<std::int32_t> lab(named.edge_count());
    for (EdgeId e = 0; e < static_cast<EdgeId>(named.edge_count()); ++e) lab[e] = labels.intern(named.name(e));
    std::vector<KeyVertex> vs;
    for (const auto& v : named.vertices()) {
        KeyVertex kv{lab[v.output], {}};
        for (EdgeId c : v.inputs) kv.ins.push_back(lab[c]);
        vs.push_back(std::move(kv));
    }
    return assemble(lab[named.root()], std::move(vs));
}

std::optional<LabelKey> tree_key_lookup(const Tree& named, const LabelTable& labels) {
    std::vector<std::int32_t> lab(named.edge_count());
    for (EdgeId e = 0; e < static_cast<EdgeId>(named.edge_count()); ++e) {
        auto id = labels.find(named.name(e));
        if (!id) return std::nullopt;
        lab[e] = *id;
    }
    std::vector<KeyVertex> vs;
    for (const auto& v : named.vertices()) {
        KeyVertex kv{lab[v.output], {}};
        for (EdgeId c : v.inputs) kv.ins.push_back(lab[c]);
        vs.push_back(std::move(kv));
    }
    return assemble(lab[named.root()], std::move(vs));
}

CellWorld::CellWorld(std::vector<Tree> maximal) : trees_(std::move(maximal)) {
    lookup_.resize(trees_.size());
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        const Tree& t = trees_[i];
        std::vector<std::int32_t> lab(t.edge_count());
        for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) lab[e] = labels_.intern(t.name(e));
        scheme_labels_.push_back(lab);
        auto& map = lookup_[i];
        for_each_subface(t, identity_face(t), [&](const Face& f) {
            auto key = face_key(require_structure(t, f), lab);
            auto it = by_key_.find(key);
            CellId id;
            if (it != by_key_.end()) {
                id = it->second;
            } else {
                id = static_cast<CellId>(cells_.size());
                Cell c;
                c.scheme = static_cast<int>(i);
                c.face = f;
                c.key = key;
                c.edges = popcount(f.edges);
                c.vertices = static_cast<int>(key.at(1));
                cells_.push_back(std::move(c));
                by_key_.emplace(std::move(key), id);
            }
            map.emplace(f, id);
        });
        top_.push_back(map.at(identity_face(t)));
    }
}

std::optional<CellId> CellWorld::find(int scheme, const Face& f) const {
    const auto& m = lookup_.at(scheme);
    auto it = m.find(f);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

CellId CellWorld::id(int scheme, const Face& f) const {
    auto c = find(scheme, f);
    if (!c) throw DendroError("not a face of scheme " + std::to_string(scheme));
    return *c;
}

std::optional<CellId> CellWorld::find_key(const LabelKey& k) const {
    auto it = by_key_.find(k);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

std::optional<CellId> CellWorld::find_tree(const Tree& named) const {
    auto k = tree_key_lookup(named, labels_);
    if (!k) return std::nullopt;
    return find_key(*k);
}

std::vector<CellId> CellWorld::faces_of(CellId c) const {
    const Cell& cell = cells_.at(c);
    const auto& m = lookup_[cell.scheme];
    std::vector<CellId> out;
    for_each_subface(trees_[cell.scheme], cell.face, [&](const Face& g) { out.push_back(m.at(g)); });
    return out;
}

Tree CellWorld::cell_tree(CellId c) const {
    const Cell& cell = cells_.at(c);
    return face_shape(trees_[cell.scheme], cell.face).tree;
}

std::string CellWorld::describe(CellId c) const { return format_tree(cell_tree(c)); }

bool CellSet::insert(CellId c) {
    if (in_.at(c)) return false;
    in_[c] = 1;
    ++count_;
    return true;
}

void CellSet::erase(CellId c) {
    if (!in_.at(c)) return;
    in_[c] = 0;
    --count_;
}

std::vector<CellId> CellSet::members() const {
    std::vector<CellId> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < in_.size(); ++i)
        if (in_[i]) out.push_back(static_cast<CellId>(i));
    return out;
}

namespace {

void same_universe(const CellSet& a, const CellSet& b) {
    if (a.universe() != b.universe()) throw DendroError("cell sets over different worlds");
}

}  // namespace

CellSet CellSet::unite(const CellSet& o) const {
    same_universe(*this, o);
    CellSet r = *this;
    for (std::size_t i = 0; i < in_.size(); ++i)
        if (o.in_[i]) r.insert(static_cast<CellId>(i));
    return r;
}

CellSet CellSet::intersect(const CellSet& o) const {
    same_universe(*this, o);
    CellSet r(in_.size());
    for (std::size_t i = 0; i < in_.size(); ++i)
        if (in_[i] && o.in_[i]) r.insert(static_cast<CellId>(i));
    return r;
}

CellSet CellSet::minus(const CellSet& o) const {
    same_universe(*this, o);
    CellSet r(in_.size());
    for (std::size_t i = 0; i < in_.size(); ++i)
        if (in_[i] && !o.in_[i]) r.insert(static_cast<CellId>(i));
    return r;
}

bool CellSet::subset_of(const CellSet& o) const {
    same_universe(*this, o);
    for (std::size_t i = 0; i < in_.size(); ++i)
        if (in_[i] && !o.in_[i]) return false;
    return true;
}

CellSet close_cells(const CellWorld& w, const std::vector<CellId>& generators) {
    CellSet s(w.size());
    for (CellId g : generators) {
        if (s.contains(g)) continue;
        for (CellId f : w.faces_of(g)) s.insert(f);
    }
    return s;
}

CellSet all_cells(const CellWorld& w) {
    CellSet s(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) s.insert(static_cast<CellId>(i));
    return s;
}

bool is_closed(const CellWorld& w, const CellSet& s) {
    for (CellId c : s.members())
        for (CellId f : w.faces_of(c))
            if (!s.contains(f)) return false;
    return true;
}

std::vector<CellId> maximal_cells(const CellWorld& w, const CellSet& s) {
    std::vector<char> below(w.size(), 0);
    auto ms = s.members();
    for (CellId c : ms)
        for (CellId f : w.faces_of(c))
            if (f != c) below[f] = 1;
    std::vector<CellId> out;
    for (CellId c : ms)
        if (!below[c]) out.push_back(c);
    return out;
}

}  // namespace dendro
