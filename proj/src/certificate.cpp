#include "dendro/certificate.hpp"

#include <algorithm>

#include "json.hpp"

namespace dendro {

using nlohmann::json;

HostWorld make_host_world(const Host& h) {
    if (h.kind == Host::Kind::tree) return representable_world(h.tree);
    return tensor_world(std::make_shared<const Tensor>(tensor(h.left, h.right)));
}

HostWorld representable_world(const Tree& t) {
    HostWorld hw;
    hw.host.kind = Host::Kind::tree;
    hw.host.tree = t;
    hw.own = std::make_shared<const CellWorld>(std::vector<Tree>{t});
    return hw;
}

HostWorld tensor_world(std::shared_ptr<const Tensor> x) {
    HostWorld hw;
    hw.host.kind = Host::Kind::tensor;
    hw.host.left = x->S;
    hw.host.right = x->T;
    hw.tensor = std::move(x);
    return hw;
}

namespace {

std::optional<EdgeId> edge_with_label(const CellWorld& w, CellId c, std::int32_t label) {
    const auto& cell = w.cell(c);
    const auto& lab = w.scheme_labels(cell.scheme);
    for (EdgeId e : bits_of(cell.face.edges))
        if (lab[e] == label) return e;
    return std::nullopt;
}

std::optional<std::vector<CellId>> horn_list(const CellWorld& w, CellId c, HornKind kind, std::int32_t marker) {
    auto e = edge_with_label(w, c, marker);
    if (!e) return std::nullopt;
    const auto& cell = w.cell(c);
    const Tree& host = w.scheme(cell.scheme);
    HornSpec spec{kind, *e};
    if (!horn_missing_face(host, cell.face, spec)) return std::nullopt;
    std::vector<Face> gens;
    try {
        gens = horn_generators(host, cell.face, spec);
    } catch (const DendroError&) {
        return std::nullopt;
    }
    std::vector<CellId> out;
    for (const auto& g : gens) {
        CellId gc = w.id(cell.scheme, g);
        auto fs = w.faces_of(gc);
        out.insert(out.end(), fs.begin(), fs.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::int32_t marker_label(const CellWorld& w, CellId c, EdgeId scheme_edge) {
    return w.scheme_labels(w.cell(c).scheme).at(scheme_edge);
}

std::optional<CellSet> horn_cells(const CellWorld& w, CellId c, HornKind kind, std::int32_t marker) {
    auto l = horn_list(w, c, kind, marker);
    if (!l) return std::nullopt;
    CellSet s(w.size());
    for (CellId x : *l) s.insert(x);
    return s;
}

std::vector<HornSpec> horn_options(const CellWorld& w, CellId c, const std::vector<HornKind>& kinds) {
    const auto& cell = w.cell(c);
    const Tree& host = w.scheme(cell.scheme);
    auto fs = require_structure(host, cell.face);
    auto wants = [&](HornKind k) { return std::find(kinds.begin(), kinds.end(), k) != kinds.end(); };
    std::vector<HornSpec> out;
    if (wants(HornKind::inner))
        for (EdgeId e : bits_of(cell.face.edges))
            if (fs.is_inner(e)) out.push_back({HornKind::inner, e});
    if (wants(HornKind::end))
        for (const auto& v : fs.vertices)
            if (v.inputs.size() == 1 && fs.is_leaf(v.inputs[0]) && fs.vertices.size() > 1)
                out.push_back({HornKind::end, v.output});
    if (wants(HornKind::root)) {
        HornSpec r{HornKind::root, fs.root};
        if (horn_missing_face(host, cell.face, r)) out.push_back(r);
    }
    return out;
}

Builder::Builder(const CellWorld& w, CellSet start) : w_(&w), cur_(std::move(start)) {}

std::optional<std::string> check_horn(const CellWorld& w, const CellSet& cur, CellId c, HornKind kind,
                                      std::int32_t marker) {
    if (cur.contains(c)) return std::string("cell is already present");
    auto horn = horn_list(w, c, kind, marker);
    if (!horn) return std::string("marker does not define a ") + horn_kind_name(kind) + " horn";
    for (CellId g : w.faces_of(c)) {
        bool in_horn = std::binary_search(horn->begin(), horn->end(), g);
        if (in_horn != cur.contains(g)) {
            return std::string(in_horn ? "horn face missing from the subcomplex: " : "face outside the horn already present: ") +
                   w.describe(g);
        }
    }
    return std::nullopt;
}

std::optional<std::string> Builder::check(CellId c, HornKind kind, std::int32_t marker) const {
    return check_horn(*w_, cur_, c, kind, marker);
}

bool Builder::adjoin(CellId c, HornKind kind, std::int32_t marker, const std::string& segment) {
    if (check(c, kind, marker)) return false;
    for (CellId g : w_->faces_of(c)) cur_.insert(g);
    steps_.push_back({c, kind, marker, segment});
    return true;
}

void Builder::rollback(const Mark& m) {
    cur_ = m.cur;
    steps_.resize(m.steps);
}

std::vector<Tree> generator_trees(const CellWorld& w, const CellSet& s) {
    std::vector<std::pair<std::string, Tree>> tmp;
    for (CellId c : maximal_cells(w, s)) {
        Tree t = w.cell_tree(c);
        tmp.emplace_back(format_tree(t), t);
    }
    std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Tree> out;
    for (auto& p : tmp) out.push_back(std::move(p.second));
    return out;
}

CellSet cells_from_trees(const CellWorld& w, const std::vector<Tree>& gens) {
    std::vector<CellId> ids;
    for (const auto& t : gens) {
        auto c = w.find_tree(t);
        if (!c) throw DendroError("not a cell of the host: " + format_tree(t));
        ids.push_back(*c);
    }
    return close_cells(w, ids);
}

Certificate Builder::certificate(const Host& host, const CellSet& start, const CellSet& target) const {
    Certificate c;
    c.host = host;
    c.start = generator_trees(*w_, start);
    c.target = generator_trees(*w_, target);
    for (const auto& s : steps_)
        c.steps.push_back({w_->cell_tree(s.cell), s.kind, w_->labels().name(s.marker), s.segment});
    return c;
}

VerifyReport verify_certificate(const Certificate& c) {
    VerifyReport r;
    HostWorld hw;
    try {
        hw = make_host_world(c.host);
    } catch (const DendroError& e) {
        r.message = std::string("bad host: ") + e.what();
        return r;
    }
    const CellWorld& w = hw.world();
    CellSet start, target;
    try {
        start = cells_from_trees(w, c.start);
        target = cells_from_trees(w, c.target);
    } catch (const DendroError& e) {
        r.message = e.what();
        return r;
    }
    if (!start.subset_of(target)) {
        r.message = "start is not contained in target";
        return r;
    }
    Builder b(w, start);
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const auto& st = c.steps[i];
        auto fail = [&](const std::string& why) {
            r.failed_step = static_cast<int>(i);
            r.message = "step " + std::to_string(i) + ": " + why;
            return r;
        };
        auto cell = w.find_tree(st.shape);
        if (!cell) return fail("shape is not a cell of the host");
        auto marker = w.labels().find(st.marker);
        if (!marker) return fail("unknown marker " + st.marker);
        if (!target.contains(*cell)) return fail("cell lies outside the target");
        if (auto why = b.check(*cell, st.kind, *marker)) return fail(*why);
        b.adjoin(*cell, st.kind, *marker, st.segment);
        switch (st.kind) {
            case HornKind::inner: ++r.inner_steps; break;
            case HornKind::end: ++r.end_steps; break;
            case HornKind::root: ++r.root_steps; break;
        }
    }
    if (!(b.current() == target)) {
        r.message = "replay ends short of the target (" + std::to_string(b.current().size()) + " of " +
                    std::to_string(target.size()) + " cells)";
        return r;
    }
    r.ok = true;
    r.message = "ok";
    return r;
}

namespace {

json host_json(const Host& h) {
    if (h.kind == Host::Kind::tree) return {{"kind", "tree"}, {"tree", format_tree(h.tree)}};
    return {{"kind", "tensor"}, {"left", format_tree(h.left)}, {"right", format_tree(h.right)}};
}

json trees_json(const std::vector<Tree>& ts) {
    json a = json::array();
    for (const auto& t : ts) a.push_back(format_tree(t));
    return a;
}

std::vector<Tree> trees_from(const json& a) {
    std::vector<Tree> out;
    for (const auto& x : a) out.push_back(parse_tree(x.get<std::string>()));
    return out;
}

}  // namespace

std::string certificate_to_json(const Certificate& c) {
    json j;
    j["format"] = "dendro-certificate";
    j["version"] = 1;
    j["host"] = host_json(c.host);
    j["start"] = trees_json(c.start);
    j["target"] = trees_json(c.target);
    json steps = json::array();
    for (const auto& s : c.steps)
        steps.push_back({{"shape", format_tree(s.shape)},
                         {"kind", horn_kind_name(s.kind)},
                         {"marker", s.marker},
                         {"segment", s.segment}});
    j["steps"] = steps;
    return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DendroError(std::string("certificate is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "dendro-certificate") throw DendroError("not a certificate document");
        Certificate c;
        const auto& h = j.at("host");
        auto kind = h.at("kind").get<std::string>();
        if (kind == "tree") {
            c.host.kind = Host::Kind::tree;
            c.host.tree = parse_tree(h.at("tree").get<std::string>());
        } else if (kind == "tensor") {
            c.host.kind = Host::Kind::tensor;
            c.host.left = parse_tree(h.at("left").get<std::string>());
            c.host.right = parse_tree(h.at("right").get<std::string>());
        } else {
            throw DendroError("unknown host kind " + kind);
        }
        c.start = trees_from(j.at("start"));
        c.target = trees_from(j.at("target"));
        for (const auto& s : j.at("steps")) {
            CertStep st;
            st.shape = parse_tree(s.at("shape").get<std::string>());
            auto k = parse_horn_kind(s.at("kind").get<std::string>());
            if (!k) throw DendroError("unknown horn kind");
            st.kind = *k;
            st.marker = s.at("marker").get<std::string>();
            st.segment = s.value("segment", "");
            c.steps.push_back(std::move(st));
        }
        return c;
    } catch (const json::exception& e) {
        throw DendroError(std::string("malformed certificate: ") + e.what());
    }
}

}  // namespace dendro
