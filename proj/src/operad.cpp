#include "dendro/operad.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "json.hpp"

namespace dendro {

using nlohmann::json;

std::size_t ProfileHash::operator()(const Profile& p) const noexcept {
    std::size_t h = static_cast<std::size_t>(p.output) * 0x9E3779B97F4A7C15ULL;
    for (ColourId c : p.inputs) h = (h ^ static_cast<std::size_t>(c + 1)) * 0x100000001B3ULL;
    return h;
}

std::vector<Perm> permutations(int n) {
    std::vector<Perm> out;
    Perm p = identity_perm(n);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm compose_perm(const Perm& sigma, const Perm& tau) {
    Perm r(tau.size());
    for (std::size_t j = 0; j < tau.size(); ++j) r[j] = sigma.at(tau[j]);
    return r;
}

Perm inverse_perm(const Perm& sigma) {
    Perm r(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) r[sigma[j]] = static_cast<int>(j);
    return r;
}

std::size_t perm_rank(const Perm& p) {
    // Lehmer code, lexicographic rank
    std::size_t r = 0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (p[j] < p[i]) ++smaller;
        r = r * (n - i) + smaller;
    }
    return r;
}

namespace {

std::size_t factorial(int n) {
    std::size_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
    return f;
}

std::uint64_t comp_key(OpId p, int slot, OpId q) {
    return (static_cast<std::uint64_t>(p) << 36) | (static_cast<std::uint64_t>(q) << 8) | static_cast<std::uint64_t>(slot);
}

const std::vector<OpId> kNoOps;

}  // namespace

FiniteOperad::FiniteOperad(std::string name, std::vector<std::string> colours, int arity_bound)
    : name_(std::move(name)), colours_(std::move(colours)), bound_(arity_bound), units_(colours_.size(), kNone) {
    if (arity_bound < 1 || arity_bound > 7) throw DendroError("arity bound must lie in 1..7");
}

std::optional<ColourId> FiniteOperad::find_colour(std::string_view name) const {
    for (std::size_t c = 0; c < colours_.size(); ++c)
        if (colours_[c] == name) return static_cast<ColourId>(c);
    return std::nullopt;
}

OpId FiniteOperad::add_operation(std::string name, Profile profile) {
    if (by_name_.count(name)) throw DendroError("duplicate operation " + name);
    if (static_cast<int>(profile.inputs.size()) > bound_) throw DendroError("operation " + name + " exceeds the arity bound");
    for (ColourId c : profile.inputs)
        if (c < 0 || c >= static_cast<ColourId>(colours_.size())) throw DendroError("bad colour in " + name);
    if (profile.output < 0 || profile.output >= static_cast<ColourId>(colours_.size()))
        throw DendroError("bad colour in " + name);
    OpId id = static_cast<OpId>(ops_.size());
    by_name_[name] = id;
    by_profile_[profile].push_back(id);
    action_.emplace_back(factorial(static_cast<int>(profile.inputs.size())), kNone);
    action_.back()[0] = id;
    ops_.push_back({std::move(name), std::move(profile)});
    return id;
}

std::optional<OpId> FiniteOperad::find_op(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

const std::vector<OpId>& FiniteOperad::operations(const Profile& p) const {
    auto it = by_profile_.find(p);
    return it == by_profile_.end() ? kNoOps : it->second;
}

std::vector<Profile> FiniteOperad::profiles() const {
    std::vector<Profile> out;
    for (const auto& [p, ids] : by_profile_) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

void FiniteOperad::set_unit(ColourId c, OpId u) { units_.at(c) = u; }

void FiniteOperad::set_action(OpId p, const Perm& sigma, OpId result) {
    auto& row = action_.at(p);
    if (sigma.size() != ops_[p].profile.inputs.size()) throw DendroError("permutation of the wrong size");
    row.at(perm_rank(sigma)) = result;
}

std::optional<OpId> FiniteOperad::act(OpId p, const Perm& sigma) const {
    const auto& row = action_.at(p);
    if (sigma.size() != ops_[p].profile.inputs.size()) return std::nullopt;
    OpId r = row[perm_rank(sigma)];
    if (r == kNone) return std::nullopt;
    return r;
}

void FiniteOperad::set_composition(OpId p, int slot, OpId q, OpId result) { comp_[comp_key(p, slot, q)] = result; }

std::optional<OpId> FiniteOperad::compose(OpId p, int slot, OpId q) const {
    auto it = comp_.find(comp_key(p, slot, q));
    if (it == comp_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::tuple<OpId, int, OpId, OpId>> FiniteOperad::compositions() const {
    std::vector<std::tuple<OpId, int, OpId, OpId>> out;
    out.reserve(comp_.size());
    for (const auto& [k, r] : comp_)
        out.emplace_back(static_cast<OpId>(k >> 36), static_cast<int>(k & 0xFF),
                         static_cast<OpId>((k >> 8) & 0xFFFFFFF), r);
    std::sort(out.begin(), out.end());
    return out;
}

Profile FiniteOperad::permuted(const Profile& p, const Perm& sigma) {
    Profile r;
    r.output = p.output;
    for (int s : sigma) r.inputs.push_back(p.inputs.at(s));
    return r;
}

namespace {

Profile composite_profile(const Profile& p, int slot, const Profile& q) {
    Profile r;
    r.output = p.output;
    r.inputs.assign(p.inputs.begin(), p.inputs.begin() + slot);
    r.inputs.insert(r.inputs.end(), q.inputs.begin(), q.inputs.end());
    r.inputs.insert(r.inputs.end(), p.inputs.begin() + slot + 1, p.inputs.end());
    return r;
}

}  // namespace

FiniteOperad tabulate(const OperadModel& m) {
    FiniteOperad p(m.name, m.colours, m.arity_bound);
    for (const auto& op : m.operations) p.add_operation(op.name, op.profile);
    auto lookup = [&](const std::string& n, const char* what) {
        auto id = p.find_op(n);
        if (!id) throw DendroError(std::string("model ") + m.name + ": " + what + " gives unknown operation " + n);
        return *id;
    };
    for (ColourId c = 0; c < static_cast<ColourId>(m.colours.size()); ++c) p.set_unit(c, lookup(m.unit(c), "unit"));
    for (OpId a = 0; a < static_cast<OpId>(p.op_count()); ++a) {
        const auto& pa = p.op(a);
        for (const auto& s : permutations(pa.arity())) p.set_action(a, s, lookup(m.act(pa, s), "action"));
    }
    for (OpId a = 0; a < static_cast<OpId>(p.op_count()); ++a) {
        const auto& pa = p.op(a);
        for (int slot = 0; slot < pa.arity(); ++slot)
            for (OpId b = 0; b < static_cast<OpId>(p.op_count()); ++b) {
                const auto& pb = p.op(b);
                if (pb.profile.output != pa.profile.inputs[slot]) continue;
                if (pa.arity() + pb.arity() - 1 > m.arity_bound) continue;
                p.set_composition(a, slot, b, lookup(m.compose(pa, slot, pb), "composition"));
            }
    }
    return p;
}

namespace {

struct Checker {
    const FiniteOperad& p;
    int depth;
    ValidationReport r;

    bool fail(const std::string& law, const std::string& witness) {
        if (r.ok) {
            r.ok = false;
            r.law = law;
            r.witness = witness;
        }
        return false;
    }
    const std::string& nm(OpId x) const { return p.op(x).name; }
    int ar(OpId x) const { return p.op(x).arity(); }
    std::string c3(OpId a, int i, OpId b) const { return nm(a) + " o_" + std::to_string(i) + " " + nm(b); }

    std::optional<OpId> comp(OpId a, int i, OpId b) {
        auto c = p.compose(a, i, b);
        if (!c) fail("composition-table", c3(a, i, b) + " is undefined");
        return c;
    }

    bool run() {
        const auto n = static_cast<OpId>(p.op_count());
        const auto nc = static_cast<ColourId>(p.colour_count());
        for (ColourId c = 0; c < nc; ++c) {
            OpId u = p.unit(c);
            if (u == kNone) return fail("unit", "colour " + p.colour(c) + " has no unit");
            if (p.op(u).profile != Profile{{c}, c}) return fail("unit", nm(u) + " is not in P(c;c) for c = " + p.colour(c));
        }
        // action
        for (OpId a = 0; a < n; ++a) {
            const auto perms = permutations(ar(a));
            if (p.act(a, identity_perm(ar(a))) != a) return fail("action-identity", nm(a));
            for (const auto& s : perms) {
                auto b = p.act(a, s);
                if (!b) return fail("action-table", nm(a) + " has no image under a permutation");
                if (p.op(*b).profile != FiniteOperad::permuted(p.op(a).profile, s))
                    return fail("action-profile", nm(a) + " -> " + nm(*b));
            }
            if (ar(a) <= 4)
                for (const auto& s : perms)
                    for (const auto& t : perms) {
                        auto lhs = p.act(*p.act(a, s), t);
                        auto rhs = p.act(a, compose_perm(s, t));
                        if (lhs != rhs) return fail("action-composite", nm(a));
                    }
        }
        // composition table and units
        for (OpId a = 0; a < n; ++a)
            for (int i = 0; i < ar(a); ++i)
                for (OpId b = 0; b < n; ++b) {
                    if (p.op(b).profile.output != p.op(a).profile.inputs[i]) continue;
                    if (ar(a) + ar(b) - 1 > depth) continue;
                    auto c = comp(a, i, b);
                    if (!c) return false;
                    if (p.op(*c).profile != composite_profile(p.op(a).profile, i, p.op(b).profile))
                        return fail("composition-profile", c3(a, i, b) + " = " + nm(*c));
                }
        for (OpId a = 0; a < n; ++a) {
            OpId u = p.unit(p.op(a).profile.output);
            if (p.compose(u, 0, a) != a) return fail("left-unit", nm(u) + " o_0 " + nm(a));
            for (int i = 0; i < ar(a); ++i) {
                OpId v = p.unit(p.op(a).profile.inputs[i]);
                if (p.compose(a, i, v) != a) return fail("right-unit", c3(a, i, v));
            }
        }
        // associativity, both kinds, and equivariance
        for (OpId a = 0; a < n; ++a)
            for (int i = 0; i < ar(a); ++i)
                for (OpId b = 0; b < n; ++b) {
                    if (p.op(b).profile.output != p.op(a).profile.inputs[i]) continue;
                    const int m = ar(b);
                    if (ar(a) + m - 1 > depth) continue;
                    OpId ab = *p.compose(a, i, b);
                    for (OpId c = 0; c < n; ++c) {
                        const int l = ar(c);
                        if (ar(a) + m + l - 2 > depth) continue;
                        for (int j = 0; j < m; ++j) {
                            if (p.op(c).profile.output != p.op(b).profile.inputs[j]) continue;
                            auto lhs = comp(ab, i + j, c);
                            auto bc = comp(b, j, c);
                            if (!lhs || !bc) return false;
                            auto rhs = comp(a, i, *bc);
                            if (!rhs) return false;
                            if (*lhs != *rhs) return fail("associativity", "(" + c3(a, i, b) + ") o_" + std::to_string(i + j) + " " + nm(c));
                        }
                        for (int k = i + 1; k < ar(a); ++k) {
                            if (p.op(c).profile.output != p.op(a).profile.inputs[k]) continue;
                            if (ar(a) + l - 1 > depth) continue;  // a o_k c itself is out of range
                            auto lhs = comp(ab, k + m - 1, c);
                            auto ac = comp(a, k, c);
                            if (!lhs || !ac) return false;
                            auto rhs = comp(*ac, i, b);
                            if (!rhs) return false;
                            if (*lhs != *rhs) return fail("parallel-associativity", "(" + c3(a, i, b) + ") o_" + std::to_string(k + m - 1) + " " + nm(c));
                        }
                    }
                }
        for (OpId a = 0; a < n; ++a) {
            const int na = ar(a);
            if (na > 4) continue;
            for (const auto& s : permutations(na)) {
                OpId as = *p.act(a, s);
                for (int j = 0; j < na; ++j)
                    for (OpId b = 0; b < n; ++b) {
                        if (p.op(b).profile.output != p.op(as).profile.inputs[j]) continue;
                        const int m = ar(b);
                        if (na + m - 1 > depth) continue;
                        OpId lhs = *p.compose(as, j, b);
                        OpId inner = *p.compose(a, s[j], b);
                        auto pos = [&](int q) { return q < s[j] ? q : q + m - 1; };
                        Perm big;
                        for (int t = 0; t < na + m - 1; ++t) {
                            if (t < j)
                                big.push_back(pos(s[t]));
                            else if (t < j + m)
                                big.push_back(s[j] + (t - j));
                            else
                                big.push_back(pos(s[t - m + 1]));
                        }
                        if (p.act(inner, big) != lhs) return fail("equivariance", nm(as) + " o_" + std::to_string(j) + " " + nm(b));
                    }
            }
            for (int i = 0; i < na; ++i)
                for (OpId b = 0; b < n; ++b) {
                    if (p.op(b).profile.output != p.op(a).profile.inputs[i]) continue;
                    const int m = ar(b);
                    if (na + m - 1 > depth || m > 4) continue;
                    OpId ab = *p.compose(a, i, b);
                    for (const auto& t : permutations(m)) {
                        OpId bt = *p.act(b, t);
                        OpId lhs = *p.compose(a, i, bt);
                        Perm big = identity_perm(na + m - 1);
                        for (int u = 0; u < m; ++u) big[i + u] = i + t[u];
                        if (p.act(ab, big) != lhs) return fail("equivariance", c3(a, i, bt));
                    }
                }
        }
        return true;
    }
};

}  // namespace

ValidationReport validate(const FiniteOperad& p, int depth) {
    Checker c{p, depth < 0 ? p.arity_bound() : std::min(depth, p.arity_bound()), {}};
    c.run();
    return c.r;
}

OperadMorphism identity_morphism(const FiniteOperad& p) {
    OperadMorphism f;
    f.source = &p;
    f.target = &p;
    f.colour_map.resize(p.colour_count());
    std::iota(f.colour_map.begin(), f.colour_map.end(), 0);
    f.op_map.resize(p.op_count());
    std::iota(f.op_map.begin(), f.op_map.end(), 0);
    return f;
}

ValidationReport validate_morphism(const OperadMorphism& f) {
    ValidationReport r;
    auto fail = [&](std::string law, std::string w) {
        r.ok = false;
        r.law = std::move(law);
        r.witness = std::move(w);
        return r;
    };
    const auto& P = *f.source;
    const auto& Q = *f.target;
    if (f.colour_map.size() != P.colour_count() || f.op_map.size() != P.op_count()) return fail("shape", "map sizes");
    auto image = [&](const Profile& pr) {
        Profile out;
        out.output = f.colour_map[pr.output];
        for (ColourId c : pr.inputs) out.inputs.push_back(f.colour_map[c]);
        return out;
    };
    for (OpId a = 0; a < static_cast<OpId>(P.op_count()); ++a)
        if (Q.op(f.op_map[a]).profile != image(P.op(a).profile)) return fail("profile", P.op(a).name);
    for (ColourId c = 0; c < static_cast<ColourId>(P.colour_count()); ++c)
        if (f.op_map[P.unit(c)] != Q.unit(f.colour_map[c])) return fail("unit", P.colour(c));
    for (const auto& [a, i, b, c] : P.compositions()) {
        auto q = Q.compose(f.op_map[a], i, f.op_map[b]);
        if (q && *q != f.op_map[c]) return fail("composition", P.op(a).name + " o_" + std::to_string(i) + " " + P.op(b).name);
    }
    for (OpId a = 0; a < static_cast<OpId>(P.op_count()); ++a)
        for (const auto& s : permutations(P.op(a).arity()))
            if (Q.act(f.op_map[a], s) != f.op_map[*P.act(a, s)]) return fail("action", P.op(a).name);
    return r;
}

std::optional<OpId> inverse_of(const FiniteOperad& p, OpId u) {
    const auto& pr = p.op(u).profile;
    if (pr.inputs.size() != 1) return std::nullopt;
    ColourId c = pr.inputs[0], d = pr.output;
    for (OpId v : p.operations({{d}, c}))
        if (p.compose(v, 0, u) == p.unit(c) && p.compose(u, 0, v) == p.unit(d)) return v;
    return std::nullopt;
}

namespace {

template <class F>
void for_each_profile(std::size_t colours, int max_arity, F&& fn) {
    for (int n = 0; n <= max_arity; ++n) {
        std::vector<ColourId> ins(n, 0);
        while (true) {
            for (ColourId out = 0; out < static_cast<ColourId>(colours); ++out) fn(Profile{ins, out});
            int k = n - 1;
            while (k >= 0 && ins[k] + 1 == static_cast<ColourId>(colours)) ins[k--] = 0;
            if (k < 0) break;
            ++ins[k];
        }
    }
}

}  // namespace

bool is_equivalence(const OperadMorphism& f) {
    const auto& P = *f.source;
    const auto& Q = *f.target;
    const int bound = std::min(P.arity_bound(), Q.arity_bound());
    bool full = true;
    for_each_profile(P.colour_count(), bound, [&](const Profile& pr) {
        if (!full) return;
        Profile im;
        im.output = f.colour_map[pr.output];
        for (ColourId c : pr.inputs) im.inputs.push_back(f.colour_map[c]);
        const auto& src = P.operations(pr);
        const auto& dst = Q.operations(im);
        if (src.size() != dst.size()) {
            full = false;
            return;
        }
        std::vector<OpId> img;
        for (OpId a : src) img.push_back(f.op_map[a]);
        std::sort(img.begin(), img.end());
        if (std::adjacent_find(img.begin(), img.end()) != img.end()) full = false;
    });
    if (!full) return false;
    for (ColourId d = 0; d < static_cast<ColourId>(Q.colour_count()); ++d) {
        bool reached = false;
        for (ColourId c = 0; c < static_cast<ColourId>(P.colour_count()) && !reached; ++c)
            for (OpId u : Q.operations({{f.colour_map[c]}, d}))
                if (inverse_of(Q, u)) {
                    reached = true;
                    break;
                }
        if (!reached) return false;
    }
    return true;
}

bool is_operadic_fibration(const OperadMorphism& f) {
    const auto& P = *f.source;
    const auto& Q = *f.target;
    for (ColourId a1 = 0; a1 < static_cast<ColourId>(P.colour_count()); ++a1)
        for (ColourId b0 = 0; b0 < static_cast<ColourId>(Q.colour_count()); ++b0)
            for (OpId beta : Q.operations({{b0}, f.colour_map[a1]})) {
                if (!inverse_of(Q, beta)) continue;
                bool lifted = false;
                for (ColourId a0 = 0; a0 < static_cast<ColourId>(P.colour_count()) && !lifted; ++a0) {
                    if (f.colour_map[a0] != b0) continue;
                    for (OpId alpha : P.operations({{a0}, a1}))
                        if (f.op_map[alpha] == beta && inverse_of(P, alpha)) {
                            lifted = true;
                            break;
                        }
                }
                if (!lifted) return false;
            }
    return true;
}

std::vector<Dendrex> tree_dendrices(const FiniteOperad& p, const Tree& t) {
    for (const auto& v : t.vertices())
        if (static_cast<int>(v.inputs.size()) > p.arity_bound()) throw DendroError("tree arity exceeds the operad's bound");
    std::vector<std::vector<OpId>> by_output(p.colour_count());
    for (OpId a = 0; a < static_cast<OpId>(p.op_count()); ++a) by_output[p.op(a).profile.output].push_back(a);
    std::vector<Dendrex> out;
    Dendrex x{std::vector<ColourId>(t.edge_count(), kNone), std::vector<OpId>(t.vertex_count(), kNone)};
    // edges in an order where each edge comes after the edge below it
    std::vector<EdgeId> order{t.root()};
    for (std::size_t i = 0; i < order.size(); ++i)
        if (VertexId v = t.producer(order[i]); v != kNone)
            for (EdgeId e : t.vertex(v).inputs) order.push_back(e);
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == order.size()) {
            out.push_back(x);
            return;
        }
        EdgeId e = order[i];
        auto with_colour = [&](ColourId c) {
            x.colour[e] = c;
            VertexId v = t.producer(e);
            if (v == kNone) {
                go(i + 1);
                return;
            }
            const auto& ins = t.vertex(v).inputs;
            for (OpId a : by_output[c]) {
                const auto& pr = p.op(a).profile;
                if (pr.inputs.size() != ins.size()) continue;
                bool ok = true;
                for (std::size_t k = 0; k < ins.size() && ok; ++k)
                    if (x.colour[ins[k]] != kNone && x.colour[ins[k]] != pr.inputs[k]) ok = false;
                if (!ok) continue;
                x.op[v] = a;
                for (std::size_t k = 0; k < ins.size(); ++k) x.colour[ins[k]] = pr.inputs[k];
                go(i + 1);
                for (EdgeId in : ins) x.colour[in] = kNone;
            }
            x.op[v] = kNone;
        };
        if (x.colour[e] != kNone) {
            // already fixed by the vertex below
            ColourId c = x.colour[e];
            with_colour(c);
            x.colour[e] = c;
        } else {
            for (ColourId c = 0; c < static_cast<ColourId>(p.colour_count()); ++c) with_colour(c);
            x.colour[e] = kNone;
        }
    };
    go(0);
    std::sort(out.begin(), out.end());
    return out;
}

OpId region_composite(const FiniteOperad& p, const Tree& t, const Dendrex& x, VertexSet region, EdgeId output,
                      const std::vector<EdgeId>& inputs) {
    struct Part {
        OpId op;
        std::vector<EdgeId> order;
    };
    std::function<Part(EdgeId)> build = [&](EdgeId out) -> Part {
        VertexId v = t.producer(out);
        if (v == kNone || !(region & bit(v))) throw DendroError("region does not produce its output");
        Part cur{x.op.at(v), t.vertex(v).inputs};
        std::vector<std::pair<EdgeId, Part>> kids;
        for (EdgeId e : t.vertex(v).inputs)
            if (VertexId w = t.producer(e); w != kNone && (region & bit(w))) kids.emplace_back(e, build(e));
        std::stable_sort(kids.begin(), kids.end(),
                         [](const auto& a, const auto& b) { return a.second.order.size() < b.second.order.size(); });
        for (auto& [e, part] : kids) {
            auto it = std::find(cur.order.begin(), cur.order.end(), e);
            int slot = static_cast<int>(it - cur.order.begin());
            auto c = p.compose(cur.op, slot, part.op);
            if (!c) throw DendroError("composite beyond the arity bound of " + p.name());
            cur.op = *c;
            it = cur.order.erase(it);
            cur.order.insert(it, part.order.begin(), part.order.end());
        }
        return cur;
    };
    Part whole = build(output);
    if (whole.order.size() != inputs.size()) throw DendroError("region inputs do not match");
    Perm s;
    for (EdgeId e : inputs) {
        auto it = std::find(whole.order.begin(), whole.order.end(), e);
        if (it == whole.order.end()) throw DendroError("region inputs do not match");
        s.push_back(static_cast<int>(it - whole.order.begin()));
    }
    auto r = p.act(whole.op, s);
    if (!r) throw DendroError("missing symmetric action in " + p.name());
    return *r;
}

Dendrex restrict_dendrex(const FiniteOperad& p, const Tree& t, const Dendrex& x, const Face& f) {
    FaceShape shape = face_shape(t, f);
    Dendrex y;
    for (EdgeId s = 0; s < static_cast<EdgeId>(shape.tree.edge_count()); ++s) y.colour.push_back(x.colour.at(shape.to_host[s]));
    for (VertexId k = 0; k < static_cast<VertexId>(shape.tree.vertex_count()); ++k) {
        const auto& sv = shape.tree.vertex(k);
        std::vector<EdgeId> ins;
        for (EdgeId e : sv.inputs) ins.push_back(shape.to_host[e]);
        y.op.push_back(region_composite(p, t, x, shape.region[k], shape.to_host[sv.output], ins));
    }
    return y;
}

std::string operad_to_json(const FiniteOperad& p) {
    json j;
    j["format"] = "dendro-operad";
    j["version"] = 1;
    j["name"] = p.name();
    j["arity_bound"] = p.arity_bound();
    j["colours"] = p.colours();
    json ops = json::array();
    for (OpId a = 0; a < static_cast<OpId>(p.op_count()); ++a) {
        const auto& o = p.op(a);
        json ins = json::array();
        for (ColourId c : o.profile.inputs) ins.push_back(p.colour(c));
        ops.push_back({{"name", o.name}, {"inputs", ins}, {"output", p.colour(o.profile.output)}});
    }
    j["operations"] = ops;
    json units = json::object();
    for (ColourId c = 0; c < static_cast<ColourId>(p.colour_count()); ++c)
        if (p.unit(c) != kNone) units[p.colour(c)] = p.op(p.unit(c)).name;
    j["units"] = units;
    json action = json::array();
    for (OpId a = 0; a < static_cast<OpId>(p.op_count()); ++a)
        for (const auto& s : permutations(p.op(a).arity())) {
            if (s == identity_perm(p.op(a).arity())) continue;
            if (auto r = p.act(a, s)) action.push_back({{"op", p.op(a).name}, {"perm", s}, {"result", p.op(*r).name}});
        }
    j["action"] = action;
    json comp = json::array();
    for (const auto& [a, i, b, c] : p.compositions())
        comp.push_back({{"outer", p.op(a).name}, {"slot", i}, {"inner", p.op(b).name}, {"result", p.op(c).name}});
    j["composition"] = comp;
    return j.dump(1) + "\n";
}

FiniteOperad operad_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DendroError(std::string("operad file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "dendro-operad") throw DendroError("not an operad document");
        FiniteOperad p(j.value("name", "operad"), j.at("colours").get<std::vector<std::string>>(), j.at("arity_bound").get<int>());
        auto colour = [&](const json& c) {
            auto id = p.find_colour(c.get<std::string>());
            if (!id) throw DendroError("unknown colour " + c.get<std::string>());
            return *id;
        };
        auto op = [&](const json& n) {
            auto id = p.find_op(n.get<std::string>());
            if (!id) throw DendroError("unknown operation " + n.get<std::string>());
            return *id;
        };
        for (const auto& o : j.at("operations")) {
            Profile pr;
            for (const auto& c : o.at("inputs")) pr.inputs.push_back(colour(c));
            pr.output = colour(o.at("output"));
            p.add_operation(o.at("name").get<std::string>(), pr);
        }
        for (const auto& [c, u] : j.at("units").items()) p.set_unit(colour(json(c)), op(u));
        for (const auto& a : j.value("action", json::array())) {
            Perm s = a.at("perm").get<Perm>();
            OpId x = op(a.at("op"));
            auto sorted = s;
            std::sort(sorted.begin(), sorted.end());
            if (sorted != identity_perm(p.op(x).arity())) throw DendroError("bad permutation for " + p.op(x).name);
            p.set_action(x, s, op(a.at("result")));
        }
        for (const auto& c : j.value("composition", json::array())) {
            OpId a = op(c.at("outer"));
            int slot = c.at("slot").get<int>();
            if (slot < 0 || slot >= p.op(a).arity()) throw DendroError("bad slot for " + p.op(a).name);
            p.set_composition(a, slot, op(c.at("inner")), op(c.at("result")));
        }
        return p;
    } catch (const json::exception& e) {
        throw DendroError(std::string("malformed operad: ") + e.what());
    }
}

namespace samples {

namespace {

// words: the order in which the inputs are multiplied, 0-based letters
std::string word_name(const std::vector<int>& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int a : w) s += std::to_string(a + 1);
    return s;
}

std::vector<int> name_word(std::string_view n) {
    std::vector<int> w;
    for (char c : n) {
        if (c == '[') break;
        if (c == 'e') continue;
        w.push_back(c - '1');
    }
    return w;
}

std::vector<int> word_compose(const std::vector<int>& p, int slot, const std::vector<int>& q) {
    const int m = static_cast<int>(q.size());
    std::vector<int> r;
    for (int a : p) {
        if (a < slot)
            r.push_back(a);
        else if (a == slot)
            for (int b : q) r.push_back(b + slot);
        else
            r.push_back(a + m - 1);
    }
    return r;
}

std::vector<int> word_act(const std::vector<int>& w, const Perm& s) {
    Perm inv = inverse_perm(s);
    std::vector<int> r;
    for (int a : w) r.push_back(inv[a]);
    return r;
}

std::string keep_name(const Operation& p, const Perm&) { return p.name; }

}  // namespace

FiniteOperad comm(int bound) {
    OperadModel m;
    m.name = "comm";
    m.colours = {"*"};
    m.arity_bound = bound;
    for (int n = 0; n <= bound; ++n) m.operations.push_back({"mu" + std::to_string(n), {std::vector<ColourId>(n, 0), 0}});
    m.compose = [](const Operation& p, int, const Operation& q) { return "mu" + std::to_string(p.arity() + q.arity() - 1); };
    m.act = keep_name;
    m.unit = [](ColourId) { return std::string("mu1"); };
    return tabulate(m);
}

FiniteOperad ass(int bound) {
    OperadModel m;
    m.name = "ass";
    m.colours = {"*"};
    m.arity_bound = bound;
    for (int n = 0; n <= bound; ++n)
        for (const auto& w : permutations(n)) m.operations.push_back({word_name(w), {std::vector<ColourId>(n, 0), 0}});
    m.compose = [](const Operation& p, int slot, const Operation& q) {
        return word_name(word_compose(name_word(p.name), slot, name_word(q.name)));
    };
    m.act = [](const Operation& p, const Perm& s) { return word_name(word_act(name_word(p.name), s)); };
    m.unit = [](ColourId) { return std::string("1"); };
    return tabulate(m);
}

FiniteOperad cyclic_group(int k) {
    OperadModel m;
    m.name = "z" + std::to_string(k);
    m.colours = {"*"};
    m.arity_bound = 1;
    for (int i = 0; i < k; ++i) m.operations.push_back({"g" + std::to_string(i), {{0}, 0}});
    m.compose = [k](const Operation& p, int, const Operation& q) {
        return "g" + std::to_string((std::stoi(p.name.substr(1)) + std::stoi(q.name.substr(1))) % k);
    };
    m.act = keep_name;
    m.unit = [](ColourId) { return std::string("g0"); };
    return tabulate(m);
}

FiniteOperad cyclic_all_arities(int k, int bound) {
    OperadModel m;
    m.name = "z" + std::to_string(k) + "-all";
    m.colours = {"*"};
    m.arity_bound = bound;
    auto nm = [](int g, int n) { return "g" + std::to_string(g) + "/" + std::to_string(n); };
    auto elem = [](const std::string& s) { return std::stoi(s.substr(1, s.find('/') - 1)); };
    for (int n = 0; n <= bound; ++n)
        for (int i = 0; i < k; ++i) m.operations.push_back({nm(i, n), {std::vector<ColourId>(n, 0), 0}});
    m.compose = [=](const Operation& p, int, const Operation& q) {
        return nm((elem(p.name) + elem(q.name)) % k, p.arity() + q.arity() - 1);
    };
    m.act = keep_name;
    m.unit = [=](ColourId) { return nm(0, 1); };
    return tabulate(m);
}

FiniteOperad truncated_monoid(int k, bool points) {
    OperadModel m;
    m.name = "monoid" + std::to_string(k) + (points ? "-points" : "");
    m.colours = {"*"};
    m.arity_bound = 1;
    auto nm = [](int i) { return i == 0 ? std::string("1") : i == 1 ? std::string("a") : "a" + std::to_string(i); };
    auto expo = [](std::string_view s) {
        if (s == "1") return 0;
        if (s == "a") return 1;
        return std::stoi(std::string(s.substr(1)));
    };
    for (int i = 0; i <= k; ++i) m.operations.push_back({nm(i), {{0}, 0}});
    if (points)
        for (int i = 0; i <= k; ++i) m.operations.push_back({"p." + nm(i), {{}, 0}});
    m.compose = [=](const Operation& p, int, const Operation& q) {
        bool pt = q.name.rfind("p.", 0) == 0;
        int e = std::min(k, expo(p.name) + expo(pt ? std::string_view(q.name).substr(2) : std::string_view(q.name)));
        return (pt ? "p." : "") + nm(e);
    };
    m.act = keep_name;
    m.unit = [](ColourId) { return std::string("1"); };
    return tabulate(m);
}

FiniteOperad two_colour(int bound) {
    OperadModel m;
    m.name = "two-colour";
    m.colours = {"a", "b"};
    m.arity_bound = bound;
    auto nm = [](const std::vector<int>& w, const Profile& pr) {
        std::string s = word_name(w) + "[";
        for (ColourId c : pr.inputs) s += c == 0 ? 'a' : 'b';
        s += '>';
        s += pr.output == 0 ? 'a' : 'b';
        return s + "]";
    };
    for (int n = 0; n <= bound; ++n)
        for (int mask = 0; mask < (1 << n); ++mask)
            for (ColourId out = 0; out < 2; ++out) {
                Profile pr;
                pr.output = out;
                bool ok = true;
                for (int i = 0; i < n; ++i) {
                    pr.inputs.push_back((mask >> i) & 1);
                    if (pr.inputs.back() > out) ok = false;
                }
                if (!ok) continue;
                for (const auto& w : permutations(n)) m.operations.push_back({nm(w, pr), pr});
            }
    m.compose = [=](const Operation& p, int slot, const Operation& q) {
        return nm(word_compose(name_word(p.name), slot, name_word(q.name)), composite_profile(p.profile, slot, q.profile));
    };
    m.act = [=](const Operation& p, const Perm& s) {
        return nm(word_act(name_word(p.name), s), FiniteOperad::permuted(p.profile, s));
    };
    m.unit = [=](ColourId c) { return nm({0}, Profile{{c}, c}); };
    return tabulate(m);
}

FiniteOperad iso_pair() {
    OperadModel m;
    m.name = "iso-pair";
    m.colours = {"x", "y"};
    m.arity_bound = 1;
    m.operations = {{"id_x", {{0}, 0}}, {"id_y", {{1}, 1}}, {"f", {{0}, 1}}, {"g", {{1}, 0}}};
    m.compose = [](const Operation& p, int, const Operation& q) {
        if (p.name.rfind("id", 0) == 0) return q.name;
        if (q.name.rfind("id", 0) == 0) return p.name;
        return std::string(p.name == "f" ? "id_y" : "id_x");
    };
    m.act = keep_name;
    m.unit = [](ColourId c) { return std::string(c == 0 ? "id_x" : "id_y"); };
    return tabulate(m);
}

FiniteOperad discrete(int n) {
    OperadModel m;
    m.name = "discrete" + std::to_string(n);
    for (int c = 0; c < n; ++c) m.colours.push_back("c" + std::to_string(c));
    m.arity_bound = 1;
    for (int c = 0; c < n; ++c) m.operations.push_back({"id_c" + std::to_string(c), {{c}, c}});
    m.compose = [](const Operation& p, int, const Operation&) { return p.name; };
    m.act = keep_name;
    m.unit = [](ColourId c) { return "id_c" + std::to_string(c); };
    return tabulate(m);
}

}  // namespace samples

namespace sample_maps {

namespace {

OperadMorphism by_names(const FiniteOperad& s, const FiniteOperad& t, std::vector<ColourId> colours,
                        const std::function<std::string(const Operation&)>& f) {
    OperadMorphism m;
    m.source = &s;
    m.target = &t;
    m.colour_map = std::move(colours);
    for (OpId a = 0; a < static_cast<OpId>(s.op_count()); ++a) {
        auto id = t.find_op(f(s.op(a)));
        if (!id) throw DendroError("sample map misses " + s.op(a).name);
        m.op_map.push_back(*id);
    }
    return m;
}

}  // namespace

OperadMorphism comm_to_ass(const FiniteOperad& comm, const FiniteOperad& ass) {
    return by_names(comm, ass, {0}, [](const Operation& o) {
        if (o.arity() == 0) return std::string("e");
        std::string s;
        for (int i = 1; i <= o.arity(); ++i) s += std::to_string(i);
        return s;
    });
}

OperadMorphism discrete_to_iso_pair(const FiniteOperad& d2, const FiniteOperad& iso) {
    return by_names(d2, iso, {0, 1}, [](const Operation& o) { return o.name == "id_c0" ? std::string("id_x") : std::string("id_y"); });
}

OperadMorphism point_to_iso_pair(const FiniteOperad& d1, const FiniteOperad& iso) {
    return by_names(d1, iso, {0}, [](const Operation&) { return std::string("id_x"); });
}

OperadMorphism cyclic_quotient(const FiniteOperad& big, const FiniteOperad& small) {
    int l = 0;
    for (OpId a = 0; a < static_cast<OpId>(small.op_count()); ++a)
        if (small.op(a).arity() == 1) ++l;
    return by_names(big, small, {0}, [l](const Operation& o) {
        auto slash = o.name.find('/');
        int g = std::stoi(o.name.substr(1, slash == std::string::npos ? std::string::npos : slash - 1)) % l;
        return "g" + std::to_string(g) + (slash == std::string::npos ? std::string() : o.name.substr(slash));
    });
}

}  // namespace sample_maps

std::optional<FiniteOperad> sample_operad(std::string_view name) {
    std::string n(name);
    int bound = -1;
    if (auto c = n.find(':'); c != std::string::npos) {
        try {
            bound = std::stoi(n.substr(c + 1));
        } catch (const std::exception&) {
            return std::nullopt;
        }
        n = n.substr(0, c);
    }
    auto b = [&](int d) { return bound < 0 ? d : bound; };
    if (n == "comm") return samples::comm(b(4));
    if (n == "ass") return samples::ass(b(4));
    if (n == "z2") return samples::cyclic_group(2);
    if (n == "z4") return samples::cyclic_group(4);
    if (n == "z2-all") return samples::cyclic_all_arities(2, b(3));
    if (n == "z4-all") return samples::cyclic_all_arities(4, b(3));
    if (n == "monoid") return samples::truncated_monoid(b(3), false);
    if (n == "monoid-points") return samples::truncated_monoid(b(3), true);
    if (n == "two-colour") return samples::two_colour(b(3));
    if (n == "iso-pair") return samples::iso_pair();
    if (n == "discrete") return samples::discrete(b(2));
    return std::nullopt;
}

std::vector<std::string> sample_operad_names() {
    return {"comm", "ass", "z2", "z4", "z2-all", "z4-all", "monoid", "monoid-points", "two-colour", "iso-pair", "discrete"};
}

}  // namespace dendro
