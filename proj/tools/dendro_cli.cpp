// Command-line front end. Exit codes: 0 accept/true, 1 reject/false with a
// witness, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dendro/kan.hpp"

using namespace dendro;
using json = nlohmann::json;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

std::vector<Tree> tree_list(const std::string& s) {
    std::vector<Tree> out;
    for (const auto& part : split(s, ';'))
        if (!trim(part).empty()) out.push_back(tree_literal(trim(part)));
    return out;
}

FiniteOperad load_operad(const std::string& spec) {
    if (auto p = sample_operad(spec)) return *p;
    if (std::filesystem::exists(spec)) return operad_from_json(read_file(spec));
    std::string names;
    for (const auto& n : sample_operad_names()) names += (names.empty() ? "" : ", ") + n;
    throw InputError("unknown operad '" + spec + "' (samples: " + names + ", or a file)");
}

std::string edge_names(const Tree& t, EdgeSet s) {
    std::string out;
    for (int e : bits_of(s)) out += (out.empty() ? "" : ",") + t.name(e);
    return "{" + out + "}";
}

HornSpec parse_horn_spec(const Tree& t, const std::string& s) {
    auto parts = split(s, ':');
    auto kind = parse_horn_kind(parts[0]);
    if (!kind || parts.size() > 2) throw InputError("bad horn '" + s + "' (inner:e, end:e or root)");
    HornSpec spec{*kind, kNone};
    if (*kind == HornKind::root) {
        spec.marker = t.root();
    } else {
        if (parts.size() != 2) throw InputError("horn '" + s + "' needs an edge");
        auto e = t.find_edge(parts[1]);
        if (!e) throw InputError("no edge '" + parts[1] + "'");
        spec.marker = *e;
    }
    if (!horn_missing_face(t, identity_face(t), spec)) throw InputError("'" + s + "' is not a horn of this tree");
    return spec;
}

std::string horn_text(const Tree& t, const HornSpec& h) {
    std::string out = horn_kind_name(h.kind);
    if (h.kind != HornKind::root) out += ":" + t.name(h.marker);
    return out;
}

json tree_doc(const Tree& t) {
    return json{{"tree", format_tree(t)}, {"code", canonical_code(t)}, {"edges", t.edge_count()}, {"vertices", t.vertex_count()}};
}

void print_certificate(const Certificate& c) {
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const auto& s = c.steps[i];
        std::cout << i << " " << horn_kind_name(s.kind) << " " << s.marker << " " << format_tree(s.shape);
        if (!s.segment.empty()) std::cout << " [" << s.segment << "]";
        std::cout << "\n";
    }
}

// Output of a filtration: the report line alone with --verify (after an
// independent re-check of the certificate), otherwise the certificate.
int emit_filtration(const FiltrationReport& r, bool verify, const std::string& format) {
    bool ok = r.ok;
    if (verify) {
        auto v = verify_certificate(r.certificate);
        FiltrationReport shown = r;
        if (!v.ok) {
            shown.ok = false;
            shown.message = "verifier: step " + std::to_string(v.failed_step) + ": " + v.message;
        }
        ok = shown.ok;
        std::cout << describe_report(shown) << "\n";
        return ok ? 0 : 1;
    }
    if (format == "doc") {
        std::cout << certificate_to_json(r.certificate) << "\n";
    } else {
        std::cout << describe_report(r) << "\n";
        print_certificate(r.certificate);
    }
    return ok ? 0 : 1;
}

Profile parse_profile(const FiniteOperad& p, const std::string& s) {
    auto gt = s.find('>');
    if (gt == std::string::npos) throw InputError("bad profile '" + s + "' (inputs>output, inputs comma separated)");
    auto colour = [&](const std::string& n) {
        auto c = p.find_colour(trim(n));
        if (!c) throw InputError("no colour '" + trim(n) + "' in " + p.name());
        return *c;
    };
    Profile r;
    std::string ins = trim(s.substr(0, gt));
    if (!ins.empty())
        for (const auto& n : split(ins, ',')) r.inputs.push_back(colour(n));
    r.output = colour(s.substr(gt + 1));
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dendroidal sets: trees, horns, shuffles, anodyne certificates and Kan checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "text, doc or dot")->check(CLI::IsMember({"text", "doc", "dot"}));

    int bound = 6, vertices = 4, arity = 4;
    bool count = false, verify = false;
    std::string s_lit, t_lit, forest_lit, operad_spec, horn_lit, over_spec, profile_lit, start_lit, kinds_lit = "inner",
                                                                                             leaf, file;
    int n = 1, i = 0, dim = 2;

    auto* trees = app.add_subcommand("trees", "enumerate trees up to isomorphism");
    trees->add_option("--bound", bound, "maximal edge count");
    trees->add_option("--vertices", vertices, "maximal vertex count");
    trees->add_option("--arity", arity, "maximal vertex arity");
    trees->add_flag("--count", count);

    auto* faces = app.add_subcommand("faces", "faces of a tree");
    faces->add_option("--t", t_lit)->required();

    auto* horns = app.add_subcommand("horns", "horns of a tree");
    horns->add_option("--t", t_lit)->required();

    auto* shuf = app.add_subcommand("shuffles", "percolation schemes of S (x) T");
    shuf->add_option("--s", s_lit)->required();
    shuf->add_option("--t", t_lit)->required();
    shuf->add_flag("--count", count);

    auto* fl = app.add_subcommand("filtrate-left", "the filtration of Omega[S] (x) Delta[1]");
    fl->add_option("--s", s_lit)->required();
    fl->add_flag("--verify", verify);

    auto* fr = app.add_subcommand("filtrate-right", "the filtration of Delta[1] (x) Omega[T]");
    fr->add_option("--t", t_lit)->required();
    fr->add_flag("--verify", verify);

    auto* fj = app.add_subcommand("filtrate-join", "join filtrations over a forest or a leaf");
    fj->add_option("--forest", forest_lit, "trees separated by ';'");
    fj->add_option("--t", t_lit, "with --leaf: the tree receiving the chain");
    fj->add_option("--leaf", leaf);
    fj->add_option("--n", n)->check(CLI::Range(1, 4));
    fj->add_option("--i", i);
    fj->add_flag("--verify", verify);

    auto* cert = app.add_subcommand("certify", "search for a certificate from start to the whole host");
    cert->add_option("--s", s_lit, "left tensor factor");
    cert->add_option("--t", t_lit, "tree, or right tensor factor")->required();
    cert->add_option("--start", start_lit, "labeled trees separated by ';', a horn of T, or a0-left, b0-right, boundary-left, boundary-right")->required();
    cert->add_option("--kinds", kinds_lit, "allowed horn kinds, comma separated");
    cert->add_flag("--verify", verify);

    auto* ver = app.add_subcommand("verify", "check a certificate document");
    ver->add_option("file", file)->required();

    auto* kan = app.add_subcommand("kan-check", "inner Kan condition on small trees");
    kan->add_option("--operad", operad_spec, "nerve of a sample operad or operad file");
    kan->add_option("--t", t_lit, "representable Omega[T]");
    kan->add_option("--horn", horn_lit, "with --t: the horn of T instead");
    kan->add_option("--vertices", vertices);
    kan->add_option("--bound", bound, "maximal edge count");

    auto* norm = app.add_subcommand("normal-check", "free action of tree automorphisms");
    norm->add_option("--operad", operad_spec);
    norm->add_option("--t", t_lit);
    norm->add_option("--vertices", vertices);
    norm->add_option("--bound", bound, "maximal edge count");

    auto* lift = app.add_subcommand("lift", "root or end horn lifting against every horn assignment");
    lift->add_option("--operad", operad_spec)->required();
    lift->add_option("--t", t_lit)->required();
    lift->add_option("--horn", horn_lit, "root, or end:e")->required();
    lift->add_option("--over", over_spec, "identity, or a cyclic sample for the quotient map");

    auto* ms = app.add_subcommand("mapspace", "the space of maps at a profile and its components");
    ms->add_option("--operad", operad_spec)->required();
    ms->add_option("--profile", profile_lit, "inputs>output, e.g. x,x>x")->required();
    ms->add_option("--dim", dim)->check(CLI::Range(0, 3));

    auto* ov = app.add_subcommand("operad-validate", "check the operad laws");
    ov->add_option("operad", operad_spec)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*trees) {
            std::vector<Tree> out;
            for (const auto& t : enumerate_trees(vertices, bound)) {
                int m = 0;
                for (const auto& v : t.vertices()) m = std::max(m, static_cast<int>(v.inputs.size()));
                if (m <= arity) out.push_back(t);
            }
            if (count) {
                std::cout << out.size() << "\n";
            } else if (format == "doc") {
                json d{{"format", "dendro-trees"}, {"trees", json::array()}};
                for (const auto& t : out) d["trees"].push_back(tree_doc(t));
                std::cout << d.dump(2) << "\n";
            } else if (format == "dot") {
                for (std::size_t k = 0; k < out.size(); ++k) std::cout << to_dot(out[k], "T" + std::to_string(k));
            } else {
                for (const auto& t : out) std::cout << format_tree(t) << "\n";
            }
            return 0;
        }
        if (*faces) {
            Tree t = tree_literal(t_lit);
            auto fs = all_faces(t);
            std::sort(fs.begin(), fs.end(), face_less);
            std::map<Face, std::string> elem;
            for (const auto& e : elementary_faces(t))
                elem[e.face] = e.kind == FaceKind::inner ? "inner:" + t.name(e.edge) : (e.top ? "outer:top" : "outer:root");
            if (format == "doc") {
                json d{{"format", "dendro-faces"}, {"tree", format_tree(t)}, {"faces", json::array()}};
                for (const auto& f : fs) {
                    json j = tree_doc(face_shape(t, f).tree);
                    j["host_edges"] = edge_names(t, f.edges);
                    if (elem.count(f)) j["elementary"] = elem[f];
                    d["faces"].push_back(j);
                }
                std::cout << d.dump(2) << "\n";
            } else if (format == "dot") {
                for (std::size_t k = 0; k < fs.size(); ++k) std::cout << to_dot(face_shape(t, fs[k]).tree, "F" + std::to_string(k));
            } else {
                for (const auto& f : fs) {
                    std::cout << format_tree(face_shape(t, f).tree);
                    if (elem.count(f)) std::cout << "  elementary " << elem[f];
                    std::cout << "\n";
                }
            }
            return 0;
        }
        if (*horns) {
            Tree t = tree_literal(t_lit);
            auto w = std::make_shared<const Tree>(t);
            std::vector<HornSpec> specs;
            for (EdgeId e : t.inner_edges()) specs.push_back({HornKind::inner, e});
            for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e)
                if (horn_missing_face(t, identity_face(t), {HornKind::end, e})) specs.push_back({HornKind::end, e});
            if (horn_missing_face(t, identity_face(t), {HornKind::root, t.root()})) specs.push_back({HornKind::root, t.root()});
            json d{{"format", "dendro-horns"}, {"tree", format_tree(t)}, {"horns", json::array()}};
            for (const auto& h : specs) {
                Face miss = *horn_missing_face(t, identity_face(t), h);
                auto gens = horn(w, h).generators();
                if (format == "doc") {
                    json j{{"horn", horn_text(t, h)}, {"missing", format_tree(face_shape(t, miss).tree)}, {"generators", json::array()}};
                    for (const auto& g : gens) j["generators"].push_back(format_tree(face_shape(t, g).tree));
                    d["horns"].push_back(j);
                } else {
                    std::cout << horn_text(t, h) << " missing " << format_tree(face_shape(t, miss).tree) << " generators "
                              << gens.size() << "\n";
                }
            }
            if (format == "doc") std::cout << d.dump(2) << "\n";
            return 0;
        }
        if (*shuf) {
            Tree s = tree_literal(s_lit), t = tree_literal(t_lit);
            auto x = tensor(s, t);
            if (count) {
                std::cout << x.size() << "\n";
            } else if (format == "dot") {
                for (const auto& sc : x.schemes) std::cout << scheme_dot(sc);
            } else if (format == "doc") {
                json d{{"format", "dendro-shuffles"}, {"s", format_tree(s)}, {"t", format_tree(t)}, {"schemes", json::array()}};
                for (int a = 0; a < x.size(); ++a) {
                    json below = json::array();
                    for (int b = 0; b < x.size(); ++b)
                        if (b != a && x.leq(b, a)) below.push_back(b);
                    d["schemes"].push_back({{"tree", format_tree(x.schemes[a].tree)}, {"after", below}});
                }
                std::cout << d.dump(2) << "\n";
            } else {
                for (int a = 0; a < x.size(); ++a) std::cout << a << " " << format_tree(x.schemes[a].tree) << "\n";
            }
            return 0;
        }
        if (*fl) return emit_filtration(left_cylinder_filtration(tree_literal(s_lit)), verify, format);
        if (*fr) return emit_filtration(right_cylinder_filtration(tree_literal(t_lit)), verify, format);
        if (*fj) {
            if (!leaf.empty()) {
                if (t_lit.empty()) throw InputError("--leaf needs --t");
                Tree t = tree_literal(t_lit);
                auto e = t.find_edge(leaf);
                if (!e || !t.is_leaf(*e)) throw InputError("'" + leaf + "' is not a leaf");
                if (i < 0 || i > n) throw InputError("need 0 <= i <= n");
                return emit_filtration(leaf_join_filtration(t, *e, n, i, e_admissible_faces(t, *e)), verify, format);
            }
            if (forest_lit.empty()) throw InputError("filtrate-join needs --forest or --t with --leaf");
            Forest f = tree_list(forest_lit);
            if (i < 0 || i > n) throw InputError("need 0 <= i <= n");
            return emit_filtration(join_filtration(f, n, i, all_admissible_sets(f)), verify, format);
        }
        if (*cert) {
            Tree t = tree_literal(t_lit);
            HostWorld hw = s_lit.empty() ? representable_world(t)
                                         : tensor_world(std::make_shared<const Tensor>(tensor(tree_literal(s_lit), t)));
            const CellWorld& w = hw.world();
            CellSet start;
            if (hw.tensor && (start_lit == "a0-left" || start_lit == "b0-right" || start_lit == "boundary-left" ||
                              start_lit == "boundary-right")) {
                const Tensor& x = *hw.tensor;
                start = start_lit == "a0-left"         ? a0_left(x)
                        : start_lit == "b0-right"      ? b0_right(x)
                        : start_lit == "boundary-left" ? boundary_left(x)
                                                       : boundary_right(x);
            } else if (s_lit.empty() && parse_horn_kind(split(start_lit, ':')[0])) {
                HornSpec h = parse_horn_spec(t, start_lit);
                start = *horn_cells(w, w.scheme_cell(0), h.kind, marker_label(w, w.scheme_cell(0), h.marker));
            } else {
                auto gens = tree_list(start_lit);
                for (const auto& g : gens)
                    if (!w.find_tree(g)) throw InputError("'" + format_tree(g) + "' is not a cell of the host");
                start = cells_from_trees(w, gens);
            }
            SearchOptions opt;
            opt.kinds.clear();
            for (const auto& k : split(kinds_lit, ',')) {
                auto kk = parse_horn_kind(trim(k));
                if (!kk) throw InputError("bad horn kind '" + k + "'");
                opt.kinds.push_back(*kk);
            }
            auto r = certify_search(hw, start, all_cells(w), opt);
            if (!r.found) {
                std::cout << "REJECT checks=" << r.checks << " reason=\"no certificate found within the budget\"\n";
                return 1;
            }
            if (verify) {
                auto v = verify_certificate(r.certificate);
                std::cout << (v.ok ? "ACCEPT" : "REJECT") << " steps=" << r.certificate.steps.size() << "\n";
                return v.ok ? 0 : 1;
            }
            if (format == "doc")
                std::cout << certificate_to_json(r.certificate) << "\n";
            else
                print_certificate(r.certificate);
            return 0;
        }
        if (*ver) {
            Certificate c;
            try {
                c = certificate_from_json(read_file(file));
            } catch (const DendroError& e) {
                throw InputError(e.what());
            }
            auto v = verify_certificate(c);
            if (v.ok) {
                std::cout << "ACCEPT steps=" << c.steps.size() << " inner=" << v.inner_steps << " end=" << v.end_steps
                          << " root=" << v.root_steps << "\n";
                return 0;
            }
            std::cout << "REJECT step=" << v.failed_step << " reason=\"" << v.message << "\"\n";
            return 1;
        }
        if (*kan || *norm) {
            std::optional<DendSet> x;
            if (!operad_spec.empty() == !t_lit.empty()) throw InputError("give exactly one of --operad and --t");
            if (!operad_spec.empty()) {
                x = DendSet::nerve(load_operad(operad_spec));
            } else {
                Tree t = tree_literal(t_lit);
                if (!horn_lit.empty()) {
                    HornSpec h = parse_horn_spec(t, horn_lit);
                    CellWorld w({t});
                    auto hc = *horn_cells(w, w.scheme_cell(0), h.kind, marker_label(w, w.scheme_cell(0), h.marker));
                    x = DendSet::subcomplex(t, generator_trees(w, hc), "horn " + horn_text(t, h));
                } else {
                    x = DendSet::representable(t);
                }
            }
            if (*kan) {
                auto r = is_inner_kan(*x, vertices, bound);
                std::cout << (r.ok ? "TRUE" : "FALSE") << " trees=" << r.trees << " horns=" << r.horns
                          << " assignments=" << r.assignments << " unique=" << (r.unique ? "yes" : "no") << "\n";
                if (r.counterexample) {
                    const auto& c = *r.counterexample;
                    std::cout << "witness tree " << format_tree(c.tree) << " horn " << horn_text(c.tree, c.spec) << "\n";
                    std::cout << "  " << describe_map(*x, c.horn) << "\n";
                }
                return r.ok ? 0 : 1;
            }
            auto r = is_normal(*x, vertices, bound);
            std::cout << (r.ok ? "TRUE" : "FALSE") << " trees=" << r.trees << " dendrices=" << r.dendrices << "\n";
            if (r.tree) {
                std::cout << "witness tree " << format_tree(*r.tree) << " fixed by";
                for (EdgeId e = 0; e < static_cast<EdgeId>(r.tree->edge_count()); ++e)
                    if (r.automorphism->edge_map[e] != e)
                        std::cout << " " << r.tree->name(e) << "->" << r.tree->name(r.automorphism->edge_map[e]);
                std::cout << "\n  " << describe_map(*x, named_of(*x, *r.tree, *r.fixed)) << "\n";
            }
            return r.ok ? 0 : 1;
        }
        if (*lift) {
            FiniteOperad p = load_operad(operad_spec);
            Tree t = tree_literal(t_lit);
            HornSpec h = parse_horn_spec(t, horn_lit);
            if (h.kind == HornKind::inner) throw InputError("lift takes root or end horns; inner horns are kan-check");
            auto X = DendSet::nerve(p);
            std::optional<FiniteOperad> q;
            std::optional<DendSet> Y;
            OperadMorphism f;
            LiftMap lm{&X};
            if (over_spec == "identity") {
                f = identity_morphism(p);
                lm = {&X, &X, &f};
            } else if (!over_spec.empty()) {
                q = load_operad(over_spec);
                f = sample_maps::cyclic_quotient(p, *q);
                if (!validate_morphism(f).ok) throw InputError("no quotient map " + p.name() + " -> " + q->name());
                Y = DendSet::nerve(*q);
                lm = {&X, &*Y, &f};
            }
            std::map<Verdict, std::size_t> tally;
            bool kan_done = false;
            for (const auto& a : horn_assignments(X, t, h)) {
                TheoremOptions opt;
                opt.check_fibration = !kan_done;
                auto r = h.kind == HornKind::root ? theorem42_check(lm, t, a, opt) : theoremA_check(lm, t, h.marker, a, opt);
                if (r.verdict != Verdict::precondition_failed) kan_done = true;
                ++tally[r.verdict];
                if (format != "doc") std::cout << verdict_name(r.verdict) << "  " << describe_map(X, a) << "\n";
                if (r.verdict == Verdict::precondition_failed) {
                    std::cout << "precondition: " << r.message << "\n";
                    return 1;
                }
            }
            std::cout << "filler=" << tally[Verdict::filler] << " hypothesis-not-met=" << tally[Verdict::hypothesis_not_met]
                      << " counterexample=" << tally[Verdict::counterexample] << "\n";
            return tally[Verdict::counterexample] || tally[Verdict::hypothesis_not_met] ? 1 : 0;
        }
        if (*ms) {
            FiniteOperad p = load_operad(operad_spec);
            Profile rho = parse_profile(p, profile_lit);
            auto X = DendSet::nerve(p);
            auto m = mapping_space(X, rho, dim);
            for (int k = 0; k <= dim; ++k) std::cout << "level " << k << " simplices=" << m.simplices[k].size() << "\n";
            bool disc = is_discrete(m), kanok = satisfies_kan(m);
            auto pi = pi0_mapping_space(X, rho);
            std::cout << "discrete=" << (disc ? "yes" : "no") << " kan=" << (kanok ? "yes" : "no") << " components=" << pi.components
                      << " operations=" << p.operations(rho).size() << " bijective=" << (pi.bijective ? "yes" : "no") << "\n";
            for (const auto& [c, a] : pi.witness) std::cout << "  component " << c << " <-> " << p.op(a).name << "\n";
            return disc && kanok && pi.bijective ? 0 : 1;
        }
        if (*ov) {
            FiniteOperad p;
            try {
                p = load_operad(operad_spec);
            } catch (const DendroError& e) {
                throw InputError(e.what());
            }
            auto r = validate(p);
            if (format == "doc") std::cout << operad_to_json(p) << "\n";
            if (r.ok)
                std::cout << "VALID " << p.name() << " colours=" << p.colour_count() << " operations=" << p.op_count()
                          << " bound=" << p.arity_bound() << "\n";
            else
                std::cout << "INVALID law=" << r.law << " witness=\"" << r.witness << "\"\n";
            return r.ok ? 0 : 1;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DendroError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
