#include <catch2/catch_amalgamated.hpp>

#include "dendro/anodyne.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

CellSet subcomplex_cells(const CellWorld& w, const Subcomplex& s) {
    std::vector<CellId> ids;
    for (const auto& g : s.generators()) ids.push_back(w.id(0, g));
    return close_cells(w, ids);
}

// every step adds exactly the cell and its missing face
void check_monotone(const Certificate& c) {
    auto hw = make_host_world(c.host);
    const CellWorld& w = hw.world();
    CellSet cur = cells_from_trees(w, c.start);
    for (const auto& s : c.steps) {
        auto id = w.find_tree(s.shape);
        REQUIRE(id);
        std::size_t before = cur.size();
        for (CellId g : w.faces_of(*id)) cur.insert(g);
        CHECK(cur.size() == before + 2);
    }
}

Tree grafted_corolla() {
    // corolla(2) with corolla(1) grafted on a leaf
    return parse_tree("(r (a1 b) a2)");
}

}  // namespace

TEST_CASE("verify: identity, horn inclusion, swapped steps", "[anodyne]") {
    Tree t = linear_tree(2);
    auto hw = representable_world(t);
    const CellWorld& w = hw.world();
    CellSet all = all_cells(w);

    Certificate id;
    id.host = hw.host;
    id.start = generator_trees(w, all);
    id.target = id.start;
    CHECK(verify_certificate(id).ok);

    auto sp = std::make_shared<const Tree>(t);
    CellSet horn = subcomplex_cells(w, inner_horn(sp, t.edge("1")));
    Builder b(w, horn);
    REQUIRE(b.adjoin(w.id(0, identity_face(t)), HornKind::inner, w.labels().find("1").value(), ""));
    auto one = b.certificate(hw.host, horn, all);
    REQUIRE(one.steps.size() == 1);
    auto r1 = verify_certificate(one);
    CHECK(r1.ok);
    CHECK(r1.inner_steps == 1);

    // a premature second step: its cell is already there
    Certificate twice = one;
    twice.steps.push_back(one.steps[0]);
    auto r2 = verify_certificate(twice);
    CHECK_FALSE(r2.ok);
    CHECK(r2.failed_step == 1);

    // swapping two dependent steps breaks the horn condition at step 0 or 1
    auto g = left_cylinder_filtration(grafted_corolla());
    REQUIRE(g.ok);
    REQUIRE(g.certificate.steps.size() >= 3);
    int rejected = 0;
    for (std::size_t k = 0; k + 1 < g.certificate.steps.size(); ++k) {
        Certificate sw = g.certificate;
        std::swap(sw.steps[k], sw.steps[k + 1]);
        auto rep = verify_certificate(sw);
        if (!rep.ok) {
            ++rejected;
            CHECK((rep.failed_step == static_cast<int>(k) || rep.failed_step == static_cast<int>(k + 1)));
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("verify rejects tampering", "[anodyne]") {
    auto r = left_cylinder_filtration(linear_tree(1));
    REQUIRE(r.ok);
    auto text = certificate_to_json(r.certificate);
    auto back = certificate_from_json(text);
    CHECK(certificate_to_json(back) == text);
    CHECK(verify_certificate(back).ok);

    Certificate t = back;
    t.steps.pop_back();
    CHECK_FALSE(verify_certificate(t).ok);

    t = back;
    t.steps[0].marker = "nonsense";
    auto rep = verify_certificate(t);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed_step == 0);

    t = back;
    t.steps.push_back(t.steps.back());
    rep = verify_certificate(t);
    CHECK(rep.failed_step == static_cast<int>(back.steps.size()));

    CHECK_THROWS_AS(certificate_from_json("{"), DendroError);
    CHECK_THROWS_AS(certificate_from_json("{\"format\":\"other\"}"), DendroError);
}

TEST_CASE("certify_search", "[anodyne]") {
    for (const Tree& t : {linear_tree(2), corolla(2), grafted_corolla(), parse_tree("(r (a (b c d)) e)")}) {
        auto hw = representable_world(t);
        const CellWorld& w = hw.world();
        auto sp = std::make_shared<const Tree>(t);
        for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) {
            if (!t.is_inner(e)) continue;
            auto res = certify_search(hw, subcomplex_cells(w, inner_horn(sp, e)), all_cells(w));
            REQUIRE(res.found);
            CHECK(res.certificate.steps.size() == 1);
            CHECK(verify_certificate(res.certificate).ok);
        }
    }

    Tree d2 = linear_tree(2);
    auto hw = representable_world(d2);
    const CellWorld& w = hw.world();
    auto bd = subcomplex_cells(w, boundary(std::make_shared<const Tree>(d2)));
    auto res = certify_search(hw, bd, all_cells(w));
    CHECK_FALSE(res.found);
    CHECK_THROWS_AS(certify_search(hw, all_cells(w), bd), DendroError);

    // A_0 for i[1] (x) Delta[1]: inner for all but the last scheme
    auto x = std::make_shared<const Tensor>(tensor(linear_tree(1), linear_tree(1)));
    auto tw = tensor_world(x);
    auto goal = cumulative(*x, a0_left(*x), x->size() - 2);
    auto s = certify_search(tw, a0_left(*x), goal);
    REQUIRE(s.found);
    CHECK(verify_certificate(s.certificate).ok);
    CHECK_FALSE(certify_search(tw, a0_left(*x), whole(*x)).found);
}

TEST_CASE("left cylinder", "[anodyne]") {
    auto l = left_cylinder_filtration(linear_tree(1));
    CHECK(l.ok);
    CHECK(l.segments == 2);
    CHECK(l.final_pushout);
    CHECK(l.exit_edge);
    CHECK(verify_certificate(l.certificate).ok);
    CHECK(l.certificate.steps.back().kind == HornKind::root);

    auto c = left_cylinder_filtration(corolla(2));
    CHECK(c.ok);
    CHECK(c.segments == 2);
    CHECK(describe_report(c) == "ACCEPT segments=2 final=pushout(Λ^r)");
    // T_N: black unary root under a white corolla
    const auto& last = c.host.tensor->schemes.back();
    CHECK(last.tree.vertex_count() == 2);
    CHECK(last.black[last.tree.root_vertex()]);

    auto g = left_cylinder_filtration(grafted_corolla());
    CHECK(g.ok);
    CHECK(g.fallbacks == 0);
    auto v = verify_certificate(g.certificate);
    CHECK(v.ok);
    CHECK(v.root_steps == 1);
    CHECK(v.end_steps == 0);
    check_monotone(g.certificate);

    CHECK_THROWS_AS(left_cylinder_filtration(Tree::eta("e")), DendroError);
}

TEST_CASE("left cylinder on small trees", "[anodyne]") {
    for (const Tree& s : enumerate_trees(3, 5)) {
        if (s.vertex_count() == 0) continue;
        INFO(format_tree(s));
        auto r = left_cylinder_filtration(s);
        CHECK(r.ok);
        CHECK(r.fallbacks == 0);
        CHECK(verify_certificate(r.certificate).ok);
    }
}

TEST_CASE("right cylinder", "[anodyne]") {
    auto l = right_cylinder_filtration(linear_tree(1));
    CHECK(l.ok);
    CHECK(l.first_segment);
    CHECK(l.certificate.steps.front().marker == "0|1");
    auto v = verify_certificate(l.certificate);
    CHECK(v.ok);
    CHECK(v.root_steps == 0);

    auto c = right_cylinder_filtration(corolla(2));
    CHECK(c.ok);
    CHECK(c.end_clauses);
    int ends = 0;
    for (const auto& s : c.certificate.steps)
        if (s.kind == HornKind::end) {
            ++ends;
            // the marker is (1,t): its input is (0,t)
            CHECK(s.marker.rfind("1|", 0) == 0);
            CHECK(s.shape.edge("0|" + s.marker.substr(2)) != kNone);
        }
    CHECK(ends > 0);

    // nullary vertex on the path
    auto n = right_cylinder_filtration(parse_tree("(r (a) b)"));
    CHECK(n.ok);
    CHECK(n.fallbacks == 0);
    CHECK(verify_certificate(n.certificate).ok);

    CHECK_THROWS_AS(right_cylinder_filtration(Tree::eta("e")), DendroError);
}

TEST_CASE("right cylinder on small trees", "[anodyne]") {
    for (const Tree& t : enumerate_trees(3, 5)) {
        if (t.vertex_count() == 0) continue;
        INFO(format_tree(t));
        auto r = right_cylinder_filtration(t);
        CHECK(r.ok);
        CHECK(r.fallbacks == 0);
        CHECK(r.only_inner_or_end);
        CHECK(verify_certificate(r.certificate).ok);
    }
}

TEST_CASE("join filtration", "[anodyne]") {
    for (int n = 1; n <= 3; ++n)
        for (int i = 0; i < n; ++i) {
            auto r = join_filtration({}, n, i, {AdmissibleSet{}});
            CHECK(r.ok);
            CHECK(r.certificate.steps.size() == 1);
            CHECK(verify_certificate(r.certificate).ok);
        }

    Forest c2{corolla(2)};
    auto r = join_filtration(c2, 1, 0, {AdmissibleSet{0}});
    CHECK(r.ok);
    CHECK(verify_certificate(r.certificate).ok);
    // one step per realizable admissible set of corolla(2)
    RootJoin j = forest_star(c2, 1);
    std::set<CellId> faces;
    for (const auto& a : all_admissible_sets(c2))
        if (auto f = join_boundary_face(c2, j, a)) faces.insert(r.host.world().id(0, *f));
    std::size_t fresh = 0;
    for (CellId f : faces)
        if (!r.start.contains(f)) ++fresh;
    CHECK(r.certificate.steps.size() == fresh);

    Forest l1{linear_tree(1)};
    auto m = join_filtration(l1, 2, 1, {AdmissibleSet{0}, AdmissibleSet{l1[0].all_edges()}});
    CHECK(m.ok);
    CHECK(m.certificate.steps.size() >= 2);
    CHECK(verify_certificate(m.certificate).ok);

    CHECK_THROWS_AS(join_filtration(c2, 1, 1, {AdmissibleSet{0}}), DendroError);
    CHECK_THROWS_AS(join_filtration(c2, 1, 0, {}), DendroError);
}

TEST_CASE("join filtration agrees with search", "[anodyne]") {
    std::vector<Forest> forests{{}, {Tree::eta("x")}, {corolla(2)}, {linear_tree(1), corolla(0)}, {corolla(1)}};
    for (const auto& f : forests)
        for (int n = 1; n <= 2; ++n)
            for (int i = 0; i < n; ++i) {
                auto all = all_admissible_sets(f);
                for (std::size_t a = 0; a < all.size(); ++a) {
                    INFO(f.size() << " " << n << " " << i << " " << a);
                    if (!join_boundary_face(f, forest_star(f, n), all[a])) {
                        CHECK_THROWS_AS(join_filtration(f, n, i, {all[a]}), DendroError);
                        continue;
                    }
                    auto r = join_filtration(f, n, i, {all[a]});
                    CHECK(r.ok);
                    CHECK(verify_certificate(r.certificate).ok);
                    auto s = certify_search(r.host, r.start, r.target);
                    CHECK(s.found);
                }
            }
}

TEST_CASE("leaf join filtration", "[anodyne]") {
    Tree c2 = corolla(2);
    EdgeId e = c2.edge("a1");
    for (int n = 1; n <= 2; ++n)
        for (int i = 1; i <= n; ++i) {
            auto r = leaf_join_filtration(c2, e, n, i, {identity_face(c2)});
            CHECK(r.ok);
            CHECK(verify_certificate(r.certificate).ok);
        }

    std::vector<Face> elem;
    for (const auto& ef : elementary_faces(c2))
        if (ef.face.edges & bit(e)) elem.push_back(ef.face);
    auto v = leaf_join_filtration(c2, e, 1, 1, elem);
    CHECK(v.ok);
    CHECK(verify_certificate(v.certificate).ok);

    Face eta{bit(e), 0};
    auto one = leaf_join_filtration(c2, e, 1, 1, {eta});
    CHECK(one.ok);
    CHECK(one.certificate.steps.size() == 1);

    CHECK_THROWS_AS(leaf_join_filtration(c2, e, 1, 0, {eta}), DendroError);
    CHECK_THROWS_AS(leaf_join_filtration(c2, e, 1, 1, {Face{bit(c2.edge("a2")), 0}}), DendroError);

    for (const Tree& t : enumerate_trees(2, 4))
        for (EdgeId l : t.leaves()) {
            INFO(format_tree(t));
            auto r = leaf_join_filtration(t, l, 2, 2, {identity_face(t)});
            CHECK(r.ok);
            CHECK(verify_certificate(r.certificate).ok);
            CHECK(certify_search(r.host, r.start, r.target).found);
        }
}
