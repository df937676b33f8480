#include <catch2/catch_amalgamated.hpp>

#include "dendro/joins.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

// root vertex v: a <- b, e; b <- c, d; e carries a nullary vertex
Tree sample_tree() { return parse_tree("(a (b c d) (e))"); }

EdgeSet edges(const Tree& t, std::initializer_list<const char*> names) {
    EdgeSet s = 0;
    for (auto n : names) s |= bit(t.edge(n));
    return s;
}

}  // namespace

TEST_CASE("root joins", "[joins]") {
    auto empty1 = forest_star({}, 1);
    CHECK(empty1.tree.edge_count() == 2);
    CHECK(empty1.tree.vertex_count() == 2);
    CHECK(empty1.tree.vertex(empty1.apex).inputs.empty());
    auto h = inner_horn(std::make_shared<const Tree>(empty1.tree), empty1.chain[0]);
    CHECK(h.generators().size() == 2);

    for (int n = 0; n <= 4; ++n) {
        auto j = forest_star({}, n);
        CHECK(j.tree.edge_count() == static_cast<std::size_t>(n + 1));
        CHECK(j.tree.vertex_count() == static_cast<std::size_t>(n + 1));
    }

    auto c = forest_star({corolla(2)}, 0);
    CHECK(c.tree.vertex_count() == 2);
    CHECK(c.tree.edge_count() == 4);

    auto l = forest_star({Tree::eta("x")}, 1);
    CHECK(canonical_code(l.tree) == canonical_code(linear_tree(2)));
}

TEST_CASE("unary root decompositions", "[joins]") {
    auto f = has_unary_root_join(linear_tree(2));
    REQUIRE(f);
    REQUIRE(f->size() == 1);
    CHECK((*f)[0].edge_count() == 1);

    auto two = forest_star({Tree::eta("x"), Tree::eta("y")}, 1);
    auto g = has_unary_root_join(two.tree);
    REQUIRE(g);
    CHECK(same_forest(*g, {Tree::eta("p"), Tree::eta("q")}));

    CHECK_FALSE(has_unary_root_join(corolla(2)).has_value());
    CHECK_FALSE(has_unary_root_join(linear_tree(1)).has_value());

    auto e = forest_star({}, 1);
    auto h = has_unary_root_join(e.tree);
    REQUIRE(h);
    CHECK(h->empty());

    for (const auto& t : enumerate_trees(4, 7)) {
        if (t.vertex_count() == 0) continue;
        auto ds = join_decompositions(t);
        REQUIRE_FALSE(ds.empty());
        for (const auto& [forest, n] : ds)
            CHECK(canonical_code(forest_star(forest, n).tree) == canonical_code(t));
    }
}

TEST_CASE("admissible edge sets", "[joins]") {
    Tree t = sample_tree();
    CHECK_FALSE(is_admissible(t, edges(t, {"b", "c"})));
    CHECK(is_admissible(t, edges(t, {"b", "c", "d", "e"})));
    CHECK(is_admissible(t, 0));
    CHECK(is_admissible(t, edges(t, {"a"})));
    CHECK_FALSE(is_admissible(t, edges(t, {"c"})));
}

TEST_CASE("boundary forests", "[joins]") {
    Tree c = corolla(2);
    auto b = boundary_forest(c, 0);
    REQUIRE(b.parts.size() == 1);
    CHECK(b.parts[0] == identity_face(c));

    auto r = boundary_forest(c, bit(c.root()));
    CHECK(same_forest(r.trees(c), {Tree::eta("x"), Tree::eta("y")}));

    Tree l1 = linear_tree(1);
    CHECK(boundary_forest(l1, l1.all_edges()).parts.empty());

    Tree t = sample_tree();
    CHECK_THROWS_AS(boundary_forest(t, edges(t, {"b", "c"})), DendroError);
}

TEST_CASE("boundary forests do not depend on the step order", "[joins][oracle]") {
    std::mt19937 rng(11);
    for (const auto& t : enumerate_trees(4, 5)) {
        const EdgeSet all = t.all_edges();
        for (EdgeSet a = 0;; a = (a - all) & all) {
            if (is_admissible(t, a)) {
                auto ref = boundary_forest(t, a);
                for (int k = 0; k < 6; ++k) {
                    auto other = boundary_forest(t, a, &rng);
                    CHECK(other.parts == ref.parts);
                }
            }
            if (a == all) break;
        }
    }
}

TEST_CASE("realized boundary joins do not depend on the step order", "[joins]") {
    std::mt19937 rng(5);
    for (const auto& t : enumerate_trees(3, 5)) {
        Forest forest{t, corolla(0)};
        auto join = forest_star(forest, 1);
        for (const auto& a : all_admissible_sets(forest)) {
            auto ref = join_boundary_face(forest, join, a);
            for (int k = 0; k < 4; ++k) {
                auto other = join_boundary_face(forest, join, a, &rng);
                CHECK(other.has_value() == ref.has_value());
                if (other && ref) CHECK(*other == *ref);
            }
        }
    }
}

TEST_CASE("boundary forests of nested admissible sets embed as faces", "[joins]") {
    for (const auto& t : enumerate_trees(3, 4)) {
        Forest forest{t};
        for (int n = 0; n <= 2; ++n) {
            auto join = forest_star(forest, n);
            auto sets = all_admissible_sets(forest);
            for (const auto& a : sets)
                for (const auto& b : sets) {
                    if ((a[0] & ~b[0]) != 0) continue;
                    auto fa = join_boundary_face(forest, join, a);
                    auto fb = join_boundary_face(forest, join, b);
                    if (!fa || !fb) continue;
                    CHECK(is_subface(*fb, *fa));
                }
        }
    }
}

TEST_CASE("unrealizable boundary joins are detected", "[joins]") {
    Forest forest{linear_tree(1)};
    auto join = forest_star(forest, 2);
    CHECK(join_boundary_face(forest, join, {0}).has_value());
    CHECK_FALSE(join_boundary_face(forest, join, {linear_tree(1).all_edges()}).has_value());
    // a nullary member disappears by contraction into the apex
    Forest nullary{corolla(0)};
    auto j2 = forest_star(nullary, 1);
    auto f = join_boundary_face(nullary, j2, {bit(0)});
    REQUIRE(f);
    CHECK(canonical_code(face_shape(j2.tree, *f).tree) == canonical_code(forest_star({}, 1).tree));
}

TEST_CASE("leaf joins", "[joins]") {
    Tree c = corolla(2);
    auto j = leaf_star(1, c, c.edge("a1"));
    CHECK(j.tree.vertex_count() == 3);
    CHECK(j.tree.edge_count() == 5);
    auto top = j.tree.producer(j.chain[1]);
    CHECK(j.tree.vertex(top).inputs.size() == 1);
    CHECK(j.tree.is_top_vertex(top));

    auto z = leaf_star(0, c, c.edge("a1"));
    CHECK(z.tree.edge_count() == 4);
    CHECK(z.tree.vertex_count() == 2);
    CHECK(j.tree.is_leaf(j.chain[0]));
    CHECK_THROWS_AS(leaf_star(1, c, c.root()), DendroError);
}

TEST_CASE("unary top vertices split off as 0-joins", "[joins]") {
    for (const auto& s : enumerate_trees(4, 6)) {
        if (s.vertex_count() < 2) continue;
        for (VertexId v = 0; v < static_cast<VertexId>(s.vertex_count()); ++v) {
            const auto& vx = s.vertex(v);
            if (vx.inputs.size() != 1 || !s.is_leaf(vx.inputs[0])) continue;
            auto split = unary_top_decomposition(s, vx.output);
            REQUIRE(split);
            auto rebuilt = leaf_star(0, split->rest, split->leaf);
            CHECK(canonical_code(rebuilt.tree) == canonical_code(s));
        }
    }
}

TEST_CASE("e-admissible faces", "[joins]") {
    Tree c = corolla(2);
    EdgeId e = c.edge("a1");
    auto fs = e_admissible_faces(c, e);
    CHECK(std::find(fs.begin(), fs.end(), identity_face(c)) != fs.end());
    CHECK(std::find(fs.begin(), fs.end(), Face{bit(e), 0}) != fs.end());
    Tree t = parse_tree("(r (x a b) c)");
    EdgeId a = t.edge("a");
    auto ts = e_admissible_faces(t, a);
    Face chop{t.all_edges() & ~(bit(a) | bit(t.edge("b"))), bit(t.producer(t.edge("x")))};
    chop.vertices = t.all_vertices() & ~bit(t.producer(t.edge("x")));
    CHECK(std::find(ts.begin(), ts.end(), chop) == ts.end());
    for (const auto& f : ts) {
        auto shape = face_shape(t, f);
        for (EdgeId k = 0; k < static_cast<EdgeId>(shape.to_host.size()); ++k)
            if (shape.to_host[k] == a) CHECK(shape.tree.is_leaf(k));
    }
}
