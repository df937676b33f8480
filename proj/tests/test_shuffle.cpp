#include <catch2/catch_amalgamated.hpp>

#include "dendro/shuffle.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

std::set<LabelKey> keys_of(const std::vector<Tree>& trees, LabelTable& table) {
    std::set<LabelKey> out;
    for (const auto& t : trees) out.insert(tree_key(t, table));
    return out;
}

std::vector<Tree> scheme_trees(const std::vector<Scheme>& ss) {
    std::vector<Tree> out;
    for (const auto& s : ss) out.push_back(s.tree);
    return out;
}

bool has_nullary(const Tree& t) {
    for (const auto& v : t.vertices())
        if (v.inputs.empty()) return true;
    return false;
}

}  // namespace

TEST_CASE("shuffle counts of linear trees", "[shuffle]") {
    CHECK(shuffles(linear_tree(1), linear_tree(1)).size() == 2);
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q) {
            INFO(p << " " << q);
            CHECK(shuffles(linear_tree(p), linear_tree(q)).size() == oracle::binomial(p + q, p));
        }
}

TEST_CASE("move closure matches level assignments", "[shuffle][oracle]") {
    for (const auto& s : enumerate_trees(4, 6)) {
        for (int q = 1; q <= 2; ++q) {
            INFO(format_tree(s) << " q=" << q);
            LabelTable table;
            auto found = shuffles(s, linear_tree(q));
            auto a = keys_of(scheme_trees(found), table);
            auto b = keys_of(oracle::level_schemes(s, q), table);
            CHECK(a.size() == found.size());
            CHECK(a == b);
        }
    }
}

TEST_CASE("corolla times an interval", "[shuffle]") {
    auto x = tensor(corolla(2), linear_tree(1));
    REQUIRE(x.size() == 2);
    // first: white corolla at the root, blacks on both leaves
    const auto& first = x.schemes[0];
    VertexId r0 = first.tree.root_vertex();
    CHECK_FALSE(first.black[r0]);
    CHECK(std::count(first.black.begin(), first.black.end(), 1) == 2);
    // last: a black unary root under the white corolla
    const auto& last = x.schemes[1];
    VertexId r1 = last.tree.root_vertex();
    CHECK(last.black[r1]);
    CHECK(last.tree.vertex(r1).inputs.size() == 1);
    CHECK(x.leq(0, 1));
    CHECK_FALSE(x.leq(1, 0));
    CHECK(common_face_bound(x, 0, 1));
    CHECK(common_face_bound(x, 1, 0));
}

TEST_CASE("the order has the last scheme as maximum with the pictured predecessor", "[shuffle]") {
    for (const auto& s : enumerate_trees(4, 7)) {
        if (s.vertex_count() == 0) continue;
        INFO(format_tree(s));
        auto x = tensor(s, linear_tree(1));
        const int n = x.size();
        for (int i = 0; i < n; ++i) {
            CHECK(x.leq(0, i));
            CHECK(x.leq(i, n - 1));
        }
        const auto& last = x.schemes[n - 1];
        VertexId r = last.tree.root_vertex();
        CHECK(last.black[r]);
        CHECK(last.tree.vertex(r).inputs.size() == 1);
        if (n < 2) continue;
        int preds = 0;
        for (const auto& m : x.moves)
            if (m.to == n - 1) ++preds;
        CHECK(preds == 1);
        const auto& prev = x.schemes[n - 2];
        VertexId p = prev.tree.root_vertex();
        CHECK_FALSE(prev.black[p]);
        for (EdgeId c : prev.tree.vertex(p).inputs) {
            VertexId above = prev.tree.producer(c);
            REQUIRE(above != kNone);
            CHECK(prev.black[above]);
        }
    }
}

TEST_CASE("every scheme uses every colour", "[shuffle]") {
    auto trees = enumerate_trees(3, 4);
    for (const auto& s : trees)
        for (const auto& t : trees) {
            if (has_nullary(s) || has_nullary(t)) continue;
            for (const auto& sc : shuffles(s, t)) {
                EdgeSet a = 0, b = 0;
                for (auto [x, y] : sc.label) {
                    a |= bit(x);
                    b |= bit(y);
                }
                CHECK(a == s.all_edges());
                CHECK(b == t.all_edges());
            }
        }
}

TEST_CASE("a nullary black vertex swallows white colours", "[shuffle]") {
    auto ss = shuffles(corolla(2), corolla(0));
    bool short_scheme = false;
    for (const auto& sc : ss)
        if (sc.tree.edge_count() == 1) short_scheme = true;
    CHECK(short_scheme);
}

TEST_CASE("moves terminate without cycles", "[shuffle]") {
    for (const auto& s : enumerate_trees(4, 5))
        for (int q = 1; q <= 2; ++q) {
            auto x = tensor(s, linear_tree(q));
            for (int i = 0; i < x.size(); ++i)
                for (int j = 0; j < x.size(); ++j)
                    if (i != j && x.leq(i, j)) CHECK_FALSE(x.leq(j, i));
        }
}

TEST_CASE("the Boardman-Vogt relation identifies faces across schemes", "[shuffle]") {
    std::vector<std::pair<Tree, Tree>> pairs;
    auto small = enumerate_trees(2, 4);
    for (const auto& s : small)
        for (const auto& t : small) pairs.emplace_back(s, t);
    for (const auto& s : enumerate_trees(3, 5)) {
        pairs.emplace_back(s, linear_tree(1));
        pairs.emplace_back(linear_tree(1), s);
        pairs.emplace_back(s, linear_tree(2));
    }
    for (const auto& [s, t] : pairs) {
            auto x = tensor(s, t);
            for (const auto& m : x.moves) {
                // contract the inputs of the white vertex before the move and the
                // inputs of the black vertex after it
                const Tree& a = x.schemes[m.from].tree;
                const Tree& b = x.schemes[m.to].tree;
                EdgeId wa = x.edge_of(m.from, m.s, m.t);
                EdgeId bb = x.edge_of(m.to, m.s, m.t);
                REQUIRE(wa != kNone);
                REQUIRE(bb != kNone);
                Face fa = identity_face(a);
                for (EdgeId c : a.vertex(a.producer(wa)).inputs) fa.edges &= ~bit(c);
                Face fb = identity_face(b);
                for (EdgeId c : b.vertex(b.producer(bb)).inputs) fb.edges &= ~bit(c);
                REQUIRE(is_face(a, fa));
                REQUIRE(is_face(b, fb));
                CHECK(x.world.id(m.from, fa) == x.world.id(m.to, fb));
            }
        }
}

TEST_CASE("common faces lie below common predecessors", "[shuffle]") {
    for (const auto& s : enumerate_trees(3, 6)) {
        if (s.vertex_count() == 0) continue;
        auto x = tensor(s, linear_tree(1));
        for (int i = 0; i < x.size(); ++i)
            for (int j = 0; j < x.size(); ++j)
                if (i != j) CHECK(common_face_bound(x, i, j));
    }
}

TEST_CASE("spines", "[shuffle]") {
    auto c = tensor(corolla(2), linear_tree(1));
    CHECK(spines(c, 0).size() == 2);
    CHECK_THROWS_AS(spines(c, 1), DendroError);
    auto l = tensor(linear_tree(2), linear_tree(1));
    CHECK(spines(l, 0).size() == 1);

    for (const auto& s : enumerate_trees(4, 7)) {
        if (s.vertex_count() == 0) continue;
        auto x = tensor(s, linear_tree(1));
        EdgeId one = linear_tree(1).root();
        for (int k = 0; k + 1 < x.size(); ++k) {
            const auto& sc = x.schemes[k];
            auto sp = spines(x, k);
            CHECK(sp.size() == static_cast<std::size_t>(std::count(sc.black.begin(), sc.black.end(), 1)));
            for (const auto& f : sp) {
                auto fs = face_structure(sc.tree, f);
                REQUIRE(fs);
                // the only black vertex of a spine is its top vertex
                EdgeId top = kNone;
                for (const auto& fv : fs->vertices)
                    if (popcount(fv.region) == 1 && sc.black[bits_of(fv.region)[0]]) top = fv.output;
                REQUIRE(top != kNone);
                CHECK(sc.label[top].second == one);
                CHECK(fs->is_inner(top));
            }
        }
    }
}

TEST_CASE("initial segments", "[shuffle]") {
    CHECK(initial_segments(linear_tree(2)).size() == 3);
    CHECK(initial_segments(corolla(2)).size() == 2);
    Tree b = parse_tree("(r (x a b) (y c d))");
    CHECK(initial_segments(b).size() == 5);
    for (const auto& f : initial_segments(b)) CHECK(is_face(b, f));
}

TEST_CASE("cylinder subobjects", "[shuffle]") {
    auto x = tensor(linear_tree(1), linear_tree(1));
    auto a0 = a0_left(x);
    auto slice = x.world.find_tree(parse_tree("(1|1 0|1)"));
    REQUIRE(slice);
    CHECK(a0.contains(*slice));

    auto c = tensor(corolla(2), linear_tree(1));
    CHECK_FALSE(a0_left(c).contains(c.cell(0)));
    CHECK(cumulative(c, a0_left(c), c.size()) == whole(c));
    CHECK(is_closed(c.world, a0_left(c)));
    auto r = tensor(linear_tree(1), corolla(2));
    CHECK(is_closed(r.world, b0_right(r)));
}

TEST_CASE("colour description of the cylinder bases", "[shuffle]") {
    for (const auto& s : enumerate_trees(3, 6)) {
        if (s.vertex_count() == 0) continue;
        Tree i1 = linear_tree(1);
        {
            auto x = tensor(s, i1);
            auto a0 = a0_left(x);
            if (!has_nullary(s))
                for (CellId c = 0; c < static_cast<CellId>(x.world.size()); ++c)
                    CHECK(a0.contains(c) == misses_left_colour_or_slice(x, c, i1.root()));
        }
        {
            auto x = tensor(i1, s);
            auto b0 = b0_right(x);
            if (!has_nullary(s))
                for (CellId c = 0; c < static_cast<CellId>(x.world.size()); ++c)
                    CHECK(b0.contains(c) == misses_right_colour_or_slice(x, c, i1.leaves()[0]));
        }
    }
}

TEST_CASE("colour description fails in the presence of nullary vertices", "[shuffle]") {
    // chopping the nullary vertex keeps every colour
    Tree s = corolla(0);
    auto x = tensor(s, linear_tree(1));
    auto a0 = a0_left(x);
    bool differs = false;
    for (CellId c = 0; c < static_cast<CellId>(x.world.size()); ++c)
        if (a0.contains(c) != misses_left_colour_or_slice(x, c, linear_tree(1).root())) differs = true;
    CHECK(differs);
}
