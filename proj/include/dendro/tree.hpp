#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dendro {

using EdgeId = std::int32_t;
using VertexId = std::int32_t;
using EdgeSet = std::uint64_t;
using VertexSet = std::uint64_t;

inline constexpr std::int32_t kNone = -1;
inline constexpr std::size_t kMaxEdges = 64;

class DendroError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Vertex {
    EdgeId output = kNone;
    std::vector<EdgeId> inputs;  // stored order; carries no meaning

    bool operator==(const Vertex&) const = default;
};

// A finite rooted non-planar tree. Edges and vertices are dense indices local
// to the value; names are display labels and must be unique.
class Tree {
public:
    Tree();  // the one-edge tree, edge named "0"
    Tree(std::vector<std::string> edge_names, std::vector<Vertex> vertices);

    static Tree eta(std::string name = "0");

    std::size_t edge_count() const { return names_.size(); }
    std::size_t vertex_count() const { return vertices_.size(); }
    EdgeId root() const { return root_; }

    const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
    const std::vector<Vertex>& vertices() const { return vertices_; }

    // vertex whose output is e, or kNone
    VertexId producer(EdgeId e) const { return producer_.at(e); }
    // vertex having e as an input, or kNone for the root
    VertexId consumer(EdgeId e) const { return consumer_.at(e); }

    bool is_leaf(EdgeId e) const { return producer(e) == kNone; }
    bool is_inner(EdgeId e) const { return producer(e) != kNone && consumer(e) != kNone; }
    bool is_outer(EdgeId e) const { return !is_inner(e); }
    bool is_top_vertex(VertexId v) const;
    VertexId root_vertex() const { return producer(root_); }

    std::vector<EdgeId> leaves() const;
    std::vector<EdgeId> inner_edges() const;
    EdgeSet all_edges() const;
    VertexSet all_vertices() const;

    const std::string& name(EdgeId e) const { return names_.at(e); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<EdgeId> find_edge(std::string_view name) const;
    EdgeId edge(std::string_view name) const;  // throws if absent

    // edges strictly above e (the subtree sitting on e, without e)
    EdgeSet edges_above(EdgeId e) const;
    VertexSet vertices_above(EdgeId e) const;

    bool operator==(const Tree& other) const {
        return names_ == other.names_ && vertices_ == other.vertices_;
    }

private:
    std::vector<std::string> names_;
    std::vector<Vertex> vertices_;
    std::vector<VertexId> producer_;
    std::vector<VertexId> consumer_;
    EdgeId root_ = 0;
};

inline EdgeSet bit(EdgeId e) { return EdgeSet{1} << e; }
inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }
std::vector<int> bits_of(std::uint64_t x);

Tree linear_tree(int n);  // edges "0".."n", 0 the leaf and n the root
Tree corolla(int n);      // root "r", leaves "a1".."an"

struct Grafted {
    Tree tree;
    std::vector<EdgeId> base_map;  // base edge -> edge of tree
    std::vector<EdgeId> top_map;   // top edge -> edge of tree
};

// Identify the root of `top` with the leaf `leaf` of `base`. Clashing names in
// `top` get primes appended.
Grafted graft(const Tree& base, EdgeId leaf, const Tree& top);

// Text form: a bare name is a leaf, "(e c1 c2 ...)" is a vertex with output e
// and the given inputs, "(e)" a nullary vertex.
Tree parse_tree(std::string_view text);
std::string format_tree(const Tree& t);
std::string to_dot(const Tree& t, std::string_view graph_name = "tree");

// Isomorphism-invariant code: "|" for a leaf, "(...)" with sorted child codes.
std::string canonical_code(const Tree& t);
std::string canonical_code_at(const Tree& t, EdgeId e);
Tree tree_from_code(std::string_view code);  // edges named in preorder

struct TreeIso {
    std::vector<EdgeId> edge_map;  // source edge -> target edge
};

std::optional<TreeIso> find_isomorphism(const Tree& source, const Tree& target);
bool is_isomorphism(const Tree& source, const Tree& target, const TreeIso& iso);
std::vector<TreeIso> automorphisms(const Tree& t);
TreeIso compose(const TreeIso& second, const TreeIso& first);  // second after first
TreeIso inverse(const TreeIso& iso);
TreeIso identity_iso(const Tree& t);

// Vertex map induced by an edge map that preserves outputs.
std::vector<VertexId> vertex_map(const Tree& source, const Tree& target, const TreeIso& iso);

// One representative per isomorphism class, sorted by size then code.
std::vector<Tree> enumerate_trees(int max_vertices, int max_edges);

// Tree literal used by the command line: "linear:n", "corolla:n" or an
// expression accepted by parse_tree.
Tree tree_literal(std::string_view text);

}  // namespace dendro
