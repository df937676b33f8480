#pragma once

#include <optional>
#include <random>
#include <vector>

#include "dendro/face.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using Forest = std::vector<Tree>;

// Forest members joined over a new vertex (the apex) with output edge 0,
// followed by unary vertices down to the root edge n. Chain edges are named
// "0".."n"; forest edges keep their names, with primes appended on clashes.
struct RootJoin {
    Tree tree;
    std::vector<std::vector<EdgeId>> tree_maps;  // member edge -> edge of tree
    std::vector<EdgeId> chain;                   // chain[j] is edge j
    VertexId apex = kNone;
    std::vector<VertexId> chain_vertices;  // chain_vertices[j] has output chain[j+1]
};

RootJoin forest_star(const Forest& forest, int n);

// Forest F with T isomorphic to F*1, for trees with at least two vertices and
// a unary root vertex.
std::optional<Forest> has_unary_root_join(const Tree& t);
// Every (F, n) with T isomorphic to F*n.
std::vector<std::pair<Forest, int>> join_decompositions(const Tree& t);

bool is_admissible(const Tree& t, EdgeSet a);

struct BoundaryForest {
    std::vector<Face> parts;  // each member as a face of the original tree
    VertexSet absorbed = 0;   // vertices deleted together with a root edge
    VertexSet pruned = 0;     // vertices removed above a deleted leaf
    Forest trees(const Tree& t) const;
};

// Delete the edges of an admissible set: root edges with the vertex above,
// leaves with everything above the vertex below them, inner edges by
// contraction. With an rng the applicable steps are taken in random order.
BoundaryForest boundary_forest(const Tree& t, EdgeSet a, std::mt19937* rng = nullptr);

// Canonical ordering of a forest by canonical code.
Forest sorted_forest(Forest f);
bool same_forest(const Forest& a, const Forest& b);

// A per-tree admissible set on a forest.
using AdmissibleSet = std::vector<EdgeSet>;

std::vector<AdmissibleSet> all_admissible_sets(const Forest& forest);

// The face of forest_star(forest, n) spanned by boundary_A(forest)*n, when the
// boundary forest embeds as a face (it does not when a member is reduced to
// nothing through a leaf).
std::optional<Face> join_boundary_face(const Forest& forest, const RootJoin& join, const AdmissibleSet& a,
                                       std::mt19937* rng = nullptr);

// The n-chain grafted above the leaf e through a new unary vertex (the link)
// with output e and input n. T keeps its names; chain edges are "0".."n",
// primed on clashes.
struct LeafJoin {
    Tree tree;
    std::vector<EdgeId> tree_map;  // T edge -> edge of tree
    std::vector<EdgeId> chain;     // chain[j] is edge j
    VertexId link = kNone;
    std::vector<VertexId> chain_vertices;  // chain_vertices[j] has output chain[j+1]
};

LeafJoin leaf_star(int n, const Tree& t, EdgeId e);

// Faces of T retaining the leaf e.
std::vector<Face> e_admissible_faces(const Tree& t, EdgeId e);

// For a tree S with a unary top vertex (given by its output edge), the tree T
// and leaf e with S isomorphic to 0*_e T.
struct UnaryTopSplit {
    Tree rest;
    EdgeId leaf = kNone;  // in rest
};
std::optional<UnaryTopSplit> unary_top_decomposition(const Tree& s, EdgeId vertex_output);

// The face n*_e R of leaf_star(n, T, e) for a face R of T retaining e.
Face leaf_join_face(const LeafJoin& join, const Face& r);

}  // namespace dendro
