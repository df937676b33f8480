#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dendro/world.hpp"

namespace dendro {

// A percolation scheme of S (x) T. Edge names are "s|t" built from the
// names of S and T; white vertices come from S, black ones from T.
struct Scheme {
    Tree tree;
    std::vector<std::pair<EdgeId, EdgeId>> label;  // edge -> (edge of S, edge of T)
    std::vector<char> black;                       // per vertex
    std::vector<VertexId> origin;                  // generating vertex of S or T
};

// One move: the white copy of v (vertex of S) sitting at colour (s, t) is
// pushed through the black vertex u of T with output t.
struct SchemeMove {
    int from = 0;
    int to = 0;
    VertexId white = kNone;
    VertexId black = kNone;
    EdgeId s = kNone;
    EdgeId t = kNone;
};

struct Tensor {
    Tree S;
    Tree T;
    std::vector<Scheme> schemes;  // a linear extension of the order; [0] is the minimum
    std::vector<SchemeMove> moves;
    std::vector<std::vector<char>> le;  // le[i][j]: schemes[i] precedes schemes[j]
    CellWorld world;

    int size() const { return static_cast<int>(schemes.size()); }
    bool leq(int i, int j) const { return le[i][j] != 0; }
    CellId cell(int i) const { return world.scheme_cell(i); }
    EdgeId edge_of(int i, EdgeId s, EdgeId t) const;  // kNone if colour absent
    std::string colour(EdgeId s, EdgeId t) const;
};

std::string colour_name(const Tree& S, const Tree& T, EdgeId s, EdgeId t);

// Schemes of S (x) T by closing the initial scheme under moves, in the
// discovery order; the moves index into the returned list.
std::vector<Scheme> shuffles(const Tree& S, const Tree& T, std::vector<SchemeMove>* moves = nullptr);
Tensor tensor(const Tree& S, const Tree& T);

// Image of Omega[S'] (x) Omega[T'] for trees whose edge names are edge names of
// S and T (as produced by face_shape).
CellSet tensor_image(const Tensor& x, const Tree& s_part, const Tree& t_part);
CellSet boundary_left(const Tensor& x);   // dOmega[S] (x) Omega[T]
CellSet boundary_right(const Tensor& x);  // Omega[S] (x) dOmega[T]
CellSet a0_left(const Tensor& x);         // dOmega[S] (x) Omega[T] u Omega[S] (x) {root of T}
CellSet b0_right(const Tensor& x);        // {leaf of S} (x) Omega[T] u Omega[S] (x) dOmega[T]
CellSet whole(const Tensor& x);
CellSet scheme_closure(const Tensor& x, int i);
// base together with the first k schemes
CellSet cumulative(const Tensor& x, const CellSet& base, int k);

// Colour test used in the cylinder arguments: the cell misses some colour of
// S, or all its labels have T-coordinate t.
bool misses_left_colour_or_slice(const Tensor& x, CellId c, EdgeId t);
bool misses_right_colour_or_slice(const Tensor& x, CellId c, EdgeId s);

// Common faces of schemes i and j lie in schemes preceding both.
bool common_face_bound(const Tensor& x, int i, int j);

// Minimal outer faces of scheme k containing a black vertex and the root, one
// per black vertex, in vertex order.
std::vector<Face> spines(const Tensor& x, int k);
// Faces obtained by chopping top vertices: vertex sets closed downward.
std::vector<Face> initial_segments(const Tree& t);

std::string scheme_dot(const Scheme& s);

}  // namespace dendro
