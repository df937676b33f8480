#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dendro/tree.hpp"

namespace dendro {

// A face of a host tree: the vertex set of the retained outer subtree together
// with the surviving edges. Vertices matter because chopping a nullary top
// vertex keeps every edge.
struct Face {
    EdgeSet edges = 0;
    VertexSet vertices = 0;

    auto operator<=>(const Face&) const = default;
    bool operator==(const Face&) const = default;
};

struct FaceHash {
    std::size_t operator()(const Face& f) const noexcept {
        std::uint64_t h = f.edges * 0x9E3779B97F4A7C15ULL;
        h ^= f.vertices + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

inline bool is_subface(const Face& g, const Face& f) {
    return (g.edges & ~f.edges) == 0 && (g.vertices & ~f.vertices) == 0;
}

inline Face identity_face(const Tree& t) { return Face{t.all_edges(), t.all_vertices()}; }

inline int face_size(const Face& f) { return popcount(f.edges); }

// Order used everywhere faces are listed: edge count, vertex count, bits.
bool face_less(const Face& a, const Face& b);

// The tree underlying a face, in host coordinates. Each face vertex records the
// region of host vertices it composes.
struct FaceVertex {
    EdgeId output = kNone;
    std::vector<EdgeId> inputs;  // host edges, in host traversal order
    VertexSet region = 0;
};

struct FaceStructure {
    EdgeId root = kNone;
    std::vector<FaceVertex> vertices;
    std::vector<std::int32_t> producer;  // host edge -> face vertex or kNone
    std::vector<std::int32_t> consumer;

    bool has(EdgeId e) const { return producer.at(e) != kNone || consumer.at(e) != kNone || e == root; }
    bool is_leaf(EdgeId e) const { return producer.at(e) == kNone; }
    bool is_inner(EdgeId e) const { return producer.at(e) != kNone && consumer.at(e) != kNone; }
};

// nullopt if (edges, vertices) is not a face of host
std::optional<FaceStructure> face_structure(const Tree& host, const Face& f);
bool is_face(const Tree& host, const Face& f);
FaceStructure require_structure(const Tree& host, const Face& f);

struct FaceShape {
    Tree tree;                      // edge names copied from the host
    std::vector<EdgeId> to_host;    // shape edge -> host edge
    std::vector<VertexSet> region;  // shape vertex -> host vertices
};

FaceShape face_shape(const Tree& host, const Face& f);
// A face of the shape of f, mapped back into host coordinates.
Face face_to_host(const FaceShape& shape, const Face& g);

// Faces of host lying below f (f included), sorted by face_less.
std::vector<Face> subfaces(const Tree& host, const Face& f);
void for_each_subface(const Tree& host, const Face& f, const std::function<void(const Face&)>& fn);
std::vector<Face> all_faces(const Tree& host);

enum class FaceKind { inner, outer };

struct ElementaryFace {
    Face face;
    FaceKind kind = FaceKind::inner;
    EdgeId edge = kNone;  // contracted edge for inner faces, kept edge for corolla faces
    std::int32_t vertex = kNone;  // chopped face vertex (index into FaceStructure) for outer faces
    bool top = false;             // outer face obtained by chopping a top vertex
};

// Elementary faces of f, in host coordinates. A corolla with n inputs has its
// n+1 single-edge faces as outer faces.
std::vector<ElementaryFace> elementary_faces(const Tree& host, const Face& f);
std::vector<ElementaryFace> elementary_faces(const Tree& t);

enum class HornKind { inner, end, root };

const char* horn_kind_name(HornKind k);
std::optional<HornKind> parse_horn_kind(std::string_view s);

// The horn of f missing one elementary face. `marker` is the contracted edge
// for inner horns and the output edge of the chopped unary vertex otherwise.
struct HornSpec {
    HornKind kind = HornKind::inner;
    EdgeId marker = kNone;
};

// nullopt when the marker does not determine a legal horn of that kind.
std::optional<Face> horn_missing_face(const Tree& host, const Face& f, const HornSpec& spec);
std::vector<Face> horn_generators(const Tree& host, const Face& f, const HornSpec& spec);

// Downward closed set of faces of one host tree.
class Subcomplex {
public:
    Subcomplex() = default;
    explicit Subcomplex(std::shared_ptr<const Tree> host);

    static Subcomplex closure(std::shared_ptr<const Tree> host, const std::vector<Face>& generators);
    static Subcomplex full(std::shared_ptr<const Tree> host);

    const Tree& host() const { return *host_; }
    std::shared_ptr<const Tree> host_ptr() const { return host_; }
    const std::vector<Face>& faces() const { return faces_; }
    std::size_t size() const { return faces_.size(); }
    bool contains(const Face& f) const;
    bool is_closed() const;
    // maximal faces
    std::vector<Face> generators() const;

    Subcomplex unite(const Subcomplex& other) const;
    Subcomplex intersect(const Subcomplex& other) const;
    bool subset_of(const Subcomplex& other) const;
    bool operator==(const Subcomplex& other) const;

private:
    void check_host(const Subcomplex& other) const;
    std::shared_ptr<const Tree> host_;
    std::vector<Face> faces_;  // sorted by face_less, no repeats
};

Subcomplex boundary(std::shared_ptr<const Tree> t);
Subcomplex inner_horn(std::shared_ptr<const Tree> t, EdgeId e);
Subcomplex end_horn(std::shared_ptr<const Tree> t, EdgeId vertex_output);
Subcomplex root_horn(std::shared_ptr<const Tree> t);
Subcomplex horn(std::shared_ptr<const Tree> t, const HornSpec& spec);

// Face of host spanned by a tree whose edge names are host edge names, read as
// the outer subtree it spans with un-named inner edges contracted.
std::optional<Face> face_from_named_tree(const Tree& host, const Tree& named);

}  // namespace dendro
