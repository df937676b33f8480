#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dendro/shuffle.hpp"
#include "dendro/world.hpp"

namespace dendro {

// Where the cells of a certificate live: a representable Omega[T] or a tensor
// product Omega[S] (x) Omega[T].
struct Host {
    enum class Kind { tree, tensor };
    Kind kind = Kind::tree;
    Tree tree;  // representable
    Tree left;  // tensor factors
    Tree right;
};

// A world together with the tensor it came from, when there is one.
struct HostWorld {
    Host host;
    std::shared_ptr<const Tensor> tensor;  // null for representables
    std::shared_ptr<const CellWorld> own;
    const CellWorld& world() const { return tensor ? tensor->world : *own; }
};

HostWorld make_host_world(const Host& h);
HostWorld representable_world(const Tree& t);
HostWorld tensor_world(std::shared_ptr<const Tensor> x);

// One pushout along a horn. Cells are written as labeled trees; the marker is
// the label of the horn's edge (contracted edge, output of the chopped unary
// vertex, or root).
struct CertStep {
    Tree shape;
    HornKind kind = HornKind::inner;
    std::string marker;
    std::string segment;
};

struct Certificate {
    Host host;
    std::vector<Tree> start;   // generators
    std::vector<Tree> target;  // generators
    std::vector<CertStep> steps;
};

struct VerifyReport {
    bool ok = false;
    int failed_step = -1;  // -1: failure outside the steps (or none)
    std::string message;
    int inner_steps = 0;
    int end_steps = 0;
    int root_steps = 0;
};

VerifyReport verify_certificate(const Certificate& c);

std::string certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text);

// nullopt when adjoining c along the horn to `cur` is a pushout: the faces of
// c already in `cur` are exactly the horn.
std::optional<std::string> check_horn(const CellWorld& w, const CellSet& cur, CellId c, HornKind kind,
                                      std::int32_t marker);

// Incremental construction of a certificate over a world.
class Builder {
public:
    struct Step {
        CellId cell;
        HornKind kind;
        std::int32_t marker;  // label id
        std::string segment;
    };

    Builder(const CellWorld& w, CellSet start);

    const CellWorld& world() const { return *w_; }
    const CellSet& current() const { return cur_; }
    const std::vector<Step>& steps() const { return steps_; }

    // nullopt when the step is legal; otherwise why not
    std::optional<std::string> check(CellId c, HornKind kind, std::int32_t marker) const;
    bool adjoin(CellId c, HornKind kind, std::int32_t marker, const std::string& segment);

    struct Mark {
        CellSet cur;
        std::size_t steps;
    };
    Mark mark() const { return {cur_, steps_.size()}; }
    void rollback(const Mark& m);

    Certificate certificate(const Host& host, const CellSet& start, const CellSet& target) const;

private:
    const CellWorld* w_;
    CellSet cur_;
    std::vector<Step> steps_;
};

// Horns available on a cell: every inner edge, every unary top vertex, and
// the root when the root vertex is unary.
std::vector<HornSpec> horn_options(const CellWorld& w, CellId c, const std::vector<HornKind>& kinds);
std::int32_t marker_label(const CellWorld& w, CellId c, EdgeId scheme_edge);
// The cells of the horn of cell c, or nullopt when the spec is not a horn.
std::optional<CellSet> horn_cells(const CellWorld& w, CellId c, HornKind kind, std::int32_t marker);

std::vector<Tree> generator_trees(const CellWorld& w, const CellSet& s);
CellSet cells_from_trees(const CellWorld& w, const std::vector<Tree>& gens);

}  // namespace dendro
