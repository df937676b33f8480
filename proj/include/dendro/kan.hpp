#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dendro/anodyne.hpp"
#include "dendro/operad.hpp"

namespace dendro {

// A corolla face named by labels: output and inputs, inputs sorted by name.
struct RegionKey {
    std::string output;
    std::vector<std::string> inputs;
    auto operator<=>(const RegionKey&) const = default;
    bool operator==(const RegionKey&) const = default;
};

// A map from a union of labeled trees into a dendroidal set: a colour for
// every edge label and an operation for every corolla face, slots in the
// order of the sorted input names.
struct NamedMap {
    std::map<std::string, ColourId> colour;
    std::map<RegionKey, OpId> op;
    auto operator<=>(const NamedMap&) const = default;
    bool operator==(const NamedMap&) const = default;
};

// A dendroidal set, materialized tree by tree. Nerves are N_d(P); cell
// backends are subcomplexes of a representable or of a tensor product, seen
// inside the nerve of the operad of their corollas.
class DendSet {
public:
    enum class Backend { nerve, representable, tensor };

    static DendSet nerve(FiniteOperad p);
    static DendSet representable(const Tree& t);
    // a subcomplex of Omega[t] given by cells of representable_world(t)
    static DendSet subcomplex(const Tree& t, const std::vector<Tree>& generators, std::string name);
    static DendSet tensor_subcomplex(std::shared_ptr<const Tensor> x, CellSet cells, std::string name);

    Backend backend() const { return backend_; }
    const std::string& name() const { return name_; }
    const FiniteOperad& operad() const { return *op_; }
    std::shared_ptr<const FiniteOperad> operad_ptr() const { return op_; }

    // a dendrex of the ambient nerve lies in this set
    bool admits(const Tree& t, const Dendrex& x) const;
    std::vector<Dendrex> dendrices(const Tree& t) const;

private:
    Backend backend_ = Backend::nerve;
    std::string name_;
    std::shared_ptr<const FiniteOperad> op_;
    std::shared_ptr<const CellWorld> world_;  // cell backends
    CellSet cells_;
    std::vector<std::int32_t> op_out_;               // cell backends: output label per operation
    std::vector<std::vector<std::int32_t>> op_ins_;  // input labels, empty for units
    std::vector<char> op_unit_;
    std::vector<std::vector<EdgeId>> label_edge_;  // per scheme, label -> edge or kNone

    static DendSet from_cells(std::shared_ptr<const CellWorld> w, CellSet cells, Backend b, std::string name);
};

// Maps from the cells k of world w into X, extending `fixed`, and lying over
// `base` along f when both are given. Stops after `limit` maps.
struct MapQuery {
    const NamedMap* fixed = nullptr;
    const OperadMorphism* over = nullptr;  // X -> Y
    const NamedMap* base = nullptr;         // a map into Y on the same cells
    std::size_t limit = SIZE_MAX;
};
std::vector<NamedMap> find_maps(const DendSet& x, const CellWorld& w, const CellSet& k, const MapQuery& q = {});

// A full dendrex of X on t, as a map from the representable, and back.
NamedMap named_of(const DendSet& x, const Tree& t, const Dendrex& d);
Dendrex dendrex_of(const DendSet& x, const Tree& t, const NamedMap& m);
// entries of m on the given cells only
NamedMap restrict_map(const NamedMap& m, const CellWorld& w, const CellSet& k);
// image along a morphism of operads
NamedMap push_map(const OperadMorphism& f, const NamedMap& m);
std::string describe_map(const DendSet& x, const NamedMap& m);

// X -> Y, or X -> point when target is null
struct LiftMap {
    const DendSet* source = nullptr;
    const DendSet* target = nullptr;
    const OperadMorphism* map = nullptr;
};

struct HornProblem {
    LiftMap p;
    Tree tree;
    HornSpec spec;
    NamedMap horn;                 // on the horn's cells
    std::optional<NamedMap> base;  // on all of Omega[tree], into the target
};

struct LiftResult {
    bool found = false;
    NamedMap filler;
    std::size_t fillers = 0;  // counted up to 2
};
LiftResult solve_lifting(const HornProblem& hp);

std::vector<NamedMap> horn_assignments(const DendSet& x, const Tree& t, const HornSpec& spec, std::size_t limit = SIZE_MAX);

struct KanReport {
    bool ok = true;
    bool unique = true;  // every horn had exactly one filler
    std::size_t trees = 0;
    std::size_t horns = 0;
    std::size_t assignments = 0;
    std::optional<HornProblem> counterexample;
    std::string message;
};
// Trees with at most max_vertices vertices and max_edges edges whose corolla
// faces fit the arity bound.
KanReport is_inner_kan(const DendSet& x, int max_vertices = 4, int max_edges = 8);
// lifting against every inner horn, for every square
KanReport is_inner_fibration(const LiftMap& p, int max_vertices = 3, int max_edges = 6);

// A 1-dendrex is a colour pair and a unary operation.
struct Edge1 {
    ColourId from = 0;
    ColourId to = 0;
    OpId op = kNone;
    auto operator<=>(const Edge1&) const = default;
    bool operator==(const Edge1&) const = default;
};
Dendrex edge_dendrex(const Edge1& e);   // on linear_tree(1)
Edge1 edge_of(const Dendrex& x);        // from linear_tree(1)

struct InvertibilityReport {
    bool invertible = false;
    std::optional<Edge1> inverse;
    std::optional<Dendrex> left_witness;   // on linear_tree(2): f then g, composite the identity
    std::optional<Dendrex> right_witness;  // g then f
};
// Throws DendroError when X is not inner Kan on trees with <= 3 vertices.
InvertibilityReport weakly_invertible(const DendSet& x, const Edge1& f, bool check_kan = true);
std::vector<Edge1> k_edges(const DendSet& x, bool check_kan = true);

enum class Verdict { filler, hypothesis_not_met, precondition_failed, counterexample };
const char* verdict_name(Verdict v);

struct TheoremReport {
    Verdict verdict = Verdict::precondition_failed;
    std::string message;
    bool hypothesis = false;
    bool search_found = false;  // every square over the horn assignment has a filler
    std::size_t squares = 0;
    std::optional<NamedMap> filler;
};
struct TheoremOptions {
    bool check_fibration = true;
    int fibration_vertices = 3;
    int fibration_edges = 6;
};
// Root horn of t (unary root vertex, at least two vertices).
TheoremReport theorem42_check(const LiftMap& p, const Tree& t, const NamedMap& horn, const TheoremOptions& opt = {});
// End horn of s at the unary top vertex with output top_output.
TheoremReport theoremA_check(const LiftMap& p, const Tree& s, EdgeId top_output, const NamedMap& horn,
                             const TheoremOptions& opt = {});

struct NormalReport {
    bool ok = true;
    std::size_t trees = 0;
    std::size_t dendrices = 0;
    std::optional<Tree> tree;
    std::optional<Dendrex> fixed;
    std::optional<TreeIso> automorphism;
};
NormalReport is_normal(const DendSet& x, int max_vertices = 4, int max_edges = 5);
// x . alpha, the action of an automorphism by precomposition
Dendrex act_automorphism(const FiniteOperad& p, const Tree& t, const Dendrex& x, const TreeIso& alpha);

// Maps Omega[C_n] (x) Delta[k] -> X constant at the profile on each copy of
// eta (x) Delta[k], for k <= max_dim.
struct MappingSpace {
    Profile profile;
    int max_dim = 0;
    std::vector<std::vector<NamedMap>> simplices;
    std::vector<std::vector<std::vector<int>>> faces;  // faces[k][x][j] indexes level k-1
};
MappingSpace mapping_space(const DendSet& x, const Profile& rho, int max_dim);
bool is_discrete(const MappingSpace& m);
// every horn Lambda^j[n], n <= max_dim, has a filler
bool satisfies_kan(const MappingSpace& m);

struct Pi0Report {
    std::size_t components = 0;
    std::vector<int> component;  // per vertex
    bool compared = false;       // nerve backends only
    bool bijective = false;
    std::vector<std::pair<int, OpId>> witness;  // component -> operation
    std::string message;
};
Pi0Report pi0_mapping_space(const DendSet& x, const Profile& rho);

// Extend every map (dOmega[S] (x) Delta[1] u Omega[S] (x) {1}) -> X along the
// left cylinder certificate: inner steps by filling, the final root step by
// theorem42_check.
struct CylinderLiftReport {
    bool ok = false;
    std::size_t maps = 0;
    std::size_t steps = 0;
    std::size_t root_steps = 0;
    std::string message;
};
CylinderLiftReport ev1_lifting(const DendSet& x, const Tree& s);

}  // namespace dendro
