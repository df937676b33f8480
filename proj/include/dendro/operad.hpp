#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dendro/face.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using ColourId = std::int32_t;
using OpId = std::int32_t;
// sigma[j] is the slot of the operation that feeds slot j of the result
using Perm = std::vector<int>;

struct Profile {
    std::vector<ColourId> inputs;
    ColourId output = 0;
    auto operator<=>(const Profile&) const = default;
    bool operator==(const Profile&) const = default;
};

struct ProfileHash {
    std::size_t operator()(const Profile& p) const noexcept;
};

struct Operation {
    std::string name;
    Profile profile;
    int arity() const { return static_cast<int>(profile.inputs.size()); }
};

std::vector<Perm> permutations(int n);
Perm identity_perm(int n);
Perm compose_perm(const Perm& sigma, const Perm& tau);  // j -> sigma[tau[j]]
Perm inverse_perm(const Perm& sigma);
std::size_t perm_rank(const Perm& p);

// Colours, operations of arity <= bound with explicit symmetric action,
// units and partial compositions p o_slot q (slots 0-based). A composite
// whose arity exceeds the bound is left undefined.
class FiniteOperad {
public:
    FiniteOperad() = default;
    FiniteOperad(std::string name, std::vector<std::string> colours, int arity_bound);

    const std::string& name() const { return name_; }
    int arity_bound() const { return bound_; }

    std::size_t colour_count() const { return colours_.size(); }
    const std::string& colour(ColourId c) const { return colours_.at(c); }
    const std::vector<std::string>& colours() const { return colours_; }
    std::optional<ColourId> find_colour(std::string_view name) const;

    OpId add_operation(std::string name, Profile profile);
    std::size_t op_count() const { return ops_.size(); }
    const Operation& op(OpId id) const { return ops_.at(id); }
    std::optional<OpId> find_op(std::string_view name) const;
    const std::vector<OpId>& operations(const Profile& p) const;
    // every profile that has an operation
    std::vector<Profile> profiles() const;

    void set_unit(ColourId c, OpId u);
    OpId unit(ColourId c) const { return units_.at(c); }

    void set_action(OpId p, const Perm& sigma, OpId result);
    std::optional<OpId> act(OpId p, const Perm& sigma) const;

    void set_composition(OpId p, int slot, OpId q, OpId result);
    std::optional<OpId> compose(OpId p, int slot, OpId q) const;
    // all recorded compositions as (p, slot, q, result)
    std::vector<std::tuple<OpId, int, OpId, OpId>> compositions() const;

    // the profile p with inputs permuted: slot j gets input sigma[j]
    static Profile permuted(const Profile& p, const Perm& sigma);

private:
    std::string name_;
    std::vector<std::string> colours_;
    int bound_ = 0;
    std::vector<Operation> ops_;
    std::unordered_map<std::string, OpId> by_name_;
    std::unordered_map<Profile, std::vector<OpId>, ProfileHash> by_profile_;
    std::vector<OpId> units_;
    std::vector<std::vector<OpId>> action_;  // per op, indexed by perm_rank
    std::unordered_map<std::uint64_t, OpId> comp_;
};

// Operad given by rules on names, tabulated up to the arity bound.
struct OperadModel {
    std::string name;
    std::vector<std::string> colours;
    int arity_bound = 4;
    std::vector<Operation> operations;
    std::function<std::string(const Operation& p, int slot, const Operation& q)> compose;
    std::function<std::string(const Operation& p, const Perm& sigma)> act;
    std::function<std::string(ColourId c)> unit;
};
FiniteOperad tabulate(const OperadModel& m);

struct ValidationReport {
    bool ok = true;
    std::string law;  // first violated law
    std::string witness;
};
// Checks every law on composites of arity <= depth (the arity bound when depth < 0).
ValidationReport validate(const FiniteOperad& p, int depth = -1);

struct OperadMorphism {
    const FiniteOperad* source = nullptr;
    const FiniteOperad* target = nullptr;
    std::vector<ColourId> colour_map;
    std::vector<OpId> op_map;
};
OperadMorphism identity_morphism(const FiniteOperad& p);
ValidationReport validate_morphism(const OperadMorphism& f);

// An operation of Q(c; d) with a two-sided inverse, if any.
std::optional<OpId> inverse_of(const FiniteOperad& p, OpId u);
bool is_equivalence(const OperadMorphism& f);
bool is_operadic_fibration(const OperadMorphism& f);

// A dendrex of the nerve: a colour for each edge and an operation for each
// vertex, slots in the order of the vertex's stored inputs.
struct Dendrex {
    std::vector<ColourId> colour;
    std::vector<OpId> op;
    auto operator<=>(const Dendrex&) const = default;
    bool operator==(const Dendrex&) const = default;
};

std::vector<Dendrex> tree_dendrices(const FiniteOperad& p, const Tree& t);
// Restriction along a face of t; the result lives on face_shape(t, f).tree.
Dendrex restrict_dendrex(const FiniteOperad& p, const Tree& t, const Dendrex& x, const Face& f);
// The composite at a region of host vertices, slots in the order of `inputs`.
OpId region_composite(const FiniteOperad& p, const Tree& t, const Dendrex& x, VertexSet region, EdgeId output,
                      const std::vector<EdgeId>& inputs);

std::string operad_to_json(const FiniteOperad& p);
FiniteOperad operad_from_json(const std::string& text);

namespace samples {
FiniteOperad comm(int bound = 4);
FiniteOperad ass(int bound = 4);
// Z/k as unary operations only
FiniteOperad cyclic_group(int k);
// Z/k in every arity 0..bound, composition by addition (abelian, so an operad)
FiniteOperad cyclic_all_arities(int k, int bound = 3);
// unary 1, a, ..., a^k with a^(k+1) = a^k; with points: nullary operations
// p.1, ..., p.a^k acted on by left multiplication
FiniteOperad truncated_monoid(int k, bool points = false);
// colours a < b; Ass operations on profiles whose output is >= every input
FiniteOperad two_colour(int bound = 4);
// colours x, y with inverse unary operations f: x -> y and g: y -> x
FiniteOperad iso_pair();
// n colours, identities only
FiniteOperad discrete(int n);
}  // namespace samples

namespace sample_maps {
// arity n goes to the identity word 1..n
OperadMorphism comm_to_ass(const FiniteOperad& comm, const FiniteOperad& ass);
OperadMorphism discrete_to_iso_pair(const FiniteOperad& d2, const FiniteOperad& iso);
// the one-colour discrete operad onto the colour x
OperadMorphism point_to_iso_pair(const FiniteOperad& d1, const FiniteOperad& iso);
// Z/k -> Z/l reduction, l dividing k; both cyclic_group or both cyclic_all_arities
OperadMorphism cyclic_quotient(const FiniteOperad& big, const FiniteOperad& small);
}  // namespace sample_maps

// name -> sample operad, for the CLI
std::optional<FiniteOperad> sample_operad(std::string_view name);
std::vector<std::string> sample_operad_names();

}  // namespace dendro
