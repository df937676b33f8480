#pragma once

#include <string>
#include <vector>

#include "dendro/certificate.hpp"
#include "dendro/joins.hpp"

namespace dendro {

struct SearchOptions {
    std::vector<HornKind> kinds{HornKind::inner};
    std::size_t budget = 200000;  // horn checks before giving up
    std::string segment;
};

// Adjoin cells of `target` to `start` one horn at a time, smallest missing
// cells first (ties by canonical code of the shape), backtracking when stuck.
// nullopt means the search gave up, not that no certificate exists.
std::optional<std::vector<Builder::Step>> search_steps(const CellWorld& w, const CellSet& start,
                                                       const CellSet& target, const SearchOptions& opt);

struct SearchResult {
    bool found = false;
    Certificate certificate;
    std::size_t checks = 0;
};

SearchResult certify_search(const HostWorld& hw, const CellSet& start, const CellSet& target,
                            const SearchOptions& opt = {});

struct FiltrationReport {
    bool ok = false;
    std::string message;
    Certificate certificate;
    HostWorld host;
    CellSet start;
    CellSet target;
    int segments = 0;      // schemes (cylinders) or face groups (joins)
    int fallbacks = 0;     // segments finished by generic search; joins: faces adjoined ahead of their join
    int skipped = 0;       // admissible sets or schemes that needed no step
    // cylinder clauses
    bool inner_segments = false;
    bool final_pushout = false;  // left: root horn at a unary black root
    bool exit_edge = false;      // left: the root Delta[1] is {e_S} (x) Delta[1]
    bool first_segment = false;  // right: Omega[T_1] meets B_0 in the horn at (0,r)
    bool end_clauses = false;    // right: every end step satisfies (i) and (ii)
    bool only_inner_or_end = false;
};

// Cylinder filtrations of Omega[S] (x) Delta[1] and Delta[1] (x) Omega[T].
FiltrationReport left_cylinder_filtration(const Tree& s);
FiltrationReport right_cylinder_filtration(const Tree& t);

// (U del_A(F) * Lambda^i[n]) u Omega[n] -> U del_A(F) * Delta[n] inside Omega[F * n].
FiltrationReport join_filtration(const Forest& forest, int n, int i, const std::vector<AdmissibleSet>& admissibles);
// (U Lambda^i[n] *_e R) u Omega[n] -> U Delta[n] *_e R inside Omega[n *_e T].
FiltrationReport leaf_join_filtration(const Tree& t, EdgeId e, int n, int i, const std::vector<Face>& faces);

// start and target of the two join lemmas, for cross-checking with search
struct JoinPair {
    HostWorld host;
    CellSet start;
    CellSet target;
    int unrealizable = 0;
};
JoinPair join_pair(const Forest& forest, int n, int i, const std::vector<AdmissibleSet>& admissibles);
JoinPair leaf_join_pair(const Tree& t, EdgeId e, int n, int i, const std::vector<Face>& faces);

std::string describe_report(const FiltrationReport& r);

}  // namespace dendro
