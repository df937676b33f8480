#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dendro/face.hpp"

namespace dendro {

// Canonical encoding of a labeled tree: root label, then each vertex as
// (output label, arity, sorted input labels), vertices sorted by output label.
using LabelKey = std::vector<std::int32_t>;

struct LabelKeyHash {
    std::size_t operator()(const LabelKey& k) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto x : k) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

class LabelTable {
public:
    std::int32_t intern(const std::string& name);
    std::optional<std::int32_t> find(const std::string& name) const;
    const std::string& name(std::int32_t id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

private:
    std::unordered_map<std::string, std::int32_t> ids_;
    std::vector<std::string> names_;
};

// Key of the face f of a tree whose edges carry the given labels.
LabelKey face_key(const FaceStructure& fs, const std::vector<std::int32_t>& label_of_edge);
// Key of a tree whose edge names are its labels; names are interned.
LabelKey tree_key(const Tree& named, LabelTable& labels);
// As above but without interning; nullopt if some name is unknown.
std::optional<LabelKey> tree_key_lookup(const Tree& named, const LabelTable& labels);

using CellId = std::int32_t;

// The non-degenerate dendrices of a union of representables glued along
// labels: every face of every maximal tree, identified by labeled key.
class CellWorld {
public:
    struct Cell {
        int scheme = 0;  // a maximal tree containing the cell
        Face face;       // in that tree's coordinates
        LabelKey key;
        int edges = 0;
        int vertices = 0;
    };

    CellWorld() = default;
    // The edge names of each tree are its labels.
    explicit CellWorld(std::vector<Tree> maximal);

    std::size_t size() const { return cells_.size(); }
    std::size_t scheme_count() const { return trees_.size(); }
    const Tree& scheme(int i) const { return trees_.at(i); }
    const Cell& cell(CellId c) const { return cells_.at(c); }
    const LabelTable& labels() const { return labels_; }
    const std::vector<std::int32_t>& scheme_labels(int i) const { return scheme_labels_.at(i); }

    std::optional<CellId> find(int scheme, const Face& f) const;
    CellId id(int scheme, const Face& f) const;
    std::optional<CellId> find_key(const LabelKey& k) const;
    std::optional<CellId> find_tree(const Tree& named) const;
    CellId scheme_cell(int i) const { return top_.at(i); }

    // The cell's subfaces, itself included.
    std::vector<CellId> faces_of(CellId c) const;
    Tree cell_tree(CellId c) const;
    std::string describe(CellId c) const;

private:
    std::vector<Tree> trees_;
    LabelTable labels_;
    std::vector<std::vector<std::int32_t>> scheme_labels_;
    std::vector<std::unordered_map<Face, CellId, FaceHash>> lookup_;
    std::unordered_map<LabelKey, CellId, LabelKeyHash> by_key_;
    std::vector<Cell> cells_;
    std::vector<CellId> top_;
};

// Set of cells of a world.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(std::size_t n) : in_(n, 0) {}

    bool contains(CellId c) const { return in_.at(c) != 0; }
    bool insert(CellId c);
    void erase(CellId c);
    std::size_t size() const { return count_; }
    std::size_t universe() const { return in_.size(); }
    std::vector<CellId> members() const;

    CellSet unite(const CellSet& o) const;
    CellSet intersect(const CellSet& o) const;
    CellSet minus(const CellSet& o) const;
    bool subset_of(const CellSet& o) const;
    bool operator==(const CellSet& o) const { return in_ == o.in_; }

private:
    std::vector<char> in_;
    std::size_t count_ = 0;
};

CellSet close_cells(const CellWorld& w, const std::vector<CellId>& generators);
CellSet all_cells(const CellWorld& w);
bool is_closed(const CellWorld& w, const CellSet& s);
std::vector<CellId> maximal_cells(const CellWorld& w, const CellSet& s);

}  // namespace dendro
