#ifndef RMH_HIERARCHY_HPP
#define RMH_HIERARCHY_HPP

#include <map>
#include <string>
#include <vector>

#include "rmh/tree.hpp"

namespace rmh {

/// Unordered block-pair cells {l,k}, 0 <= l <= k < K, packed row-major into
/// the upper triangle: id = l*K - l*(l-1)/2 + (k-l).
inline int cell_count(int k_star) { return k_star * (k_star + 1) / 2; }

inline int cell_id(int l, int k, int k_star) {
    return l * k_star - l * (l - 1) / 2 + (k - l);
}

inline std::pair<int, int> cell_pair(int id, int k_star) {
    int l = 0;
    int row_start = 0;
    while (row_start + (k_star - l) <= id) {
        row_start += k_star - l;
        ++l;
    }
    return {l, l + (id - row_start)};
}

struct Motif {
    std::string label;
    int leaf_count = 0;
};

/// The full structural hypothesis: tree, motif level, motif library, the
/// metablock -> motif assignment, and the flat block sizes.  Flat block
/// indices follow the depth-first left-to-right leaf order.
struct HierarchySpec {
    RootedTree tree;
    int motif_level = 1;
    std::vector<Motif> motifs;
    std::vector<int> motif_of_metablock;  // node id -> motif index, -1 elsewhere
    std::vector<long long> block_sizes;   // per flat block

    // Derived lookups.
    std::vector<int> leaf_order;          // flat block -> leaf node id
    std::vector<int> block_of_leaf;       // node id -> flat block, -1 elsewhere
    std::vector<int> metablock_of_node;   // node id -> ancestor at motif_level, -1 above it
    std::vector<int> motif_leaf_index;    // leaf node id -> index among its metablock's leaves

    int k_star() const { return static_cast<int>(leaf_order.size()); }
    long long total_vertices() const;
    int motif_index(const std::string& label) const;  // -1 when absent
};

/// Validates and derives the lookups.  motif_map maps metablock node ids to
/// motif indices; every node at depth motif_level must appear and same-motif
/// metablocks must have identical descendant-leaf counts.
HierarchySpec make_hierarchy_spec(RootedTree tree, int motif_level,
                                  std::vector<Motif> motifs,
                                  const std::map<int, int>& motif_map,
                                  std::vector<long long> block_sizes);

/// Partition of the K*(K*+1)/2 cells into tied parameter groups.
struct ParameterGroup {
    int id = 0;
    std::vector<int> cells;
    bool testable() const { return cells.size() >= 2; }
    int df() const { return static_cast<int>(cells.size()) - 1; }
};

struct ParameterGroups {
    int k_star = 0;
    std::vector<ParameterGroup> groups;
    std::vector<int> group_of_cell;
    std::size_t size() const { return groups.size(); }
    long long cells_total() const;
};

/// Two cells share a group iff the repeated-motif hypothesis makes them
/// stochastically identical: same motif-internal cell across copies of one
/// motif, same motif-pair under one parent at the motif level, or the same
/// child-pair entry of a level matrix above it.
ParameterGroups build_parameter_groups(const HierarchySpec& spec);

struct FlatModel {
    int k_star = 0;
    std::vector<double> probs;  // packed upper triangle
    std::vector<long long> block_sizes;

    double prob(int l, int k) const {
        return l <= k ? probs[cell_id(l, k, k_star)] : probs[cell_id(k, l, k_star)];
    }
    std::vector<std::vector<double>> dense() const;
};

using Matrix = std::vector<std::vector<double>>;

/// Flattens the hierarchical model to a K* x K* SBM.  level_matrices holds
/// one symmetric matrix per internal node above the motif level, indexed by
/// child position; motif_matrices one per motif label over its leaves.  Cells
/// inside a metablock read the motif matrix, cells across read the entry of
/// the matrix at their lowest common ancestor.
FlatModel flatten_model(const HierarchySpec& spec,
                        const std::map<int, Matrix>& level_matrices,
                        const std::map<std::string, Matrix>& motif_matrices);

/// Vertex -> flat block index.
using Membership = std::vector<int>;

/// Canonical membership: consecutive runs of block_sizes vertices per block.
Membership membership_from_block_sizes(const std::vector<long long>& block_sizes);

/// True iff tau and the spec's leaf-induced vertex partition have the same
/// level sets (labels themselves may differ).
bool check_compatibility(const Membership& tau, const HierarchySpec& spec);

} // namespace rmh

#endif
